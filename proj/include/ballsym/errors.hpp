#pragma once

#include <stdexcept>
#include <string>

namespace ballsym {

/// Base of every error raised by the library. `kind()` is a stable
/// machine-readable tag that the CLI copies into its reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define BALLSYM_ERROR(Name)                                                \
    class Name : public Error {                                            \
    public:                                                                \
        explicit Name(const std::string& what) : Error(#Name, what) {}     \
    }

BALLSYM_ERROR(InvalidArgument);
BALLSYM_ERROR(DimensionMismatch);
BALLSYM_ERROR(DivisionByZero);
BALLSYM_ERROR(UnsupportedInverse);
BALLSYM_ERROR(UnsupportedScalar);
BALLSYM_ERROR(DenominatorZero);
BALLSYM_ERROR(NonUnitary);
BALLSYM_ERROR(EmptySplit);
BALLSYM_ERROR(ConstantMap);
BALLSYM_ERROR(NonPositiveEigenvalue);
BALLSYM_ERROR(PointOnBoundary);
BALLSYM_ERROR(CapExceeded);
BALLSYM_ERROR(NotCyclicError);
BALLSYM_ERROR(NonzeroOrigin);
BALLSYM_ERROR(NotInvariant);
BALLSYM_ERROR(ParseError);

#undef BALLSYM_ERROR

}  // namespace ballsym

#pragma once

#include "ballsym/cyclotomic.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace ballsym {

using Real = boost::multiprecision::mpfr_float;

inline constexpr unsigned kDefaultPrecisionBits = 53;
inline constexpr double kDefaultTolerance = 1e-9;

/// Sets the working precision of newly created Real values for the
/// lifetime of the guard (thread local, restored on exit).
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_digits10_;
};

unsigned bits_to_digits10(unsigned bits);

/// Complex number with MPFR components. Approximate equality always takes
/// an explicit tolerance.
struct FloatComplex {
    Real re{0};
    Real im{0};
    unsigned precision = kDefaultPrecisionBits;

    FloatComplex() = default;
    FloatComplex(Real r, Real i, unsigned bits = kDefaultPrecisionBits)
        : re(std::move(r)), im(std::move(i)), precision(bits) {}
    explicit FloatComplex(double r, double i = 0.0, unsigned bits = kDefaultPrecisionBits)
        : re(r), im(i), precision(bits) {}

    FloatComplex conj() const { return {re, -im, precision}; }
    Real norm2() const { return re * re + im * im; }
    Real abs() const;
    double real_d() const { return re.convert_to<double>(); }
    double imag_d() const { return im.convert_to<double>(); }

    FloatComplex operator-() const { return {-re, -im, precision}; }
    FloatComplex& operator+=(const FloatComplex& o);
    FloatComplex& operator-=(const FloatComplex& o);
    FloatComplex& operator*=(const FloatComplex& o);
    FloatComplex& operator/=(const FloatComplex& o);
    friend FloatComplex operator+(FloatComplex a, const FloatComplex& b) { return a += b; }
    friend FloatComplex operator-(FloatComplex a, const FloatComplex& b) { return a -= b; }
    friend FloatComplex operator*(FloatComplex a, const FloatComplex& b) { return a *= b; }
    friend FloatComplex operator/(FloatComplex a, const FloatComplex& b) { return a /= b; }
};

/// |a - b| <= eps.
bool approx_equal(const FloatComplex& a, const FloatComplex& b, double eps = kDefaultTolerance);
double abs_diff(const FloatComplex& a, const FloatComplex& b);

/// Writes n = s^2 * r with r square-free; returns (s, r). n > 0.
std::pair<std::int64_t, std::int64_t> square_free_decompose(std::int64_t n);
bool is_square_free(std::int64_t n);

/// The positive square root of a square-free r, as a cyclotomic number
/// (quadratic Gauss sums; sqrt(2) = zeta_8 + zeta_8^-1).
CycloScalar sqrt_as_cyclotomic(std::int64_t r);

/// Conductor of Q(sqrt r) for square-free r > 1: r if r = 1 mod 4, else 4r.
/// sqrt(r) lies in Q(zeta_L) exactly when this divides L.
std::int64_t quadratic_conductor(std::int64_t r);

/// Finite sum of q_r * sqrt(r) over square-free positive radicands r, with
/// each q_r in a cyclotomic field. Terms with a zero coefficient are never
/// stored. The formal representation is not unique when a radical already
/// lies in the coefficient field, so the zero test first reduces to
/// canonical() form, whose radicals are linearly independent over the field.
class RadScalar {
public:
    RadScalar() = default;
    RadScalar(const CycloScalar& c);  // NOLINT(google-explicit-constructor)
    RadScalar(const mpq_class& q);    // NOLINT(google-explicit-constructor)
    RadScalar(long q) : RadScalar(mpq_class(q)) {}  // NOLINT(google-explicit-constructor)
    RadScalar(int q) : RadScalar(mpq_class(q)) {}   // NOLINT(google-explicit-constructor)

    /// Build from radicand -> coefficient; radicands must be square-free.
    static RadScalar from_terms(std::map<std::int64_t, CycloScalar> terms);
    /// c * sqrt(r) for any positive integer r (square factors are extracted).
    static RadScalar radical(std::int64_t r, const CycloScalar& c = CycloScalar(mpq_class(1)));
    /// Positive square root of a non-negative rational.
    static RadScalar sqrt_rational(const mpq_class& q);
    static RadScalar root_of_unity(std::int64_t order, std::int64_t k) {
        return RadScalar(CycloScalar::root_of_unity(order, k));
    }

    const std::map<std::int64_t, CycloScalar>& terms() const noexcept { return terms_; }
    /// lcm of the orders of the stored coefficients.
    std::int64_t order() const;

    /// Equivalent form over K = Q(zeta_order()): every coefficient lifted to
    /// order(), every radicand replaced by the smallest member of its class
    /// modulo radicands whose square root lies in K. Distinct radicands of
    /// the result are linearly independent over K.
    RadScalar canonical() const;

    /// True iff the formal term map is empty (the exact zero test is is_zero()).
    bool empty() const noexcept { return terms_.empty(); }
    bool is_zero() const;
    /// Exactly one radicand term after canonical().
    bool is_single_radicand() const;
    bool is_rational() const;
    /// Throws InvalidArgument unless is_rational().
    mpq_class rational_value() const;

    /// Value as an element of a single cyclotomic field.
    CycloScalar to_cyclotomic() const;
    /// Smallest order whose cyclotomic field contains this value's embedding.
    std::int64_t embedding_order() const;

    RadScalar conj() const;
    /// Inverse restricted to single-radicand values:
    /// (q sqrt r)^-1 = q^-1 / r * sqrt r. UnsupportedInverse otherwise.
    RadScalar inv() const;
    /// Inverse of any nonzero value (through the cyclotomic embedding when
    /// there are several radicands).
    RadScalar field_inverse() const;

    RadScalar operator-() const;
    RadScalar& operator+=(const RadScalar& o);
    RadScalar& operator-=(const RadScalar& o);
    RadScalar& operator*=(const RadScalar& o) { return *this = *this * o; }
    friend RadScalar operator+(RadScalar a, const RadScalar& b) { return a += b; }
    friend RadScalar operator-(RadScalar a, const RadScalar& b) { return a -= b; }
    friend RadScalar operator*(const RadScalar& a, const RadScalar& b);
    friend bool operator==(const RadScalar& a, const RadScalar& b) { return (a - b).is_zero(); }

    FloatComplex to_float(unsigned bits = kDefaultPrecisionBits) const;
    std::string to_string() const;

private:
    void add_term(std::int64_t r, const CycloScalar& c);
    std::map<std::int64_t, CycloScalar> terms_;
};

enum class RadOp { Add, Mul, Conj, Inv };

/// Dispatching form of the scalar operations; Conj and Inv ignore `b`.
RadScalar rad_arith(const RadScalar& a, const RadScalar& b, RadOp op);

/// Canonical cyclotomic element of order `order` from integer raw coefficients.
CycloScalar cyclo_make(std::int64_t order, std::span<const std::int64_t> raw);

FloatComplex to_float(const CycloScalar& c, unsigned bits = kDefaultPrecisionBits);
inline FloatComplex to_float(const RadScalar& r, unsigned bits = kDefaultPrecisionBits) {
    return r.to_float(bits);
}

}  // namespace ballsym

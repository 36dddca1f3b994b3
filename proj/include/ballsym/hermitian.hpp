#pragma once

#include "ballsym/matrix.hpp"
#include "ballsym/polymap.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ballsym {

/// Polynomial in z and w-bar treated as independent variables:
/// sum of c_{alpha,beta} z^alpha wbar^beta. Keys are the concatenation
/// (alpha, beta), ordered by total degree then lexicographically.
class HermitianPoly {
public:
    struct KeyLess {
        bool operator()(const MultiIndex& a, const MultiIndex& b) const;
    };
    using TermMap = std::map<MultiIndex, RadScalar, KeyLess>;

    HermitianPoly() = default;
    explicit HermitianPoly(std::size_t n) : n_(n) {}
    /// a(z) * conj(b)(wbar).
    static HermitianPoly outer(const Polynomial& a, const Polynomial& b);
    /// <z, w> = sum z_j wbar_j.
    static HermitianPoly inner_product(std::size_t n);

    std::size_t vars() const noexcept { return n_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    static MultiIndex key(const MultiIndex& alpha, const MultiIndex& beta);
    MultiIndex alpha_of(const MultiIndex& key) const;
    MultiIndex beta_of(const MultiIndex& key) const;

    RadScalar coefficient(const MultiIndex& alpha, const MultiIndex& beta) const;
    void add_term(const MultiIndex& alpha, const MultiIndex& beta, const RadScalar& c);

    HermitianPoly& operator+=(const HermitianPoly& o);
    HermitianPoly& operator-=(const HermitianPoly& o);
    friend HermitianPoly operator+(HermitianPoly a, const HermitianPoly& b) { return a += b; }
    friend HermitianPoly operator-(HermitianPoly a, const HermitianPoly& b) { return a -= b; }
    friend HermitianPoly operator*(const HermitianPoly& a, const HermitianPoly& b);
    friend bool operator==(const HermitianPoly& a, const HermitianPoly& b) { return (a - b).is_zero(); }

    /// Value at (z, w): w enters conjugated.
    RadScalar evaluate(const std::vector<RadScalar>& z, const std::vector<RadScalar>& w) const;

private:
    void add_key(const MultiIndex& k, const RadScalar& c);

    std::size_t n_ = 0;
    TermMap terms_;
};

/// Gram table <c_alpha, c_beta> of a map's (numerator) coefficients, with the
/// denominator carried alongside for rational maps.
struct PolarizedForm {
    HermitianPoly form;
    std::optional<Polynomial> denominator;

    std::size_t source_dim() const { return form.vars(); }
    RadScalar entry(const MultiIndex& alpha, const MultiIndex& beta) const { return form.coefficient(alpha, beta); }
    bool is_hermitian() const;
};

PolarizedForm polarized_form(const PolyMap& f);
PolarizedForm polarized_form(const RationalMap& f);

/// Certificate <p(z), p(w)> - q(z) conj(q)(w) = quotient (<z, w> - 1) + remainder,
/// proper iff the remainder is zero.
struct PropernessReport {
    bool proper = false;
    HermitianPoly quotient;
    HermitianPoly remainder;
};

/// Throws ConstantMap for constant input.
PropernessReport is_proper(const PolyMap& f);
PropernessReport is_proper(const RationalMap& f);
/// Re-multiplies the certificate against the map.
bool verify_certificate(const RationalMap& f, const PropernessReport& r);

/// Division of h by <z, w> - 1 in graded-lex order with leading term z1 wbar1.
std::pair<HermitianPoly, HermitianPoly> divide_by_sphere(const HermitianPoly& h);

/// |f|^2 = |g|^2 as Hermitian polynomials (cross-multiplied for rational maps).
bool norm_equal(const PolyMap& f, const PolyMap& g);
bool norm_equal(const RationalMap& f, const RationalMap& g);

struct UnitarySolveResult {
    enum class Status { Exact, Float, NoSolution };
    Status status = Status::NoSolution;
    std::optional<RadMatrix> exact;
    std::optional<FloatMatrix> approx;
    /// max of |U C_f - C_g| and |U* U - I| for the float result.
    double residual = 0.0;
    /// rank(C_f) < N: U is one deterministic choice among many.
    bool non_unique = false;
    std::string note;
};

/// U in U(N) with g = U o f. Columns of C_f are taken in graded-lex order;
/// the orthogonal complement is completed by unnormalized Gram-Schmidt.
UnitarySolveResult gram_unitary_solve(const PolyMap& f, const PolyMap& g, unsigned float_bits = kDefaultPrecisionBits);

/// ceil(max m / min m * support_degree); throws NonPositiveEigenvalue.
std::int64_t degree_bound(const std::vector<std::int64_t>& m, int support_degree);

}  // namespace ballsym

#pragma once

#include "ballsym/matrix.hpp"
#include "ballsym/scalar.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ballsym {

/// Exponent vector alpha of a monomial z^alpha.
struct MultiIndex {
    std::vector<int> entries;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : entries(std::move(e)) {}
    MultiIndex(std::initializer_list<int> e) : entries(e) {}
    static MultiIndex zero(std::size_t n) { return MultiIndex(std::vector<int>(n, 0)); }
    static MultiIndex unit(std::size_t n, std::size_t j) {
        MultiIndex m = zero(n);
        m.entries[j] = 1;
        return m;
    }

    std::size_t size() const noexcept { return entries.size(); }
    int operator[](std::size_t j) const { return entries[j]; }
    int degree() const;
    bool is_zero() const { return degree() == 0; }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    std::string to_string() const;
};

/// Graded-lexicographic order: lower total degree first, then larger
/// leading exponents first, so (2,0) < (1,1) < (0,2).
struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All multi-indices of length n with |alpha| = d, in graded-lex order.
std::vector<MultiIndex> multi_indices_of_degree(std::size_t n, int d);

/// Scalar polynomial in n variables.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, RadScalar, GradedLex>;

    Polynomial() = default;
    explicit Polynomial(std::size_t n) : n_(n) {}
    static Polynomial constant(std::size_t n, const RadScalar& c);
    static Polynomial variable(std::size_t n, std::size_t j);
    static Polynomial monomial(const MultiIndex& alpha, const RadScalar& c);

    std::size_t vars() const noexcept { return n_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    int degree() const;
    RadScalar coefficient(const MultiIndex& alpha) const;
    RadScalar constant_term() const { return coefficient(MultiIndex::zero(n_)); }

    void add_term(const MultiIndex& alpha, const RadScalar& c);

    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const RadScalar& s, const Polynomial& p);
    Polynomial pow(int k) const;
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return (a - b).is_zero(); }

    RadScalar evaluate(const std::vector<RadScalar>& z) const;
    FloatComplex evaluate(const std::vector<FloatComplex>& z) const;

private:
    std::size_t n_ = 0;
    TermMap terms_;
};

/// Polynomial map C^n -> C^N: sum over alpha of c_alpha z^alpha with
/// coefficient vectors c_alpha in C^N. No stored vector is identically zero.
class PolyMap {
public:
    using TermMap = std::map<MultiIndex, std::vector<RadScalar>, GradedLex>;

    PolyMap() = default;
    PolyMap(std::size_t source_dim, std::size_t target_dim) : n_(source_dim), N_(target_dim) {}
    static PolyMap identity(std::size_t n);
    /// Map whose i-th component is components[i]; all share vars() = n.
    static PolyMap from_components(std::size_t n, const std::vector<Polynomial>& components);

    std::size_t source_dim() const noexcept { return n_; }
    std::size_t target_dim() const noexcept { return N_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Max |alpha| over the support; 0 for the zero map.
    int degree() const;
    bool is_constant() const;
    std::vector<RadScalar> value_at_origin() const;
    bool vanishes_at_origin() const;

    void add_term(const MultiIndex& alpha, const std::vector<RadScalar>& c);
    Polynomial component(std::size_t i) const;
    std::vector<MultiIndex> support() const;
    /// N x |support| matrix of coefficient columns in graded-lex order.
    RadMatrix coefficient_matrix() const;

    friend bool operator==(const PolyMap& a, const PolyMap& b);

private:
    std::size_t n_ = 0;
    std::size_t N_ = 0;
    TermMap terms_;
};

/// numerator / denominator with denominator(0) = 1.
struct RationalMap {
    PolyMap numerator;
    Polynomial denominator;

    RationalMap() = default;
    /// Normalizes so that denominator(0) = 1; throws DenominatorZero if the
    /// denominator vanishes at the origin.
    RationalMap(PolyMap num, Polynomial den);
    static RationalMap from_poly(const PolyMap& f);

    std::size_t source_dim() const { return numerator.source_dim(); }
    std::size_t target_dim() const { return numerator.target_dim(); }
    bool is_polynomial() const;
};

/// f(z) q(z) componentwise.
PolyMap multiply(const PolyMap& f, const Polynomial& q);

/// Cross-multiplied identity p1 q2 = p2 q1.
bool equal(const RationalMap& a, const RationalMap& b);

struct SpanReport {
    std::size_t rank = 0;
    std::vector<std::vector<RadScalar>> basis;
    /// Multi-indices whose coefficient vectors form `basis`.
    std::vector<MultiIndex> basis_support;
};

class BallAutomorphism;

std::vector<RadScalar> evaluate(const PolyMap& f, const std::vector<RadScalar>& z);
std::vector<FloatComplex> evaluate(const PolyMap& f, const std::vector<FloatComplex>& z);
/// Throws DenominatorZero when q(z) = 0.
std::vector<RadScalar> evaluate(const RationalMap& f, const std::vector<RadScalar>& z);
std::vector<FloatComplex> evaluate(const RationalMap& f, const std::vector<FloatComplex>& z,
                                   double eps = kDefaultTolerance);

/// f(A z) for any n x n matrix A (no unitarity check).
PolyMap compose_linear(const PolyMap& f, const RadMatrix& a);
/// f o U; throws NonUnitary unless U* U = I exactly.
PolyMap compose_unitary(const PolyMap& f, const RadMatrix& u);
/// A o f for an N' x N matrix A.
PolyMap left_multiply(const RadMatrix& a, const PolyMap& f);
/// f o gamma as a rational map with denominator (c.z + d)^deg(f), q(0) = 1.
RationalMap compose_automorphism(const PolyMap& f, const BallAutomorphism& gamma);

/// Symmetric tensor power z -> z^{(x) m}: components sqrt(multinomial(m; alpha)) z^alpha
/// over |alpha| = m in graded-lex order.
PolyMap tensor_power(std::size_t n, int m);
/// Replace each component g_i, i in split (0-based), by g_i z_1, ..., g_i z_n.
PolyMap partial_tensor(const PolyMap& f, const std::set<std::size_t>& split);
/// (sqrt(t) f) (+) (sqrt(1 - t) g).
PolyMap direct_sum(const PolyMap& f, const PolyMap& g, const mpq_class& t);
/// 0 (+) f with k leading zero components.
PolyMap pad(const PolyMap& f, std::size_t k);
/// (z1, z1 z2, z2^2).
PolyMap whitney_map();

SpanReport span_rank(const PolyMap& f);
inline bool is_minimal(const PolyMap& f) { return span_rank(f).rank == f.target_dim(); }

/// Minimum of |q| over `samples` points of the closed ball (directions times
/// radii in [0, 1]); a numeric check, not a proof.
double sample_denominator_min(const RationalMap& f, std::size_t samples = 1000);

/// Deterministic pseudo-random points.
std::vector<FloatComplex> random_sphere_point(std::size_t n, std::uint64_t seed);
std::vector<FloatComplex> random_ball_point(std::size_t n, std::uint64_t seed, double max_radius = 0.95);

}  // namespace ballsym

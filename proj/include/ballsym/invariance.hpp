#pragma once

#include "ballsym/autgroup.hpp"
#include "ballsym/hermitian.hpp"
#include "ballsym/lattice.hpp"
#include "ballsym/polymap.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ballsym {

enum class LatticeMode { Gram, Support };

/// Integer lattice spanned by the rows of `basis`, with verified Smith form.
struct ExponentLattice {
    std::size_t dim = 0;
    IntMatrix basis;
    SmithForm snf;

    std::size_t rank() const noexcept { return snf.rank(); }
    const std::vector<mpz_class>& invariant_factors() const noexcept { return snf.invariant_factors; }
};

ExponentLattice make_lattice(const IntMatrix& rows, std::size_t dim);
/// Gram mode: alpha - beta over pairs with <c_alpha, c_beta> != 0.
/// Support mode: the support exponents themselves.
ExponentLattice exponent_lattice(const PolyMap& f, LatticeMode mode);

struct FiniteGenerator {
    std::vector<mpq_class> turns;  // entries in [0, 1)
    mpz_class order;
};

/// Closed subgroup {theta : theta . v in Z for v in the lattice} of the torus
/// (R/Z)^n, angles in full turns: a continuous part spanned by
/// `continuous_basis` plus a finite part generated by `finite_generators`.
struct TorusSubgroup {
    std::size_t dim = 0;
    std::vector<std::vector<mpq_class>> continuous_basis;
    std::vector<FiniteGenerator> finite_generators;
    IntMatrix lattice;

    std::size_t continuous_dim() const noexcept { return continuous_basis.size(); }
    mpz_class finite_order() const;
    bool contains(const std::vector<mpq_class>& theta) const;
};

TorusSubgroup torus_dual(const ExponentLattice& lattice);

/// Diagonal theta with |f o diag(e^{2 pi i theta})|^2 = |f|^2; throws NonzeroOrigin.
TorusSubgroup torus_invariance_group(const PolyMap& f);
/// Diagonal theta with f o diag(e^{2 pi i theta}) = f.
TorusSubgroup diagonal_fixing_group(const PolyMap& f);

struct HfReport {
    std::size_t k = 0;  // N - span rank
    std::vector<std::vector<RadScalar>> span_basis;
    std::vector<std::vector<RadScalar>> complement_basis;  // orthogonal complement of the span
};
/// Throws NonzeroOrigin.
HfReport hf_group(const PolyMap& f);

struct PhiResult {
    bool member = false;
    bool exact = true;
    BallAutomorphism gamma;
    std::optional<BallAutomorphism> psi;
    std::optional<FloatAutomorphism> psi_float;
    bool unique = false;  // span rank = N
    double residual = 0.0;
    std::string note;
};

/// Whether gamma lies in Gamma_f, and if so a psi with f o gamma = psi o f.
/// Requires f(0) = 0 (NonzeroOrigin otherwise).
PhiResult gamma_membership(const PolyMap& f, const BallAutomorphism& gamma);
/// Float backend: decides by comparing sample Gram matrices of f and
/// tau o f o gamma; psi_float is filled when f is minimal.
PhiResult gamma_membership_float(const PolyMap& f, const FloatAutomorphism& gamma,
                                 unsigned bits = kDefaultPrecisionBits);

/// {g in candidates : f o g = f}.
FiniteUnitaryGroup phi_kernel(const PolyMap& f, const FiniteUnitaryGroup& candidates);

struct GradedReport {
    std::vector<std::int64_t> m;
    std::vector<std::size_t> positive_indices;  // 0-based
    std::optional<std::int64_t> restricted_degree_bound;
    int spanning_degree = 0;   // max |alpha| over a spanning set of the restriction
    int restricted_degree = 0;  // degree of f with the other variables set to zero
    bool restriction_is_polynomial = true;
    bool within_bound = true;
};

/// Throws NotInvariant when some Gram-coupled pair has m . (alpha - beta) != 0,
/// NonzeroOrigin when f(0) != 0.
GradedReport graded_analysis(const PolyMap& f, const std::vector<std::int64_t>& m);

struct CyclicConstraint {
    std::vector<std::int64_t> weights;
    std::int64_t order = 1;
};

struct MonomialSolveResult {
    enum class Status { Feasible, Infeasible, Undecided };
    Status status = Status::Infeasible;
    std::vector<MultiIndex> exponents;  // after filtering
    std::vector<mpq_class> weights;     // d_alpha, aligned with exponents
    std::optional<PolyMap> map;         // components sqrt(d_alpha) z^alpha over d_alpha > 0
    std::string certificate;
};

inline constexpr std::size_t kMaxVertexDimension = 6;

/// Nonnegative d_alpha with sum d_alpha x^alpha = 1 on the simplex sum x_j = 1.
MonomialSolveResult monomial_proper_solve(std::size_t n, const std::vector<MultiIndex>& exponents,
                                          const std::optional<CyclicConstraint>& group = std::nullopt);
/// All nonzero multi-indices with |alpha| <= max_degree, graded-lex order.
std::vector<MultiIndex> exponents_up_to(std::size_t n, int max_degree);

}  // namespace ballsym

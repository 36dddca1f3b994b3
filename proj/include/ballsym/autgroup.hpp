#pragma once

#include "ballsym/matrix.hpp"
#include "ballsym/polymap.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ballsym {

/// Automorphism of the unit ball B^n, z -> (A z + b) / (c.z + d), stored as
/// the (n+1)x(n+1) matrix M = [[A, b], [c, d]] with M* J M = lambda J,
/// J = diag(I_n, -1), lambda > 0. The matrix is projective; the canonical
/// representative has d = 1 (then lambda = 1 - |b|^2), so equality is plain
/// matrix equality.
class BallAutomorphism {
public:
    BallAutomorphism() = default;

    static BallAutomorphism identity(std::size_t n);
    /// Unitary block embedding diag(U, 1); throws NonUnitary.
    static BallAutomorphism from_unitary(const RadMatrix& u);
    /// Validates the indefinite-unitary condition and canonicalizes.
    /// Throws InvalidArgument when the condition fails.
    static BallAutomorphism from_matrix(const RadMatrix& m);

    std::size_t dim() const noexcept { return n_; }
    const RadMatrix& matrix() const noexcept { return m_; }
    const RadScalar& lambda() const noexcept { return lambda_; }

    RadMatrix linear_block() const;            // A
    std::vector<RadScalar> translation() const;  // b
    std::vector<RadScalar> denominator_row() const;  // c
    bool is_unitary() const;
    /// A when is_unitary(); throws InvalidArgument otherwise.
    RadMatrix unitary_part() const;

    std::vector<RadScalar> operator()(const std::vector<RadScalar>& z) const;
    std::vector<FloatComplex> operator()(const std::vector<FloatComplex>& z) const;

    friend bool operator==(const BallAutomorphism& a, const BallAutomorphism& b) {
        return a.n_ == b.n_ && a.m_ == b.m_;
    }

private:
    BallAutomorphism(std::size_t n, RadMatrix m, RadScalar lambda);
    static BallAutomorphism canonicalize(std::size_t n, const RadMatrix& m);

    std::size_t n_ = 0;
    RadMatrix m_;
    RadScalar lambda_;
};

/// Automorphism with floating-point entries, for inputs outside the exact fragment.
struct FloatAutomorphism {
    std::size_t dim = 0;
    FloatMatrix matrix;

    static FloatAutomorphism from_exact(const BallAutomorphism& g, unsigned bits = kDefaultPrecisionBits);
    std::vector<FloatComplex> operator()(const std::vector<FloatComplex>& z) const;
    FloatAutomorphism compose(const FloatAutomorphism& inner) const;
};

/// The involution phi_a with phi_a(0) = a, phi_a(a) = 0:
/// z -> (a - P_a z - s Q_a z) / (1 - <z, a>), s = sqrt(1 - |a|^2).
/// Throws PointOnBoundary for |a| >= 1 and UnsupportedScalar when s is not
/// in the exact fragment (n >= 2 and 1 - |a|^2 irrational).
BallAutomorphism involution(const std::vector<RadScalar>& a);
/// U o phi_a.
BallAutomorphism aut_from_parts(const RadMatrix& u, const std::vector<RadScalar>& a);
/// Float version of aut_from_parts for points whose s is irrational.
FloatAutomorphism aut_from_parts_float(const FloatMatrix& u, const std::vector<FloatComplex>& a);

BallAutomorphism aut_compose(const BallAutomorphism& outer, const BallAutomorphism& inner);
BallAutomorphism aut_inverse(const BallAutomorphism& g);

/// psi o f for a polynomial map f and a target automorphism psi.
RationalMap compose_target(const BallAutomorphism& psi, const PolyMap& f);
RationalMap compose_target(const BallAutomorphism& psi, const RationalMap& f);

/// Finite group of exact unitary matrices, elements stored over one common
/// cyclotomic field so that equality is coefficientwise.
struct FiniteUnitaryGroup {
    std::size_t dim = 0;
    std::vector<RadMatrix> generators;
    std::vector<RadMatrix> elements;  // elements[0] is the identity

    std::size_t order() const noexcept { return elements.size(); }
    bool contains(const RadMatrix& g) const;
};

inline constexpr std::size_t kDefaultClosureCap = 100000;

/// Throws NonUnitary for non-unitary generators and CapExceeded when the
/// closure grows beyond `cap` elements.
FiniteUnitaryGroup group_closure(const std::vector<RadMatrix>& generators, std::size_t dim,
                                 std::size_t cap = kDefaultClosureCap);
/// Subgroup test: closed under products and contains the identity.
bool is_closed(const FiniteUnitaryGroup& g);

/// Smallest k >= 1 with g^k = I; throws CapExceeded past `cap`.
std::size_t element_order(const RadMatrix& g, std::size_t cap = kDefaultClosureCap);

struct FixedPointReport {
    bool fixed_point_free = true;
    std::optional<RadMatrix> witness;  // non-identity element with eigenvalue 1
};
FixedPointReport is_fixed_point_free(const FiniteUnitaryGroup& g);

/// An element of order |G|, or nullopt.
std::optional<RadMatrix> is_cyclic(const FiniteUnitaryGroup& g);

enum class KernelTag { TypeI, TypeII, TypeIII, NotInList };

struct KernelClass {
    KernelTag tag = KernelTag::NotInList;
    std::size_t order = 0;  // |G|
    // TypeI: params = {m}; TypeII: {m, j, k}; TypeIII: {j, k, l}
    std::vector<std::size_t> params;
    /// Eigenvalue exponents e_i of the chosen generator: eigenvalues zeta_|G|^e_i.
    std::vector<std::size_t> exponents;
    /// Power t (coprime to |G|) of the generator matching the template.
    std::optional<std::size_t> generator_power;
    /// Coordinate order that sorts the diagonal into template blocks; only
    /// populated when the generator is already diagonal.
    std::optional<std::vector<std::size_t>> permutation;

    std::string tag_name() const;
};

/// Matches a cyclic group's generator spectrum against the three cyclic
/// kernel templates: eta I_n; eta I_j (+) eta^2 I_k (eta odd order);
/// eta I_j (+) eta^2 I_k (+) eta^4 I_l (order 7).
/// Throws NotCyclicError for non-cyclic groups.
KernelClass classify_cyclic_kernel(const FiniteUnitaryGroup& g);

/// Multiplicities of the eigenvalues zeta_m^k, k = 0..m-1, of a matrix g with
/// g^m = I, by exact kernel dimensions of g - zeta_m^k I.
std::vector<std::size_t> eigenvalue_multiplicities(const RadMatrix& g, std::size_t m);

}  // namespace ballsym

#include "ballsym/autgroup.hpp"

#include "ballsym/errors.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

namespace ballsym {

namespace {

RadScalar norm2(const std::vector<RadScalar>& v) {
    RadScalar acc;
    for (const auto& x : v) acc += x * x.conj();
    return acc;
}

// Sign test for a real value of the radical fragment.
bool is_positive_real(const RadScalar& x) {
    if (x.is_rational()) return x.rational_value() > 0;
    if (!(x == x.conj())) return false;
    return x.to_float(256).re > 0;
}

bool lies_inside_ball(const RadScalar& n2) {
    if (n2.is_rational()) return n2.rational_value() < 1;
    return n2.to_float(256).re < 1;
}

RadMatrix j_form(std::size_t n) {
    RadMatrix j = RadMatrix::identity(n + 1);
    j(n, n) = RadScalar(-1);
    return j;
}

RadMatrix embed_unitary(const RadMatrix& u) {
    const std::size_t n = u.rows();
    RadMatrix m = RadMatrix::identity(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = u(i, j);
    }
    return m;
}

}  // namespace

// -------------------------------------------------------- BallAutomorphism

BallAutomorphism::BallAutomorphism(std::size_t n, RadMatrix m, RadScalar lambda)
    : n_(n), m_(std::move(m)), lambda_(std::move(lambda)) {}

BallAutomorphism BallAutomorphism::canonicalize(std::size_t n, const RadMatrix& m) {
    const RadScalar& d = m(n, n);
    if (d.is_zero()) throw InvalidArgument("automorphism matrix has zero lower-right entry");
    RadMatrix out = m;
    if (!(d == RadScalar(1))) {
        const RadScalar inv = d.field_inverse();
        out = inv * m;
    }
    out(n, n) = RadScalar(1);
    for (auto& x : out.data()) {
        if (!x.empty() && x.is_zero()) x = RadScalar();
    }
    std::vector<RadScalar> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = out(i, n);
    return BallAutomorphism(n, std::move(out), RadScalar(1) - norm2(b));
}

BallAutomorphism BallAutomorphism::identity(std::size_t n) {
    return BallAutomorphism(n, RadMatrix::identity(n + 1), RadScalar(1));
}

BallAutomorphism BallAutomorphism::from_unitary(const RadMatrix& u) {
    if (!ballsym::is_unitary(u)) throw NonUnitary("matrix is not unitary");
    return BallAutomorphism(u.rows(), embed_unitary(u), RadScalar(1));
}

BallAutomorphism BallAutomorphism::from_matrix(const RadMatrix& m) {
    if (!m.is_square() || m.rows() < 2) throw DimensionMismatch("automorphism matrix must be (n+1)x(n+1), n >= 1");
    const std::size_t n = m.rows() - 1;
    const RadMatrix g = m.adjoint() * j_form(n) * m;
    const RadScalar lambda = -g(n, n);
    if (!is_positive_real(lambda)) throw InvalidArgument("matrix does not preserve the ball (lambda <= 0)");
    if (!(g == lambda * j_form(n))) throw InvalidArgument("matrix fails M* J M = lambda J");
    return canonicalize(n, m);
}

RadMatrix BallAutomorphism::linear_block() const {
    RadMatrix a(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) a(i, j) = m_(i, j);
    }
    return a;
}

std::vector<RadScalar> BallAutomorphism::translation() const {
    std::vector<RadScalar> b(n_);
    for (std::size_t i = 0; i < n_; ++i) b[i] = m_(i, n_);
    return b;
}

std::vector<RadScalar> BallAutomorphism::denominator_row() const {
    std::vector<RadScalar> c(n_);
    for (std::size_t j = 0; j < n_; ++j) c[j] = m_(n_, j);
    return c;
}

bool BallAutomorphism::is_unitary() const {
    for (std::size_t i = 0; i < n_; ++i) {
        if (!m_(i, n_).is_zero() || !m_(n_, i).is_zero()) return false;
    }
    return true;
}

RadMatrix BallAutomorphism::unitary_part() const {
    if (!is_unitary()) throw InvalidArgument("automorphism moves the origin");
    return linear_block();
}

std::vector<RadScalar> BallAutomorphism::operator()(const std::vector<RadScalar>& z) const {
    if (z.size() != n_) throw DimensionMismatch("point has wrong dimension");
    std::vector<RadScalar> h = z;
    h.emplace_back(1);
    const auto w = m_.apply(h);
    if (w[n_].is_zero()) throw DenominatorZero("automorphism denominator vanishes");
    const RadScalar inv = w[n_].field_inverse();
    std::vector<RadScalar> out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n_));
    for (auto& x : out) x = x * inv;
    return out;
}

std::vector<FloatComplex> BallAutomorphism::operator()(const std::vector<FloatComplex>& z) const {
    return FloatAutomorphism::from_exact(*this, z.empty() ? kDefaultPrecisionBits : z[0].precision)(z);
}

// ------------------------------------------------------- FloatAutomorphism

FloatAutomorphism FloatAutomorphism::from_exact(const BallAutomorphism& g, unsigned bits) {
    return {g.dim(), to_float_matrix(g.matrix(), bits)};
}

std::vector<FloatComplex> FloatAutomorphism::operator()(const std::vector<FloatComplex>& z) const {
    if (z.size() != dim) throw DimensionMismatch("point has wrong dimension");
    const unsigned bits = z.empty() ? kDefaultPrecisionBits : z[0].precision;
    PrecisionScope scope(bits);
    std::vector<FloatComplex> h = z;
    h.emplace_back(Real(1), Real(0), bits);
    std::vector<FloatComplex> w(dim + 1, FloatComplex(Real(0), Real(0), bits));
    for (std::size_t i = 0; i <= dim; ++i) {
        for (std::size_t j = 0; j <= dim; ++j) w[i] += matrix(i, j) * h[j];
    }
    if (w[dim].abs() == 0) throw DenominatorZero("automorphism denominator vanishes");
    std::vector<FloatComplex> out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim));
    for (auto& x : out) x /= w[dim];
    return out;
}

FloatAutomorphism FloatAutomorphism::compose(const FloatAutomorphism& inner) const {
    if (dim != inner.dim) throw DimensionMismatch("automorphisms act on different dimensions");
    return {dim, matrix * inner.matrix};
}

// ------------------------------------------------------------- involutions

namespace {

RadMatrix involution_matrix(const std::vector<RadScalar>& a) {
    const std::size_t n = a.size();
    const RadScalar n2 = norm2(a);
    if (!lies_inside_ball(n2)) throw PointOnBoundary("point is not inside the open unit ball");
    RadMatrix m(n + 1, n + 1);
    m(n, n) = RadScalar(1);
    if (n2.is_zero()) {
        for (std::size_t i = 0; i < n; ++i) m(i, i) = RadScalar(-1);
        return m;
    }
    // A = -(P_a + s Q_a) = -s I - (1 - s) a a* / |a|^2
    RadScalar s;
    if (n > 1) {
        if (!n2.is_rational()) {
            throw UnsupportedScalar("sqrt(1 - |a|^2) lies outside the exact scalar fragment");
        }
        s = RadScalar::sqrt_rational(1 - n2.rational_value());
    }
    const RadScalar k = (RadScalar(1) - s) * n2.field_inverse();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            RadScalar v = -(k * a[i] * a[j].conj());
            if (i == j && n > 1) v -= s;
            m(i, j) = v;
        }
        m(i, n) = a[i];
        m(n, i) = -a[i].conj();
    }
    return m;
}

}  // namespace

BallAutomorphism involution(const std::vector<RadScalar>& a) {
    if (a.empty()) throw DimensionMismatch("point must have positive dimension");
    return BallAutomorphism::from_matrix(involution_matrix(a));
}

BallAutomorphism aut_from_parts(const RadMatrix& u, const std::vector<RadScalar>& a) {
    if (u.rows() != a.size()) throw DimensionMismatch("unitary and point dimensions differ");
    if (!is_unitary(u)) throw NonUnitary("matrix is not unitary");
    if (norm2(a).is_zero()) return BallAutomorphism::from_unitary(u);
    return BallAutomorphism::from_matrix(embed_unitary(u) * involution_matrix(a));
}

FloatAutomorphism aut_from_parts_float(const FloatMatrix& u, const std::vector<FloatComplex>& a) {
    const std::size_t n = a.size();
    if (u.rows() != n || u.cols() != n) throw DimensionMismatch("unitary and point dimensions differ");
    const unsigned bits = a.empty() ? kDefaultPrecisionBits : a[0].precision;
    PrecisionScope scope(bits);
    Real n2 = 0;
    for (const auto& x : a) n2 += x.norm2();
    if (n2 >= 1) throw PointOnBoundary("point is not inside the open unit ball");
    const FloatComplex zero(Real(0), Real(0), bits);
    FloatMatrix m(n + 1, n + 1);
    for (auto& x : m.data()) x = zero;
    m(n, n) = FloatComplex(Real(1), Real(0), bits);
    if (n2 == 0) {
        for (std::size_t i = 0; i < n; ++i) m(i, i) = FloatComplex(Real(-1), Real(0), bits);
    } else {
        const Real s = boost::multiprecision::sqrt(Real(1) - n2);
        const FloatComplex k((Real(1) - s) / n2, Real(0), bits);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                FloatComplex v = -(k * a[i] * a[j].conj());
                if (i == j) v -= FloatComplex(s, Real(0), bits);
                m(i, j) = v;
            }
            m(i, n) = a[i];
            m(n, i) = -a[i].conj();
        }
    }
    FloatMatrix e = FloatMatrix::identity(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) e(i, j) = u(i, j);
    }
    return {n, e * m};
}

BallAutomorphism aut_compose(const BallAutomorphism& outer, const BallAutomorphism& inner) {
    if (outer.dim() != inner.dim()) throw DimensionMismatch("automorphisms act on different dimensions");
    return BallAutomorphism::from_matrix(outer.matrix() * inner.matrix());
}

BallAutomorphism aut_inverse(const BallAutomorphism& g) {
    const RadMatrix j = j_form(g.dim());
    return BallAutomorphism::from_matrix(j * g.matrix().adjoint() * j);
}

RationalMap compose_target(const BallAutomorphism& psi, const PolyMap& f) {
    if (psi.dim() != f.target_dim()) throw DimensionMismatch("automorphism acts on a different dimension");
    const std::size_t n = f.source_dim();
    PolyMap num = left_multiply(psi.linear_block(), f);
    num.add_term(MultiIndex::zero(n), psi.translation());
    const auto c = psi.denominator_row();
    Polynomial den = Polynomial::constant(n, RadScalar(1));
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (!c[j].is_zero()) den += c[j] * f.component(j);
    }
    return RationalMap(std::move(num), std::move(den));
}

RationalMap compose_target(const BallAutomorphism& psi, const RationalMap& f) {
    if (psi.dim() != f.target_dim()) throw DimensionMismatch("automorphism acts on a different dimension");
    // (A p/q + b) / (c.p/q + 1) = (A p + b q) / (c.p + q)
    PolyMap num = left_multiply(psi.linear_block(), f.numerator);
    const auto b = psi.translation();
    for (const auto& [alpha, s] : f.denominator.terms()) {
        std::vector<RadScalar> v;
        for (const auto& x : b) v.push_back(x * s);
        num.add_term(alpha, v);
    }
    const auto c = psi.denominator_row();
    Polynomial den = f.denominator;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (!c[j].is_zero()) den += c[j] * f.numerator.component(j);
    }
    return RationalMap(std::move(num), std::move(den));
}

// ------------------------------------------------------------ finite groups

namespace {

std::int64_t common_order(const std::vector<RadMatrix>& ms) {
    std::int64_t L = 1;
    for (const auto& m : ms) {
        for (const auto& x : m.data()) L = std::lcm(L, x.embedding_order());
    }
    return L;
}

CycloMatrix lifted(const RadMatrix& m, std::int64_t L) {
    std::vector<CycloScalar> data;
    data.reserve(m.data().size());
    for (const auto& x : m.data()) data.push_back(x.to_cyclotomic().lift(L));
    return CycloMatrix(m.rows(), m.cols(), std::move(data));
}

std::string key_of(const CycloMatrix& m) {
    std::string k;
    for (const auto& x : m.data()) {
        for (const auto& q : x.coeffs()) {
            k += q.get_str();
            k += ',';
        }
        k += ';';
    }
    return k;
}

RadMatrix matrix_pow(const RadMatrix& g, std::size_t e) {
    RadMatrix result = RadMatrix::identity(g.rows());
    RadMatrix base = g;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

std::vector<std::size_t> prime_factors(std::size_t m) {
    std::vector<std::size_t> ps;
    for (std::size_t p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        ps.push_back(p);
        while (m % p == 0) m /= p;
    }
    if (m > 1) ps.push_back(m);
    return ps;
}

bool has_order_exactly(const RadMatrix& g, std::size_t m) {
    const RadMatrix id = RadMatrix::identity(g.rows());
    if (!(matrix_pow(g, m) == id)) return false;
    for (auto p : prime_factors(m)) {
        if (matrix_pow(g, m / p) == id) return false;
    }
    return true;
}

bool is_diagonal(const RadMatrix& g) {
    for (std::size_t i = 0; i < g.rows(); ++i) {
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (i != j && !g(i, j).is_zero()) return false;
        }
    }
    return true;
}

// Exponent e in [0, m) with x = zeta_m^e, or nullopt.
std::optional<std::size_t> root_exponent(const RadScalar& x, std::size_t m) {
    for (std::size_t e = 0; e < m; ++e) {
        if (x == RadScalar::root_of_unity(static_cast<std::int64_t>(m), static_cast<std::int64_t>(e))) return e;
    }
    return std::nullopt;
}

}  // namespace

bool FiniteUnitaryGroup::contains(const RadMatrix& g) const {
    if (g.rows() != dim || g.cols() != dim) return false;
    return std::any_of(elements.begin(), elements.end(), [&](const RadMatrix& e) { return e == g; });
}

FiniteUnitaryGroup group_closure(const std::vector<RadMatrix>& generators, std::size_t dim, std::size_t cap) {
    if (cap < 1) throw InvalidArgument("closure cap must be at least 1");
    for (const auto& g : generators) {
        if (g.rows() != dim || g.cols() != dim) throw DimensionMismatch("generator has wrong size");
        if (!is_unitary(g)) throw NonUnitary("generator is not unitary");
    }
    const std::int64_t L = common_order(generators);
    std::vector<CycloMatrix> gens;
    for (const auto& g : generators) gens.push_back(lifted(g, L));

    FiniteUnitaryGroup group;
    group.dim = dim;
    group.generators = generators;
    std::vector<CycloMatrix> elems{lifted(RadMatrix::identity(dim), L)};
    std::unordered_map<std::string, std::size_t> seen{{key_of(elems[0]), 0}};
    for (std::size_t next = 0; next < elems.size(); ++next) {
        for (const auto& g : gens) {
            CycloMatrix h = g * elems[next];
            std::string k = key_of(h);
            if (seen.count(k)) continue;
            if (elems.size() >= cap) throw CapExceeded("group closure exceeded the element cap");
            seen.emplace(std::move(k), elems.size());
            elems.push_back(std::move(h));
        }
    }
    group.elements.reserve(elems.size());
    for (const auto& e : elems) group.elements.push_back(to_rad_matrix(e));
    return group;
}

bool is_closed(const FiniteUnitaryGroup& g) {
    if (g.elements.empty()) return false;
    const std::int64_t L = common_order(g.elements);
    std::unordered_map<std::string, std::size_t> keys;
    std::vector<CycloMatrix> cm;
    for (const auto& e : g.elements) {
        cm.push_back(lifted(e, L));
        keys.emplace(key_of(cm.back()), keys.size());
    }
    if (!keys.count(key_of(lifted(RadMatrix::identity(g.dim), L)))) return false;
    for (const auto& a : cm) {
        for (const auto& b : cm) {
            if (!keys.count(key_of(a * b))) return false;
        }
    }
    return true;
}

std::size_t element_order(const RadMatrix& g, std::size_t cap) {
    const RadMatrix id = RadMatrix::identity(g.rows());
    RadMatrix p = g;
    for (std::size_t k = 1; k <= cap; ++k) {
        if (p == id) return k;
        p = p * g;
    }
    throw CapExceeded("element order exceeds the cap");
}

FixedPointReport is_fixed_point_free(const FiniteUnitaryGroup& g) {
    const RadMatrix id = RadMatrix::identity(g.dim);
    for (const auto& e : g.elements) {
        if (e == id) continue;
        if (rank(e - id) < g.dim) return {false, e};
    }
    return {true, std::nullopt};
}

std::optional<RadMatrix> is_cyclic(const FiniteUnitaryGroup& g) {
    const std::size_t m = g.order();
    if (m == 1) return g.elements.front();
    for (const auto& e : g.elements) {
        if (has_order_exactly(e, m)) return e;
    }
    return std::nullopt;
}

std::vector<std::size_t> eigenvalue_multiplicities(const RadMatrix& g, std::size_t m) {
    if (!g.is_square()) throw DimensionMismatch("eigenvalues of a non-square matrix");
    const std::size_t n = g.rows();
    std::vector<std::size_t> mult(m, 0);
    std::size_t found = 0;
    for (std::size_t k = 0; k < m && found < n; ++k) {
        const RadScalar z = RadScalar::root_of_unity(static_cast<std::int64_t>(m), static_cast<std::int64_t>(k));
        mult[k] = n - rank(g - z * RadMatrix::identity(n));
        found += mult[k];
    }
    return mult;
}

std::string KernelClass::tag_name() const {
    switch (tag) {
        case KernelTag::TypeI: return "TypeI";
        case KernelTag::TypeII: return "TypeII";
        case KernelTag::TypeIII: return "TypeIII";
        case KernelTag::NotInList: return "NotInList";
    }
    return "NotInList";
}

KernelClass classify_cyclic_kernel(const FiniteUnitaryGroup& g) {
    const auto gen = is_cyclic(g);
    if (!gen) throw NotCyclicError("group is not cyclic");
    const std::size_t m = g.order();
    const std::size_t n = g.dim;

    KernelClass out;
    out.order = m;
    const bool diagonal = is_diagonal(*gen);
    if (diagonal) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto e = root_exponent((*gen)(i, i), m);
            if (!e) throw InvalidArgument("diagonal entry is not a root of unity of the group order");
            out.exponents.push_back(*e);
        }
    } else {
        const auto mult = eigenvalue_multiplicities(*gen, m);
        for (std::size_t k = 0; k < m; ++k) out.exponents.insert(out.exponents.end(), mult[k], k);
    }
    if (out.exponents.size() != n) throw InvalidArgument("generator is not diagonalizable over roots of unity");

    // Block index of each coordinate under eta = zeta_m^(t^-1): exponent * t mod m.
    auto blocks_for = [&](std::size_t t, const std::vector<std::size_t>& allowed) -> std::optional<std::vector<std::size_t>> {
        std::vector<std::size_t> block(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t v = (out.exponents[i] * t) % m;
            auto it = std::find(allowed.begin(), allowed.end(), v);
            if (it == allowed.end()) return std::nullopt;
            block[i] = static_cast<std::size_t>(it - allowed.begin());
        }
        return block;
    };
    auto finish = [&](KernelTag tag, std::size_t t, const std::vector<std::size_t>& block,
                      std::size_t nblocks) {
        out.tag = tag;
        out.generator_power = t;
        std::vector<std::size_t> counts(nblocks, 0);
        for (auto b : block) ++counts[b];
        if (tag == KernelTag::TypeI) {
            out.params = {m};
        } else if (tag == KernelTag::TypeII) {
            out.params = {m, counts[0], counts[1]};
        } else {
            out.params = counts;
        }
        if (diagonal) {
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return block[a] < block[b]; });
            out.permutation = perm;
        }
    };

    if (m == 1) {
        finish(KernelTag::TypeI, 1, std::vector<std::size_t>(n, 0), 1);
        return out;
    }
    for (std::size_t t = 1; t < m; ++t) {
        if (std::gcd(t, m) != 1) continue;
        if (auto b = blocks_for(t, {1})) {
            finish(KernelTag::TypeI, t, *b, 1);
            return out;
        }
    }
    if (m % 2 == 1) {
        for (std::size_t t = 1; t < m; ++t) {
            if (std::gcd(t, m) != 1) continue;
            if (auto b = blocks_for(t, {1, 2})) {
                finish(KernelTag::TypeII, t, *b, 2);
                return out;
            }
        }
    }
    if (m == 7) {
        for (std::size_t t = 1; t < m; ++t) {
            auto b = blocks_for(t, {1, 2, 4});
            if (!b) continue;
            std::vector<bool> present(3, false);
            for (auto x : *b) present[x] = true;
            if (present[0] && present[1] && present[2]) {
                finish(KernelTag::TypeIII, t, *b, 3);
                return out;
            }
        }
    }
    return out;
}

}  // namespace ballsym

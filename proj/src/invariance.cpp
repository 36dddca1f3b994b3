#include "ballsym/invariance.hpp"

#include "ballsym/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace ballsym {

namespace {

RadScalar vec_inner(const std::vector<RadScalar>& u, const std::vector<RadScalar>& v) {
    RadScalar acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i].empty() && !v[i].empty()) acc += u[i] * v[i].conj();
    }
    return acc;
}

std::vector<mpz_class> to_row(const MultiIndex& a) {
    std::vector<mpz_class> r;
    for (int e : a.entries) r.emplace_back(e);
    return r;
}

mpq_class frac_part(const mpq_class& x) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    mpq_class r = x - mpq_class(fl);
    r.canonicalize();
    return r;
}

void require_origin(const PolyMap& f) {
    if (!f.vanishes_at_origin()) throw NonzeroOrigin("map must satisfy f(0) = 0");
}

}  // namespace

// ------------------------------------------------------------------ lattices

ExponentLattice make_lattice(const IntMatrix& rows, std::size_t dim) {
    ExponentLattice l;
    l.dim = dim;
    l.basis = rows;
    l.snf = smith_normal_form(rows, dim);
    if (!verify_smith(rows, l.snf)) throw InvalidArgument("Smith normal form failed verification");
    return l;
}

ExponentLattice exponent_lattice(const PolyMap& f, LatticeMode mode) {
    IntMatrix rows;
    if (mode == LatticeMode::Support) {
        for (const auto& [a, c] : f.terms()) {
            if (!a.is_zero()) rows.push_back(to_row(a));
        }
    } else {
        for (auto it = f.terms().begin(); it != f.terms().end(); ++it) {
            for (auto jt = std::next(it); jt != f.terms().end(); ++jt) {
                if (vec_inner(it->second, jt->second).is_zero()) continue;
                std::vector<mpz_class> r;
                for (std::size_t j = 0; j < f.source_dim(); ++j) r.emplace_back(it->first[j] - jt->first[j]);
                rows.push_back(std::move(r));
            }
        }
    }
    return make_lattice(rows, f.source_dim());
}

mpz_class TorusSubgroup::finite_order() const {
    mpz_class o = 1;
    for (const auto& g : finite_generators) o *= g.order;
    return o;
}

bool TorusSubgroup::contains(const std::vector<mpq_class>& theta) const {
    if (theta.size() != dim) throw DimensionMismatch("angle vector has wrong length");
    for (const auto& row : lattice) {
        mpq_class dot = 0;
        for (std::size_t j = 0; j < dim; ++j) dot += theta[j] * mpq_class(row[j]);
        dot.canonicalize();
        if (dot.get_den() != 1) return false;
    }
    return true;
}

TorusSubgroup torus_dual(const ExponentLattice& l) {
    TorusSubgroup t;
    t.dim = l.dim;
    t.lattice = l.basis;
    const SmithForm& s = l.snf;
    const std::size_t r = s.rank();
    for (std::size_t i = r; i < l.dim; ++i) {
        std::vector<mpq_class> v;
        for (std::size_t j = 0; j < l.dim; ++j) v.emplace_back(s.v[j][i]);
        auto first = std::find_if(v.begin(), v.end(), [](const mpq_class& x) { return x != 0; });
        if (first != v.end() && *first < 0) {
            for (auto& x : v) x = -x;
        }
        t.continuous_basis.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < r; ++i) {
        const mpz_class& d = s.invariant_factors[i];
        if (d == 1) continue;
        std::vector<mpq_class> turns;
        for (std::size_t j = 0; j < l.dim; ++j) turns.push_back(frac_part(mpq_class(s.v[j][i], d)));
        // Replace by a power so that the first nonzero turn is 1/d when possible.
        auto first = std::find_if(turns.begin(), turns.end(), [](const mpq_class& x) { return x != 0; });
        if (first != turns.end() && first->get_den() == d) {
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), first->get_num_mpz_t(), d.get_mpz_t()) != 0) {
                for (auto& x : turns) x = frac_part(x * mpq_class(inv));
            }
        }
        t.finite_generators.push_back({std::move(turns), d});
    }
    return t;
}

TorusSubgroup torus_invariance_group(const PolyMap& f) {
    require_origin(f);
    return torus_dual(exponent_lattice(f, LatticeMode::Gram));
}

TorusSubgroup diagonal_fixing_group(const PolyMap& f) { return torus_dual(exponent_lattice(f, LatticeMode::Support)); }

// --------------------------------------------------------------------- H_f

HfReport hf_group(const PolyMap& f) {
    require_origin(f);
    const SpanReport s = span_rank(f);
    HfReport h;
    h.k = f.target_dim() - s.rank;
    h.span_basis = s.basis;
    if (s.rank == 0) {
        for (std::size_t i = 0; i < f.target_dim(); ++i) {
            std::vector<RadScalar> e(f.target_dim());
            e[i] = RadScalar(1);
            h.complement_basis.push_back(std::move(e));
        }
        return h;
    }
    RadMatrix span(f.target_dim(), s.rank);
    for (std::size_t j = 0; j < s.rank; ++j) {
        for (std::size_t i = 0; i < f.target_dim(); ++i) span(i, j) = s.basis[j][i];
    }
    h.complement_basis = nullspace(span.adjoint());
    return h;
}

// ---------------------------------------------------------------- membership

namespace {

FloatMatrix float_embed(const FloatMatrix& u) {
    const std::size_t n = u.rows();
    FloatMatrix m = FloatMatrix::identity(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = u(i, j);
    }
    return m;
}

double max_dist(const std::vector<FloatComplex>& a, const std::vector<FloatComplex>& b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, abs_diff(a[i], b[i]));
    return worst;
}

using FloatEval = std::function<std::vector<FloatComplex>(const std::vector<FloatComplex>&)>;

// Samples w_k = tau(g(z_k)) against f(z_k): a unitary U with w_k = U f(z_k)
// exists iff the two sample Gram matrices agree. U itself is recovered by
// least squares when f is minimal.
void float_membership(const PolyMap& f, const FloatEval& g, const std::vector<FloatComplex>& p, unsigned bits,
                      PhiResult& out) {
    const std::size_t n = f.source_dim();
    const std::size_t N = f.target_dim();
    PrecisionScope scope(bits);
    out.exact = false;
    auto lift = [bits](std::vector<FloatComplex> z) {
        for (auto& x : z) x = FloatComplex(x.re, x.im, bits);
        return z;
    };
    const FloatAutomorphism tau = aut_from_parts_float(FloatMatrix::identity(N), lift(p));
    const std::size_t K = 2 * f.terms().size() + 8;
    FloatMatrix F(N, K);
    FloatMatrix W(N, K);
    for (std::size_t k = 0; k < K; ++k) {
        const auto z = lift(random_ball_point(n, 7000 + k, 0.7));
        const auto fz = evaluate(f, z);
        const auto wz = tau(g(z));
        for (std::size_t i = 0; i < N; ++i) {
            F(i, k) = fz[i];
            W(i, k) = wz[i];
        }
    }
    double residual = max_abs_diff(F.adjoint() * F, W.adjoint() * W);
    if (is_minimal(f)) {
        const FloatMatrix u = W * F.adjoint() * inverse(F * F.adjoint());
        out.psi_float = tau.compose(FloatAutomorphism{N, float_embed(u)});
        residual = std::max(residual, max_abs_diff(u.adjoint() * u, FloatMatrix::identity(N)));
        for (std::size_t k = 0; k < 20; ++k) {
            const auto z = lift(random_ball_point(n, 9000 + k, 0.9));
            residual = std::max(residual, max_dist((*out.psi_float)(evaluate(f, z)), g(z)));
        }
    }
    out.residual = residual;
    out.member = residual < kDefaultTolerance;
}

}  // namespace

PhiResult gamma_membership(const PolyMap& f, const BallAutomorphism& gamma) {
    require_origin(f);
    if (gamma.dim() != f.source_dim()) throw DimensionMismatch("automorphism acts on a different dimension");
    PhiResult out;
    out.gamma = gamma;
    out.unique = is_minimal(f);
    const std::size_t N = f.target_dim();

    if (gamma.is_unitary()) {
        const PolyMap g = compose_linear(f, gamma.linear_block());
        if (!norm_equal(f, g)) {
            out.note = "|f o gamma|^2 differs from |f|^2";
            return out;
        }
        const auto s = gram_unitary_solve(f, g);
        if (s.status == UnitarySolveResult::Status::Exact) {
            out.member = true;
            out.psi = BallAutomorphism::from_unitary(*s.exact);
        } else if (s.status == UnitarySolveResult::Status::Float) {
            out.member = s.residual < kDefaultTolerance;
            out.exact = false;
            out.residual = s.residual;
            out.psi_float = FloatAutomorphism{N, float_embed(*s.approx)};
        }
        out.note = s.note;
        return out;
    }

    const RationalMap g = compose_automorphism(f, gamma);
    const std::vector<RadScalar> p = g.numerator.value_at_origin();
    RadScalar p2;
    for (const auto& x : p) p2 += x * x.conj();
    const bool inside = p2.is_rational() ? p2.rational_value() < 1 : p2.to_float(256).re < 1;
    if (!inside) {
        out.note = "f(gamma(0)) is not inside the target ball";
        return out;
    }
    auto fallback = [&] {
        const unsigned bits = kDefaultPrecisionBits + 64;
        std::vector<FloatComplex> pf;
        for (const auto& x : p) pf.push_back(x.to_float(bits));
        float_membership(f, [&](const std::vector<FloatComplex>& z) { return evaluate(g, z); }, pf, bits, out);
        out.note = "target normalization outside the exact fragment; float result";
    };
    BallAutomorphism tau = BallAutomorphism::identity(N);
    if (!p2.is_zero()) {
        try {
            tau = involution(p);
        } catch (const UnsupportedScalar&) {
            fallback();
            return out;
        }
    }
    // tau o f o gamma = U o f with U unitary exactly when gamma is in Gamma_f.
    const RationalMap h = compose_target(tau, g);
    const auto s = gram_unitary_solve(multiply(f, h.denominator), h.numerator);
    if (s.status == UnitarySolveResult::Status::NoSolution) {
        out.note = "no unitary U with tau o f o gamma = U o f";
        return out;
    }
    if (s.status == UnitarySolveResult::Status::Float) {
        fallback();
        return out;
    }
    const BallAutomorphism psi = aut_compose(tau, BallAutomorphism::from_unitary(*s.exact));
    if (!equal(g, compose_target(psi, f))) {
        out.note = "candidate psi failed verification";
        return out;
    }
    out.member = true;
    out.psi = psi;
    out.note = s.note;
    return out;
}

PhiResult gamma_membership_float(const PolyMap& f, const FloatAutomorphism& gamma, unsigned bits) {
    require_origin(f);
    if (gamma.dim != f.source_dim()) throw DimensionMismatch("automorphism acts on a different dimension");
    PhiResult out;
    out.unique = is_minimal(f);
    std::vector<FloatComplex> origin(f.source_dim(), FloatComplex(Real(0), Real(0), bits));
    const auto p = evaluate(f, gamma(origin));
    Real p2 = 0;
    for (const auto& x : p) p2 += x.norm2();
    if (p2 >= 1) {
        out.exact = false;
        out.note = "f(gamma(0)) is not inside the target ball";
        return out;
    }
    float_membership(f, [&](const std::vector<FloatComplex>& z) { return evaluate(f, gamma(z)); }, p, bits, out);
    return out;
}

FiniteUnitaryGroup phi_kernel(const PolyMap& f, const FiniteUnitaryGroup& candidates) {
    if (candidates.dim != f.source_dim()) throw DimensionMismatch("candidate group acts on a different dimension");
    FiniteUnitaryGroup k;
    k.dim = candidates.dim;
    for (const auto& e : candidates.elements) {
        if (compose_linear(f, e) == f) k.elements.push_back(e);
    }
    const RadMatrix id = RadMatrix::identity(k.dim);
    auto it = std::find(k.elements.begin(), k.elements.end(), id);
    if (it == k.elements.end()) {
        k.elements.insert(k.elements.begin(), id);
    } else if (it != k.elements.begin()) {
        std::iter_swap(it, k.elements.begin());
    }
    k.generators.assign(k.elements.begin() + 1, k.elements.end());
    return k;
}

// ------------------------------------------------------------ graded analysis

GradedReport graded_analysis(const PolyMap& f, const std::vector<std::int64_t>& m) {
    require_origin(f);
    const std::size_t n = f.source_dim();
    if (m.size() != n) throw DimensionMismatch("weight vector length differs from source dimension");
    for (auto it = f.terms().begin(); it != f.terms().end(); ++it) {
        for (auto jt = std::next(it); jt != f.terms().end(); ++jt) {
            std::int64_t dot = 0;
            for (std::size_t j = 0; j < n; ++j) dot += m[j] * (it->first[j] - jt->first[j]);
            if (dot != 0 && !vec_inner(it->second, jt->second).is_zero()) {
                throw NotInvariant("pair " + it->first.to_string() + ", " + jt->first.to_string() +
                                   " is Gram-coupled but m.(alpha - beta) = " + std::to_string(dot));
            }
        }
    }
    GradedReport r;
    r.m = m;
    std::vector<std::int64_t> mv;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[j] > 0) {
            r.positive_indices.push_back(j);
            mv.push_back(m[j]);
        }
    }
    PolyMap restricted(n, f.target_dim());
    for (const auto& [a, c] : f.terms()) {
        bool keep = true;
        for (std::size_t j = 0; j < n; ++j) keep = keep && (m[j] > 0 || a[j] == 0);
        if (keep) restricted.add_term(a, c);
    }
    r.restricted_degree = restricted.degree();
    for (const auto& a : span_rank(restricted).basis_support) r.spanning_degree = std::max(r.spanning_degree, a.degree());
    if (!mv.empty()) {
        r.restricted_degree_bound = degree_bound(mv, r.spanning_degree);
        r.within_bound = r.restricted_degree <= *r.restricted_degree_bound;
    } else {
        r.within_bound = restricted.is_zero();
    }
    return r;
}

// ------------------------------------------------------- monomial proper maps

std::vector<MultiIndex> exponents_up_to(std::size_t n, int max_degree) {
    std::vector<MultiIndex> out;
    for (int d = 1; d <= max_degree; ++d) {
        auto level = multi_indices_of_degree(n, d);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

namespace {

using QPoly = std::map<std::vector<int>, mpq_class>;

QPoly qmul(const QPoly& a, const QPoly& b) {
    QPoly out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            std::vector<int> e = ea;
            for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
            out[e] += ca * cb;
        }
    }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// x^alpha with x_n = 1 - x_1 - ... - x_{n-1}, in the first n - 1 variables.
QPoly simplex_expand(const MultiIndex& alpha) {
    const std::size_t k = alpha.size() - 1;
    QPoly result{{std::vector<int>(k, 0), 1}};
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<int> e(k, 0);
        e[j] = 1;
        for (int p = 0; p < alpha[j]; ++p) result = qmul(result, QPoly{{e, 1}});
    }
    QPoly last{{std::vector<int>(k, 0), 1}};
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<int> e(k, 0);
        e[j] = 1;
        last[e] = -1;
    }
    for (int p = 0; p < alpha[k]; ++p) result = qmul(result, last);
    return result;
}

using QMat = std::vector<std::vector<mpq_class>>;

// In-place reduced row echelon form; returns pivot columns (searching the first `limit` columns).
std::vector<std::size_t> qrref(QMat& a, std::size_t limit) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t col = 0; col < limit && col < cols && row < a.size(); ++col) {
        std::size_t piv = row;
        while (piv < a.size() && a[piv][col] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[row]);
        const mpq_class inv = 1 / a[row][col];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == row || a[i][col] == 0) continue;
            const mpq_class f = a[i][col];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::string monomial_label(const std::vector<int>& e) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        os << (any ? "*" : "") << "x" << (j + 1);
        if (e[j] > 1) os << "^" << e[j];
        any = true;
    }
    return any ? os.str() : "1";
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

MonomialSolveResult monomial_proper_solve(std::size_t n, const std::vector<MultiIndex>& exponents,
                                          const std::optional<CyclicConstraint>& group) {
    if (n < 1) throw InvalidArgument("dimension must be positive");
    if (exponents.empty()) throw InvalidArgument("exponent list is empty");
    if (group) {
        if (group->weights.size() != n) throw DimensionMismatch("group weights have wrong length");
        if (group->order < 1) throw InvalidArgument("group order must be positive");
    }
    MonomialSolveResult res;
    std::vector<MultiIndex> ex;
    for (const auto& a : exponents) {
        if (a.size() != n) throw DimensionMismatch("exponent has wrong length");
        for (int e : a.entries) {
            if (e < 0) throw InvalidArgument("negative exponent");
        }
        if (a.is_zero()) continue;
        if (group) {
            std::int64_t dot = 0;
            for (std::size_t j = 0; j < n; ++j) dot += group->weights[j] * a[j];
            if (((dot % group->order) + group->order) % group->order != 0) continue;
        }
        ex.push_back(a);
    }
    std::sort(ex.begin(), ex.end(), GradedLex{});
    ex.erase(std::unique(ex.begin(), ex.end()), ex.end());
    res.exponents = ex;
    if (ex.empty()) {
        res.certificate = "no admissible nonzero exponents";
        return res;
    }
    const std::size_t u = ex.size();

    // Coefficient equations: one row per monomial in x_1..x_{n-1}.
    std::vector<QPoly> expanded;
    std::map<std::vector<int>, std::size_t> row_of;
    std::vector<std::vector<int>> row_monomial;
    row_of[std::vector<int>(n - 1, 0)] = 0;
    row_monomial.emplace_back(n - 1, 0);
    for (const auto& a : ex) {
        expanded.push_back(simplex_expand(a));
        for (const auto& [e, c] : expanded.back()) {
            if (!row_of.count(e)) {
                row_of[e] = row_monomial.size();
                row_monomial.push_back(e);
            }
        }
    }
    const std::size_t rows = row_monomial.size();
    // [A | b | I]: the identity block records the row combinations.
    QMat a(rows, std::vector<mpq_class>(u + 1 + rows, 0));
    for (std::size_t k = 0; k < u; ++k) {
        for (const auto& [e, c] : expanded[k]) a[row_of[e]][k] = c;
    }
    a[0][u] = 1;
    for (std::size_t i = 0; i < rows; ++i) a[i][u + 1 + i] = 1;
    const auto pivots = qrref(a, u + 1);
    if (!pivots.empty() && pivots.back() == u) {
        const std::size_t r = pivots.size() - 1;
        std::ostringstream os;
        os << "inconsistent: y with y^T A = 0 and y^T b = 1, y = {";
        bool first = true;
        for (std::size_t i = 0; i < rows; ++i) {
            if (a[r][u + 1 + i] == 0) continue;
            os << (first ? "" : ", ") << monomial_label(row_monomial[i]) << ": " << a[r][u + 1 + i].get_str();
            first = false;
        }
        os << "}";
        res.certificate = os.str();
        return res;
    }
    std::vector<bool> is_pivot(u, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_vars;
    for (std::size_t k = 0; k < u; ++k) {
        if (!is_pivot[k]) free_vars.push_back(k);
    }
    const std::size_t kdim = free_vars.size();

    // d = x0 + sum_i t_i n_i
    std::vector<mpq_class> x0(u, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x0[pivots[r]] = a[r][u];
    std::vector<std::vector<mpq_class>> null_vecs;
    for (auto fv : free_vars) {
        std::vector<mpq_class> v(u, 0);
        v[fv] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a[r][fv];
        null_vecs.push_back(std::move(v));
    }

    auto finish = [&](const std::vector<mpq_class>& d) {
        res.status = MonomialSolveResult::Status::Feasible;
        res.weights = d;
        std::size_t comps = 0;
        for (const auto& x : d) comps += x > 0 ? 1 : 0;
        PolyMap f(n, comps);
        std::size_t i = 0;
        for (std::size_t k = 0; k < u; ++k) {
            if (d[k] <= 0) continue;
            std::vector<RadScalar> c(comps);
            c[i++] = RadScalar::sqrt_rational(d[k]);
            f.add_term(ex[k], c);
        }
        res.map = std::move(f);
    };

    if (kdim == 0) {
        for (std::size_t k = 0; k < u; ++k) {
            if (x0[k] < 0) {
                res.certificate = "unique solution has d" + ex[k].to_string() + " = " + x0[k].get_str() + " < 0";
                return res;
            }
        }
        finish(x0);
        return res;
    }
    if (kdim > kMaxVertexDimension) {
        res.status = MonomialSolveResult::Status::Undecided;
        res.certificate = "solution space has dimension " + std::to_string(kdim) + " > " +
                          std::to_string(kMaxVertexDimension);
        return res;
    }
    // Vertices of {d >= 0} on the affine solution set: kdim coordinates set to zero.
    std::vector<std::size_t> zeros(kdim);
    std::iota(zeros.begin(), zeros.end(), 0);
    std::size_t tried = 0;
    do {
        ++tried;
        QMat sys(kdim, std::vector<mpq_class>(kdim + 1, 0));
        for (std::size_t i = 0; i < kdim; ++i) {
            for (std::size_t j = 0; j < kdim; ++j) sys[i][j] = null_vecs[j][zeros[i]];
            sys[i][kdim] = -x0[zeros[i]];
        }
        const auto piv = qrref(sys, kdim);
        if (piv.size() != kdim) continue;
        std::vector<mpq_class> d = x0;
        for (std::size_t j = 0; j < kdim; ++j) {
            for (std::size_t k = 0; k < u; ++k) d[k] += sys[j][kdim] * null_vecs[j][k];
        }
        if (std::all_of(d.begin(), d.end(), [](const mpq_class& x) { return x >= 0; })) {
            finish(d);
            return res;
        }
    } while (next_combination(zeros, u));
    res.certificate = "no nonnegative vertex among " + std::to_string(tried) +
                      " candidate bases: the solution polytope is empty";
    return res;
}

}  // namespace ballsym

#include "ballsym/hermitian.hpp"

#include "ballsym/errors.hpp"

#include <algorithm>

namespace ballsym {

// -------------------------------------------------------------- HermitianPoly

bool HermitianPoly::KeyLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    return a.entries < b.entries;
}

MultiIndex HermitianPoly::key(const MultiIndex& alpha, const MultiIndex& beta) {
    std::vector<int> k = alpha.entries;
    k.insert(k.end(), beta.entries.begin(), beta.entries.end());
    return MultiIndex(std::move(k));
}

MultiIndex HermitianPoly::alpha_of(const MultiIndex& k) const {
    return MultiIndex(std::vector<int>(k.entries.begin(), k.entries.begin() + static_cast<std::ptrdiff_t>(n_)));
}

MultiIndex HermitianPoly::beta_of(const MultiIndex& k) const {
    return MultiIndex(std::vector<int>(k.entries.begin() + static_cast<std::ptrdiff_t>(n_), k.entries.end()));
}

HermitianPoly HermitianPoly::outer(const Polynomial& a, const Polynomial& b) {
    HermitianPoly h(a.vars());
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) h.add_term(ea, eb, ca * cb.conj());
    }
    return h;
}

HermitianPoly HermitianPoly::inner_product(std::size_t n) {
    HermitianPoly h(n);
    for (std::size_t j = 0; j < n; ++j) h.add_term(MultiIndex::unit(n, j), MultiIndex::unit(n, j), RadScalar(1));
    return h;
}

RadScalar HermitianPoly::coefficient(const MultiIndex& alpha, const MultiIndex& beta) const {
    auto it = terms_.find(key(alpha, beta));
    return it == terms_.end() ? RadScalar() : it->second;
}

void HermitianPoly::add_key(const MultiIndex& k, const RadScalar& c) {
    if (c.empty()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

void HermitianPoly::add_term(const MultiIndex& alpha, const MultiIndex& beta, const RadScalar& c) {
    if (alpha.size() != n_ || beta.size() != n_) throw DimensionMismatch("Hermitian term has wrong number of variables");
    add_key(key(alpha, beta), c);
}

HermitianPoly& HermitianPoly::operator+=(const HermitianPoly& o) {
    if (n_ != o.n_) throw DimensionMismatch("Hermitian polynomials in different dimensions");
    for (const auto& [k, c] : o.terms_) add_key(k, c);
    return *this;
}

HermitianPoly& HermitianPoly::operator-=(const HermitianPoly& o) {
    if (n_ != o.n_) throw DimensionMismatch("Hermitian polynomials in different dimensions");
    for (const auto& [k, c] : o.terms_) add_key(k, -c);
    return *this;
}

HermitianPoly operator*(const HermitianPoly& a, const HermitianPoly& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("Hermitian polynomials in different dimensions");
    HermitianPoly out(a.n_);
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) out.add_key(ka + kb, ca * cb);
    }
    return out;
}

RadScalar HermitianPoly::evaluate(const std::vector<RadScalar>& z, const std::vector<RadScalar>& w) const {
    if (z.size() != n_ || w.size() != n_) throw DimensionMismatch("point has wrong dimension");
    RadScalar acc;
    for (const auto& [k, c] : terms_) {
        RadScalar m = c;
        for (std::size_t j = 0; j < n_; ++j) {
            for (int e = 0; e < k[j]; ++e) m = m * z[j];
            for (int e = 0; e < k[n_ + j]; ++e) m = m * w[j].conj();
        }
        acc += m;
    }
    return acc;
}

// -------------------------------------------------------------- polarized form

bool PolarizedForm::is_hermitian() const {
    for (const auto& [k, c] : form.terms()) {
        const MultiIndex a = form.alpha_of(k);
        const MultiIndex b = form.beta_of(k);
        if (!(form.coefficient(b, a) == c.conj())) return false;
        if (a == b && !(c == c.conj())) return false;
    }
    return true;
}

namespace {

RadScalar vec_inner(const std::vector<RadScalar>& u, const std::vector<RadScalar>& v) {
    RadScalar acc;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i].empty() && !v[i].empty()) acc += u[i] * v[i].conj();
    }
    return acc;
}

HermitianPoly gram_poly(const PolyMap& f) {
    HermitianPoly h(f.source_dim());
    for (const auto& [a, ca] : f.terms()) {
        for (const auto& [b, cb] : f.terms()) h.add_term(a, b, vec_inner(ca, cb));
    }
    return h;
}

}  // namespace

PolarizedForm polarized_form(const PolyMap& f) { return {gram_poly(f), std::nullopt}; }

PolarizedForm polarized_form(const RationalMap& f) {
    PolarizedForm p{gram_poly(f.numerator), std::nullopt};
    if (!f.is_polynomial()) p.denominator = f.denominator;
    return p;
}

// -------------------------------------------------------------- properness

std::pair<HermitianPoly, HermitianPoly> divide_by_sphere(const HermitianPoly& h) {
    const std::size_t n = h.vars();
    HermitianPoly divisor = HermitianPoly::inner_product(n);
    divisor.add_term(MultiIndex::zero(n), MultiIndex::zero(n), RadScalar(-1));
    HermitianPoly rest = h;
    HermitianPoly quotient(n);
    HermitianPoly remainder(n);
    while (!rest.is_zero()) {
        const auto& [k, c] = *rest.terms().rbegin();
        const MultiIndex key = k;
        const RadScalar coeff = c;
        if (key[0] >= 1 && key[n] >= 1) {
            std::vector<int> q = key.entries;
            q[0] -= 1;
            q[n] -= 1;
            HermitianPoly mono(n);
            mono.add_term(rest.alpha_of(MultiIndex(q)), rest.beta_of(MultiIndex(q)), coeff);
            quotient += mono;
            rest -= mono * divisor;
        } else {
            HermitianPoly mono(n);
            mono.add_term(rest.alpha_of(key), rest.beta_of(key), coeff);
            remainder += mono;
            rest -= mono;
        }
    }
    return {quotient, remainder};
}

namespace {

HermitianPoly sphere_defect(const RationalMap& f) {
    return gram_poly(f.numerator) - HermitianPoly::outer(f.denominator, f.denominator);
}

}  // namespace

PropernessReport is_proper(const RationalMap& f) {
    if (f.numerator.is_constant() && f.denominator.degree() == 0) throw ConstantMap("map is constant");
    auto [q, r] = divide_by_sphere(sphere_defect(f));
    PropernessReport report;
    report.proper = r.is_zero();
    report.quotient = std::move(q);
    report.remainder = std::move(r);
    return report;
}

PropernessReport is_proper(const PolyMap& f) { return is_proper(RationalMap::from_poly(f)); }

bool verify_certificate(const RationalMap& f, const PropernessReport& r) {
    const std::size_t n = f.source_dim();
    HermitianPoly divisor = HermitianPoly::inner_product(n);
    divisor.add_term(MultiIndex::zero(n), MultiIndex::zero(n), RadScalar(-1));
    HermitianPoly rhs = r.quotient * divisor;
    if (!r.remainder.is_zero()) rhs += r.remainder;
    return sphere_defect(f) == rhs && r.proper == r.remainder.is_zero();
}

bool norm_equal(const PolyMap& f, const PolyMap& g) {
    if (f.source_dim() != g.source_dim()) throw DimensionMismatch("maps have different source dimensions");
    return gram_poly(f) == gram_poly(g);
}

bool norm_equal(const RationalMap& f, const RationalMap& g) {
    if (f.source_dim() != g.source_dim()) throw DimensionMismatch("maps have different source dimensions");
    if (f.is_polynomial() && g.is_polynomial()) return norm_equal(f.numerator, g.numerator);
    return gram_poly(f.numerator) * HermitianPoly::outer(g.denominator, g.denominator) ==
           gram_poly(g.numerator) * HermitianPoly::outer(f.denominator, f.denominator);
}

// -------------------------------------------------------- unitary equivalence

namespace {

using Vec = std::vector<RadScalar>;

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs) {
    std::vector<Vec> out;
    std::vector<RadScalar> norms;
    for (const auto& v : vs) {
        Vec e = v;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const RadScalar c = vec_inner(v, out[j]) * norms[j].field_inverse();
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = (e[i] - c * out[j][i]).canonical();
        }
        norms.push_back(vec_inner(e, e));
        out.push_back(std::move(e));
    }
    return out;
}

RadMatrix columns_to_matrix(std::size_t rows, const std::vector<Vec>& cols) {
    RadMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

RadMatrix coefficient_matrix_on(const PolyMap& f, const std::vector<MultiIndex>& support) {
    RadMatrix m(f.target_dim(), support.size());
    for (std::size_t j = 0; j < support.size(); ++j) {
        auto it = f.terms().find(support[j]);
        if (it == f.terms().end()) continue;
        for (std::size_t i = 0; i < f.target_dim(); ++i) m(i, j) = it->second[i];
    }
    return m;
}

FloatMatrix float_columns(std::size_t rows, const std::vector<Vec>& base, const std::vector<Vec>& extra, unsigned bits) {
    PrecisionScope scope(bits);
    FloatMatrix m(rows, base.size() + extra.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = base[j][i].to_float(bits);
    }
    for (std::size_t k = 0; k < extra.size(); ++k) {
        const Real len = boost::multiprecision::sqrt(vec_inner(extra[k], extra[k]).to_float(bits).re);
        const FloatComplex inv_len(Real(1) / len, Real(0), bits);
        for (std::size_t i = 0; i < rows; ++i) m(i, base.size() + k) = extra[k][i].to_float(bits) * inv_len;
    }
    return m;
}

}  // namespace

UnitarySolveResult gram_unitary_solve(const PolyMap& f, const PolyMap& g, unsigned float_bits) {
    if (f.source_dim() != g.source_dim() || f.target_dim() != g.target_dim()) {
        throw DimensionMismatch("maps must have equal source and target dimensions");
    }
    UnitarySolveResult result;
    if (!norm_equal(f, g)) {
        result.note = "Gram matrices differ";
        return result;
    }
    const std::size_t N = f.target_dim();
    std::vector<MultiIndex> support = f.support();
    for (const auto& a : g.support()) {
        if (!f.terms().count(a)) support.push_back(a);
    }
    std::sort(support.begin(), support.end(), GradedLex{});
    const RadMatrix cf = coefficient_matrix_on(f, support);
    const RadMatrix cg = coefficient_matrix_on(g, support);

    const Echelon e = row_reduce(cf);
    std::vector<Vec> a_cols;
    std::vector<Vec> b_cols;
    for (auto p : e.pivots) {
        a_cols.push_back(cf.column(p));
        b_cols.push_back(cg.column(p));
    }
    const std::size_t r = a_cols.size();
    result.non_unique = r < N;

    std::vector<Vec> ea;
    std::vector<Vec> fb;
    bool exact_scales = true;
    if (r < N) {
        const RadMatrix a = columns_to_matrix(N, a_cols);
        const RadMatrix b = columns_to_matrix(N, b_cols);
        ea = gram_schmidt(nullspace(a.adjoint()));
        std::vector<Vec> ab = a_cols;
        ab.insert(ab.end(), b_cols.begin(), b_cols.end());
        if (rank(columns_to_matrix(N, ab)) == r) {
            fb = ea;  // same column space: identity on the complement
        } else {
            fb = gram_schmidt(nullspace(b.adjoint()));
            for (std::size_t k = 0; k < fb.size(); ++k) {
                const RadScalar ratio = vec_inner(ea[k], ea[k]) * vec_inner(fb[k], fb[k]).field_inverse();
                if (!ratio.is_rational()) {
                    exact_scales = false;
                    break;
                }
                const RadScalar s = RadScalar::sqrt_rational(ratio.rational_value());
                for (auto& x : fb[k]) x = x * s;
            }
        }
        result.note = "rank " + std::to_string(r) + " < " + std::to_string(N) + ": completion chosen by Gram-Schmidt";
    }

    if (exact_scales) {
        std::vector<Vec> m1 = a_cols;
        std::vector<Vec> m2 = b_cols;
        m1.insert(m1.end(), ea.begin(), ea.end());
        m2.insert(m2.end(), fb.begin(), fb.end());
        const RadMatrix u = columns_to_matrix(N, m2) * inverse(columns_to_matrix(N, m1));
        if (!is_unitary(u) || !(u * cf == cg)) {
            result.note = "exact completion failed verification";
            return result;
        }
        result.status = UnitarySolveResult::Status::Exact;
        result.exact = u;
        return result;
    }

    // Irrational normalization on the complement: finish in floating point.
    fb = gram_schmidt(nullspace(columns_to_matrix(N, b_cols).adjoint()));
    PrecisionScope scope(float_bits);
    const FloatMatrix m1 = float_columns(N, a_cols, ea, float_bits);
    const FloatMatrix m2 = float_columns(N, b_cols, fb, float_bits);
    const FloatMatrix u = m2 * inverse(m1);
    const double r1 = max_abs_diff(u * to_float_matrix(cf, float_bits), to_float_matrix(cg, float_bits));
    const double r2 = max_abs_diff(u.adjoint() * u, FloatMatrix::identity(N));
    result.status = UnitarySolveResult::Status::Float;
    result.approx = u;
    result.residual = std::max(r1, r2);
    result.note += "; complement normalization irrational, float result";
    return result;
}

std::int64_t degree_bound(const std::vector<std::int64_t>& m, int support_degree) {
    if (m.empty()) throw InvalidArgument("empty weight vector");
    for (auto x : m) {
        if (x <= 0) throw NonPositiveEigenvalue("weights must be positive");
    }
    if (support_degree < 0) throw InvalidArgument("negative support degree");
    const std::int64_t k1 = *std::min_element(m.begin(), m.end());
    const std::int64_t k2 = *std::max_element(m.begin(), m.end());
    return (k2 * support_degree + k1 - 1) / k1;
}

}  // namespace ballsym

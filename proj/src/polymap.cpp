#include "ballsym/polymap.hpp"

#include "ballsym/autgroup.hpp"
#include "ballsym/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ballsym {

int MultiIndex::degree() const {
    int d = 0;
    for (int e : entries) d += e;
    return d;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw DimensionMismatch("multi-index length mismatch");
    MultiIndex out = a;
    for (std::size_t j = 0; j < a.size(); ++j) out.entries[j] += b.entries[j];
    return out;
}

std::string MultiIndex::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t j = 0; j < entries.size(); ++j) os << (j ? "," : "") << entries[j];
    os << ")";
    return os.str();
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    return a.entries > b.entries;
}

std::vector<MultiIndex> multi_indices_of_degree(std::size_t n, int d) {
    std::vector<MultiIndex> out;
    if (n == 0) return out;
    std::vector<int> cur(n, 0);
    // Recursive fill with the first coordinate descending gives graded-lex order.
    auto rec = [&](auto& self, std::size_t pos, int remaining) -> void {
        if (pos + 1 == n) {
            cur[pos] = remaining;
            out.emplace_back(cur);
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[pos] = e;
            self(self, pos + 1, remaining - e);
        }
    };
    rec(rec, 0, d);
    return out;
}

// ---------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(std::size_t n, const RadScalar& c) {
    Polynomial p(n);
    p.add_term(MultiIndex::zero(n), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t n, std::size_t j) {
    Polynomial p(n);
    p.add_term(MultiIndex::unit(n, j), RadScalar(1));
    return p;
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, const RadScalar& c) {
    Polynomial p(alpha.size());
    p.add_term(alpha, c);
    return p;
}

int Polynomial::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

RadScalar Polynomial::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? RadScalar() : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, const RadScalar& c) {
    if (alpha.size() != n_) throw DimensionMismatch("monomial has wrong number of variables");
    if (c.empty()) return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    } else if (c.is_zero()) {
        terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (n_ != o.n_) throw DimensionMismatch("polynomials in different numbers of variables");
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (n_ != o.n_) throw DimensionMismatch("polynomials in different numbers of variables");
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("polynomials in different numbers of variables");
    Polynomial out(a.n_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) out.add_term(ea + eb, ca * cb);
    }
    return out;
}

Polynomial operator*(const RadScalar& s, const Polynomial& p) {
    Polynomial out(p.n_);
    for (const auto& [e, c] : p.terms_) out.add_term(e, s * c);
    return out;
}

Polynomial Polynomial::pow(int k) const {
    Polynomial result = constant(n_, RadScalar(1));
    Polynomial base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

namespace {

template <class T>
T monomial_value(const MultiIndex& alpha, const std::vector<T>& z, const T& one) {
    T v = one;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        for (int e = 0; e < alpha[j]; ++e) v = v * z[j];
    }
    return v;
}

}  // namespace

RadScalar Polynomial::evaluate(const std::vector<RadScalar>& z) const {
    if (z.size() != n_) throw DimensionMismatch("point has wrong dimension");
    RadScalar acc;
    for (const auto& [a, c] : terms_) acc += c * monomial_value(a, z, RadScalar(1));
    return acc;
}

FloatComplex Polynomial::evaluate(const std::vector<FloatComplex>& z) const {
    if (z.size() != n_) throw DimensionMismatch("point has wrong dimension");
    const unsigned bits = z.empty() ? kDefaultPrecisionBits : z[0].precision;
    PrecisionScope scope(bits);
    FloatComplex acc(Real(0), Real(0), bits);
    const FloatComplex one(Real(1), Real(0), bits);
    for (const auto& [a, c] : terms_) acc += c.to_float(bits) * monomial_value(a, z, one);
    return acc;
}

// ------------------------------------------------------------------- PolyMap

PolyMap PolyMap::identity(std::size_t n) {
    PolyMap f(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<RadScalar> c(n);
        c[j] = RadScalar(1);
        f.add_term(MultiIndex::unit(n, j), c);
    }
    return f;
}

PolyMap PolyMap::from_components(std::size_t n, const std::vector<Polynomial>& components) {
    PolyMap f(n, components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].vars() != n && !components[i].is_zero()) {
            throw DimensionMismatch("component has wrong number of variables");
        }
        for (const auto& [a, c] : components[i].terms()) {
            std::vector<RadScalar> v(components.size());
            v[i] = c;
            f.add_term(a, v);
        }
    }
    return f;
}

int PolyMap::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

bool PolyMap::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
}

std::vector<RadScalar> PolyMap::value_at_origin() const {
    auto it = terms_.find(MultiIndex::zero(n_));
    return it == terms_.end() ? std::vector<RadScalar>(N_) : it->second;
}

bool PolyMap::vanishes_at_origin() const { return terms_.find(MultiIndex::zero(n_)) == terms_.end(); }

void PolyMap::add_term(const MultiIndex& alpha, const std::vector<RadScalar>& c) {
    if (alpha.size() != n_) throw DimensionMismatch("multi-index length differs from source dimension");
    if (c.size() != N_) throw DimensionMismatch("coefficient vector length differs from target dimension");
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        it = terms_.emplace(alpha, std::vector<RadScalar>(N_)).first;
    }
    bool all_zero = true;
    for (std::size_t i = 0; i < N_; ++i) {
        it->second[i] += c[i];
        if (!it->second[i].empty() && it->second[i].is_zero()) it->second[i] = RadScalar();
        if (!it->second[i].empty()) all_zero = false;
    }
    if (all_zero) terms_.erase(it);
}

Polynomial PolyMap::component(std::size_t i) const {
    if (i >= N_) throw DimensionMismatch("component index out of range");
    Polynomial p(n_);
    for (const auto& [a, c] : terms_) p.add_term(a, c[i]);
    return p;
}

std::vector<MultiIndex> PolyMap::support() const {
    std::vector<MultiIndex> out;
    out.reserve(terms_.size());
    for (const auto& [a, c] : terms_) out.push_back(a);
    return out;
}

RadMatrix PolyMap::coefficient_matrix() const {
    RadMatrix m(N_, terms_.size());
    std::size_t col = 0;
    for (const auto& [a, c] : terms_) {
        for (std::size_t i = 0; i < N_; ++i) m(i, col) = c[i];
        ++col;
    }
    return m;
}

bool operator==(const PolyMap& a, const PolyMap& b) {
    if (a.n_ != b.n_ || a.N_ != b.N_) return false;
    PolyMap diff = a;
    for (const auto& [alpha, c] : b.terms_) {
        std::vector<RadScalar> neg;
        neg.reserve(c.size());
        for (const auto& x : c) neg.push_back(-x);
        diff.add_term(alpha, neg);
    }
    return diff.terms_.empty();
}

// --------------------------------------------------------------- RationalMap

PolyMap multiply(const PolyMap& f, const Polynomial& q) {
    PolyMap out(f.source_dim(), f.target_dim());
    for (const auto& [a, c] : f.terms()) {
        for (const auto& [b, s] : q.terms()) {
            std::vector<RadScalar> v;
            v.reserve(c.size());
            for (const auto& x : c) v.push_back(x * s);
            out.add_term(a + b, v);
        }
    }
    return out;
}

RationalMap::RationalMap(PolyMap num, Polynomial den) : numerator(std::move(num)), denominator(std::move(den)) {
    if (denominator.vars() != numerator.source_dim()) {
        throw DimensionMismatch("denominator has wrong number of variables");
    }
    const RadScalar q0 = denominator.constant_term();
    if (q0.is_zero()) throw DenominatorZero("denominator vanishes at the origin");
    if (!(q0 == RadScalar(1))) {
        const RadScalar inv = q0.field_inverse();
        denominator = inv * denominator;
        numerator = multiply(numerator, Polynomial::constant(numerator.source_dim(), inv));
    }
}

RationalMap RationalMap::from_poly(const PolyMap& f) {
    return RationalMap(f, Polynomial::constant(f.source_dim(), RadScalar(1)));
}

bool RationalMap::is_polynomial() const { return denominator.degree() == 0; }

bool equal(const RationalMap& a, const RationalMap& b) {
    if (a.source_dim() != b.source_dim() || a.target_dim() != b.target_dim()) return false;
    return multiply(a.numerator, b.denominator) == multiply(b.numerator, a.denominator);
}

// ---------------------------------------------------------------- evaluation

std::vector<RadScalar> evaluate(const PolyMap& f, const std::vector<RadScalar>& z) {
    if (z.size() != f.source_dim()) throw DimensionMismatch("point has wrong dimension");
    std::vector<RadScalar> out(f.target_dim());
    for (const auto& [a, c] : f.terms()) {
        const RadScalar m = monomial_value(a, z, RadScalar(1));
        for (std::size_t i = 0; i < c.size(); ++i) out[i] += c[i] * m;
    }
    return out;
}

std::vector<FloatComplex> evaluate(const PolyMap& f, const std::vector<FloatComplex>& z) {
    if (z.size() != f.source_dim()) throw DimensionMismatch("point has wrong dimension");
    const unsigned bits = z.empty() ? kDefaultPrecisionBits : z[0].precision;
    PrecisionScope scope(bits);
    const FloatComplex zero(Real(0), Real(0), bits);
    const FloatComplex one(Real(1), Real(0), bits);
    std::vector<FloatComplex> out(f.target_dim(), zero);
    for (const auto& [a, c] : f.terms()) {
        const FloatComplex m = monomial_value(a, z, one);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i].empty()) out[i] += c[i].to_float(bits) * m;
        }
    }
    return out;
}

std::vector<RadScalar> evaluate(const RationalMap& f, const std::vector<RadScalar>& z) {
    const RadScalar q = f.denominator.evaluate(z);
    if (q.is_zero()) throw DenominatorZero("denominator vanishes at the evaluation point");
    const RadScalar inv = q.field_inverse();
    auto out = evaluate(f.numerator, z);
    for (auto& x : out) x = x * inv;
    return out;
}

std::vector<FloatComplex> evaluate(const RationalMap& f, const std::vector<FloatComplex>& z, double eps) {
    const FloatComplex q = f.denominator.evaluate(z);
    if (q.abs() <= eps) throw DenominatorZero("denominator vanishes at the evaluation point");
    auto out = evaluate(f.numerator, z);
    for (auto& x : out) x /= q;
    return out;
}

// --------------------------------------------------------------- composition

namespace {

PolyMap substitute(const PolyMap& f, const std::vector<Polynomial>& subs, std::size_t new_n) {
    PolyMap out(new_n, f.target_dim());
    // powers[j][e] = subs[j]^e
    std::vector<std::vector<Polynomial>> powers(f.source_dim());
    for (const auto& [a, c] : f.terms()) {
        Polynomial mono = Polynomial::constant(new_n, RadScalar(1));
        for (std::size_t j = 0; j < a.size(); ++j) {
            auto& pw = powers[j];
            if (pw.empty()) pw.push_back(Polynomial::constant(new_n, RadScalar(1)));
            while (static_cast<int>(pw.size()) <= a[j]) pw.push_back(pw.back() * subs[j]);
            if (a[j] > 0) mono = mono * pw[static_cast<std::size_t>(a[j])];
        }
        for (const auto& [b, s] : mono.terms()) {
            std::vector<RadScalar> v;
            v.reserve(c.size());
            for (const auto& x : c) v.push_back(x * s);
            out.add_term(b, v);
        }
    }
    return out;
}

std::vector<Polynomial> linear_forms(const RadMatrix& a, std::size_t n) {
    std::vector<Polynomial> forms;
    for (std::size_t j = 0; j < a.rows(); ++j) {
        Polynomial p(n);
        for (std::size_t k = 0; k < a.cols(); ++k) p.add_term(MultiIndex::unit(n, k), a(j, k));
        forms.push_back(std::move(p));
    }
    return forms;
}

}  // namespace

PolyMap compose_linear(const PolyMap& f, const RadMatrix& a) {
    if (a.rows() != f.source_dim() || a.cols() != f.source_dim()) {
        throw DimensionMismatch("linear substitution must be n x n");
    }
    return substitute(f, linear_forms(a, f.source_dim()), f.source_dim());
}

PolyMap compose_unitary(const PolyMap& f, const RadMatrix& u) {
    if (u.rows() != f.source_dim() || !is_unitary(u)) throw NonUnitary("matrix is not unitary");
    return compose_linear(f, u);
}

PolyMap left_multiply(const RadMatrix& a, const PolyMap& f) {
    if (a.cols() != f.target_dim()) throw DimensionMismatch("left factor has wrong number of columns");
    PolyMap out(f.source_dim(), a.rows());
    for (const auto& [alpha, c] : f.terms()) out.add_term(alpha, a.apply(c));
    return out;
}

RationalMap compose_automorphism(const PolyMap& f, const BallAutomorphism& gamma) {
    const std::size_t n = f.source_dim();
    if (gamma.dim() != n) throw DimensionMismatch("automorphism acts on a different dimension");
    const RadMatrix& m = gamma.matrix();
    std::vector<Polynomial> numer;
    for (std::size_t j = 0; j < n; ++j) {
        Polynomial p(n);
        for (std::size_t k = 0; k < n; ++k) p.add_term(MultiIndex::unit(n, k), m(j, k));
        p.add_term(MultiIndex::zero(n), m(j, n));
        numer.push_back(std::move(p));
    }
    Polynomial den(n);
    for (std::size_t k = 0; k < n; ++k) den.add_term(MultiIndex::unit(n, k), m(n, k));
    den.add_term(MultiIndex::zero(n), m(n, n));

    const int D = f.degree();
    // sum_alpha c_alpha prod_j numer_j^alpha_j den^(D - |alpha|)  /  den^D
    std::vector<Polynomial> den_pow{Polynomial::constant(n, RadScalar(1))};
    for (int k = 1; k <= D; ++k) den_pow.push_back(den_pow.back() * den);
    PolyMap out(n, f.target_dim());
    for (const auto& [a, c] : f.terms()) {
        Polynomial mono = den_pow[static_cast<std::size_t>(D - a.degree())];
        for (std::size_t j = 0; j < n; ++j) {
            if (a[j] > 0) mono = mono * numer[j].pow(a[j]);
        }
        for (const auto& [b, s] : mono.terms()) {
            std::vector<RadScalar> v;
            v.reserve(c.size());
            for (const auto& x : c) v.push_back(x * s);
            out.add_term(b, v);
        }
    }
    return RationalMap(std::move(out), den_pow.back());
}

// -------------------------------------------------------------- constructions

PolyMap tensor_power(std::size_t n, int m) {
    if (n < 1 || m < 1) throw InvalidArgument("tensor_power needs n >= 1 and m >= 1");
    const auto idx = multi_indices_of_degree(n, m);
    PolyMap f(n, idx.size());
    mpz_class m_fact;
    mpz_fac_ui(m_fact.get_mpz_t(), static_cast<unsigned long>(m));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        mpz_class denom = 1;
        for (int e : idx[i].entries) {
            mpz_class ef;
            mpz_fac_ui(ef.get_mpz_t(), static_cast<unsigned long>(e));
            denom *= ef;
        }
        const mpz_class multinomial = m_fact / denom;
        std::vector<RadScalar> c(idx.size());
        c[i] = RadScalar::sqrt_rational(mpq_class(multinomial));
        f.add_term(idx[i], c);
    }
    return f;
}

PolyMap partial_tensor(const PolyMap& f, const std::set<std::size_t>& split) {
    if (split.empty()) throw EmptySplit("partial_tensor needs a nonempty component set");
    const std::size_t n = f.source_dim();
    for (auto i : split) {
        if (i >= f.target_dim()) throw DimensionMismatch("split index out of range");
    }
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < f.target_dim(); ++i) {
        const Polynomial g = f.component(i);
        if (!split.count(i)) {
            comps.push_back(g);
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) comps.push_back(g * Polynomial::variable(n, j));
    }
    return PolyMap::from_components(n, comps);
}

PolyMap direct_sum(const PolyMap& f, const PolyMap& g, const mpq_class& t) {
    if (f.source_dim() != g.source_dim()) throw DimensionMismatch("direct_sum needs equal source dimensions");
    if (t < 0 || t > 1) throw InvalidArgument("direct_sum weight must lie in [0, 1]");
    const RadScalar sf = RadScalar::sqrt_rational(t);
    const RadScalar sg = RadScalar::sqrt_rational(1 - t);
    const std::size_t N = f.target_dim() + g.target_dim();
    PolyMap out(f.source_dim(), N);
    for (const auto& [a, c] : f.terms()) {
        std::vector<RadScalar> v(N);
        for (std::size_t i = 0; i < c.size(); ++i) v[i] = sf * c[i];
        out.add_term(a, v);
    }
    for (const auto& [a, c] : g.terms()) {
        std::vector<RadScalar> v(N);
        for (std::size_t i = 0; i < c.size(); ++i) v[f.target_dim() + i] = sg * c[i];
        out.add_term(a, v);
    }
    return out;
}

PolyMap pad(const PolyMap& f, std::size_t k) {
    if (k < 1) throw InvalidArgument("pad needs k >= 1");
    PolyMap out(f.source_dim(), f.target_dim() + k);
    for (const auto& [a, c] : f.terms()) {
        std::vector<RadScalar> v(k);
        v.insert(v.end(), c.begin(), c.end());
        out.add_term(a, v);
    }
    return out;
}

PolyMap whitney_map() {
    PolyMap f(2, 3);
    f.add_term({1, 0}, {RadScalar(1), RadScalar(), RadScalar()});
    f.add_term({1, 1}, {RadScalar(), RadScalar(1), RadScalar()});
    f.add_term({0, 2}, {RadScalar(), RadScalar(), RadScalar(1)});
    return f;
}

SpanReport span_rank(const PolyMap& f) {
    SpanReport report;
    if (f.is_zero()) return report;
    const RadMatrix c = f.coefficient_matrix();
    const Echelon e = row_reduce(c);
    const auto support = f.support();
    report.rank = e.pivots.size();
    for (auto p : e.pivots) {
        report.basis.push_back(c.column(p));
        report.basis_support.push_back(support[p]);
    }
    return report;
}

// ------------------------------------------------------------------ sampling

std::vector<FloatComplex> random_sphere_point(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + 12345);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> re(n), im(n);
    double norm2 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        re[j] = g(rng);
        im[j] = g(rng);
        norm2 += re[j] * re[j] + im[j] * im[j];
    }
    PrecisionScope scope(kDefaultPrecisionBits + 32);
    const Real norm = boost::multiprecision::sqrt(Real(norm2));
    std::vector<FloatComplex> z;
    for (std::size_t j = 0; j < n; ++j) z.emplace_back(Real(re[j]) / norm, Real(im[j]) / norm);
    return z;
}

std::vector<FloatComplex> random_ball_point(std::size_t n, std::uint64_t seed, double max_radius) {
    auto z = random_sphere_point(n, seed);
    std::mt19937_64 rng(seed ^ 0xABCDEF);
    std::uniform_real_distribution<double> r(0.0, max_radius);
    const FloatComplex s(r(rng), 0.0);
    for (auto& x : z) x *= s;
    return z;
}

double sample_denominator_min(const RationalMap& f, std::size_t samples) {
    const std::size_t n = f.source_dim();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples; ++i) {
        auto z = random_sphere_point(n, i);
        const FloatComplex radius(static_cast<double>(i % 5) / 4.0, 0.0);
        for (auto& x : z) x *= radius;
        best = std::min(best, f.denominator.evaluate(z).abs().convert_to<double>());
    }
    return best;
}

}  // namespace ballsym

#include "ballsym/scalar.hpp"

#include "ballsym/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ballsym {

unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
    Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

Real FloatComplex::abs() const { return boost::multiprecision::sqrt(norm2()); }

FloatComplex& FloatComplex::operator+=(const FloatComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
}

FloatComplex& FloatComplex::operator-=(const FloatComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

FloatComplex& FloatComplex::operator*=(const FloatComplex& o) {
    Real r = re * o.re - im * o.im;
    Real i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

FloatComplex& FloatComplex::operator/=(const FloatComplex& o) {
    const Real d = o.norm2();
    if (d == 0) throw DivisionByZero("float division by zero");
    Real r = (re * o.re + im * o.im) / d;
    Real i = (im * o.re - re * o.im) / d;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

double abs_diff(const FloatComplex& a, const FloatComplex& b) {
    return (a - b).abs().convert_to<double>();
}

bool approx_equal(const FloatComplex& a, const FloatComplex& b, double eps) {
    return abs_diff(a, b) <= eps;
}

std::pair<std::int64_t, std::int64_t> square_free_decompose(std::int64_t n) {
    if (n <= 0) throw InvalidArgument("square_free_decompose needs a positive integer");
    std::int64_t square = 1;
    std::int64_t free = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        for (int k = 0; k < e / 2; ++k) square *= p;
        if (e % 2 == 1) free *= p;
    }
    free *= n;
    return {square, free};
}

bool is_square_free(std::int64_t n) { return n > 0 && square_free_decompose(n).first == 1; }

namespace {

std::int64_t pow_mod(std::int64_t base, std::int64_t exp, std::int64_t mod) {
    std::int64_t result = 1;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) result = result * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return result;
}

CycloScalar sqrt_prime(std::int64_t p) {
    if (p == 2) return CycloScalar::root_of_unity(8, 1) + CycloScalar::root_of_unity(8, 7);
    // g = sum (a/p) zeta_p^a; g = sqrt(p) for p = 1 mod 4, i*sqrt(p) for p = 3 mod 4.
    std::vector<mpq_class> raw(static_cast<std::size_t>(p), 0);
    for (std::int64_t a = 1; a < p; ++a) {
        raw[static_cast<std::size_t>(a)] = pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
    }
    CycloScalar g = CycloScalar::from_raw(p, raw);
    if (p % 4 == 1) return g;
    return -(CycloScalar::root_of_unity(4, 1) * g);
}

std::int64_t radical_embedding_order(std::int64_t r) {
    std::int64_t order = 1;
    for (std::int64_t p = 2; p * p <= r; ++p) {
        if (r % p == 0) {
            r /= p;
            order = std::lcm(order, p == 2 ? 8 : (p % 4 == 1 ? p : 4 * p));
        }
    }
    if (r > 1) order = std::lcm(order, r == 2 ? 8 : (r % 4 == 1 ? r : 4 * r));
    return order;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

std::int64_t quadratic_conductor(std::int64_t r) {
    if (r == 1) return 1;
    return r % 4 == 1 ? r : 4 * r;
}

CycloScalar sqrt_as_cyclotomic(std::int64_t r) {
    if (!is_square_free(r)) throw InvalidArgument("radicand must be square-free");
    CycloScalar result(mpq_class(1));
    std::int64_t m = r;
    for (std::int64_t p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            result *= sqrt_prime(p);
        }
    }
    if (m > 1) result *= sqrt_prime(m);
    return result;
}

CycloScalar cyclo_make(std::int64_t order, std::span<const std::int64_t> raw) {
    std::vector<mpq_class> q(raw.begin(), raw.end());
    return CycloScalar::from_raw(order, q);
}

RadScalar::RadScalar(const CycloScalar& c) {
    if (!c.is_zero()) terms_.emplace(1, c);
}

RadScalar::RadScalar(const mpq_class& q) {
    if (q != 0) terms_.emplace(1, CycloScalar(q));
}

RadScalar RadScalar::from_terms(std::map<std::int64_t, CycloScalar> terms) {
    RadScalar r;
    for (auto& [rad, c] : terms) {
        if (!is_square_free(rad)) throw InvalidArgument("radicand " + std::to_string(rad) + " is not square-free");
        r.add_term(rad, c);
    }
    return r;
}

RadScalar RadScalar::radical(std::int64_t r, const CycloScalar& c) {
    const auto [s, free] = square_free_decompose(r);
    RadScalar out;
    out.add_term(free, c * mpq_class(s));
    return out;
}

RadScalar RadScalar::sqrt_rational(const mpq_class& q) {
    if (q < 0) throw InvalidArgument("sqrt_rational of a negative value");
    if (q == 0) return {};
    mpq_class c = q;
    c.canonicalize();
    // sqrt(p/d) = sqrt(p*d) / d
    const mpz_class prod = c.get_num() * c.get_den();
    if (!prod.fits_slong_p()) throw UnsupportedScalar("radicand too large");
    const auto [s, free] = square_free_decompose(prod.get_si());
    RadScalar out;
    out.add_term(free, CycloScalar(mpq_class(mpz_class(s), c.get_den())));
    return out;
}

void RadScalar::add_term(std::int64_t r, const CycloScalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(r, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::int64_t RadScalar::order() const {
    std::int64_t L = 1;
    for (const auto& [r, c] : terms_) L = std::lcm(L, c.order());
    return L;
}

std::int64_t RadScalar::embedding_order() const {
    std::int64_t L = 1;
    for (const auto& [r, c] : terms_) {
        L = std::lcm(L, c.order());
        if (r != 1) L = std::lcm(L, radical_embedding_order(r));
    }
    return L;
}

CycloScalar RadScalar::to_cyclotomic() const {
    CycloScalar out(mpq_class(0), embedding_order());
    for (const auto& [r, c] : terms_) out += r == 1 ? c : c * sqrt_as_cyclotomic(r);
    return out.lift(embedding_order());
}

RadScalar RadScalar::canonical() const {
    const std::int64_t L = order();
    std::vector<std::int64_t> primes;
    for (const auto& [r, c] : terms_) {
        for (auto p : prime_factors(r)) {
            if (std::find(primes.begin(), primes.end(), p) == primes.end()) primes.push_back(p);
        }
    }
    // Radicands built from these primes whose square root already lies in K.
    std::vector<std::int64_t> absorbable{1};
    for (std::size_t mask = 1; mask < (std::size_t{1} << primes.size()); ++mask) {
        std::int64_t s = 1;
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if (mask & (std::size_t{1} << i)) s *= primes[i];
        }
        if (L % quadratic_conductor(s) == 0) absorbable.push_back(s);
    }
    RadScalar out;
    for (const auto& [r, c] : terms_) {
        std::int64_t best_rep = 0;
        std::int64_t best_s = 1;
        for (auto s : absorbable) {
            const std::int64_t g = std::gcd(r, s);
            const std::int64_t rep = (r / g) * (s / g);
            if (best_rep == 0 || rep < best_rep) {
                best_rep = rep;
                best_s = s;
            }
        }
        // sqrt(r) = g sqrt(rep) sqrt(s) / s
        CycloScalar coeff = c.lift(L);
        if (best_s != 1) {
            const std::int64_t g = std::gcd(r, best_s);
            coeff = coeff * sqrt_as_cyclotomic(best_s).lift(L) * mpq_class(g, best_s);
        }
        out.add_term(best_rep, coeff);
    }
    return out;
}

bool RadScalar::is_zero() const {
    if (terms_.size() <= 1) return terms_.empty();
    return canonical().terms_.empty();
}

bool RadScalar::is_single_radicand() const {
    if (terms_.size() <= 1) return terms_.size() == 1;
    return canonical().terms_.size() == 1;
}

bool RadScalar::is_rational() const {
    const RadScalar c = terms_.size() <= 1 ? *this : canonical();
    if (c.terms_.empty()) return true;
    return c.terms_.size() == 1 && c.terms_.begin()->first == 1 && c.terms_.begin()->second.is_rational();
}

mpq_class RadScalar::rational_value() const {
    if (!is_rational()) throw InvalidArgument("value is not rational: " + to_string());
    const RadScalar c = terms_.size() <= 1 ? *this : canonical();
    return c.terms_.empty() ? mpq_class(0) : c.terms_.begin()->second.rational_value();
}

RadScalar RadScalar::conj() const {
    RadScalar out;
    for (const auto& [r, c] : terms_) out.terms_.emplace(r, c.conj());
    return out;
}

RadScalar RadScalar::inv() const {
    if (terms_.size() > 1) {
        const RadScalar c = canonical();
        if (c.terms_.size() == 1) return c.inv();
        if (c.terms_.empty()) throw DivisionByZero("inverse of zero");
        throw UnsupportedInverse("inverse of a multi-radicand value: " + to_string());
    }
    if (terms_.empty()) throw DivisionByZero("inverse of zero");
    const auto& [r, c] = *terms_.begin();
    RadScalar out;
    out.terms_.emplace(r, c.inverse() * mpq_class(1, r));
    return out;
}

RadScalar RadScalar::field_inverse() const {
    const RadScalar c = terms_.size() <= 1 ? *this : canonical();
    if (c.terms_.size() <= 1) return c.inv();
    // Split off the largest prime p: x = a + b sqrt(p), x (a - b sqrt(p)) = a^2 - p b^2.
    std::int64_t p = 1;
    for (const auto& [r, coeff] : c.terms_) {
        for (auto q : prime_factors(r)) p = std::max(p, q);
    }
    RadScalar a;
    RadScalar b;
    for (const auto& [r, coeff] : c.terms_) {
        if (r % p == 0) {
            b.add_term(r / p, coeff);
        } else {
            a.add_term(r, coeff);
        }
    }
    const RadScalar partner = a - b * radical(p);
    if (partner.is_zero()) {
        const CycloScalar e = c.to_cyclotomic();
        if (e.is_zero()) throw DivisionByZero("inverse of zero");
        return RadScalar(e.inverse());
    }
    const RadScalar norm = a * a - b * b * RadScalar(mpq_class(p));
    return partner * norm.field_inverse();
}

RadScalar RadScalar::operator-() const {
    RadScalar out;
    for (const auto& [r, c] : terms_) out.terms_.emplace(r, -c);
    return out;
}

RadScalar& RadScalar::operator+=(const RadScalar& o) {
    for (const auto& [r, c] : o.terms_) add_term(r, c);
    return *this;
}

RadScalar& RadScalar::operator-=(const RadScalar& o) {
    for (const auto& [r, c] : o.terms_) add_term(r, -c);
    return *this;
}

RadScalar operator*(const RadScalar& a, const RadScalar& b) {
    RadScalar out;
    for (const auto& [r1, c1] : a.terms_) {
        for (const auto& [r2, c2] : b.terms_) {
            // sqrt(r1) sqrt(r2) = g sqrt(r1 r2 / g^2), g = gcd(r1, r2)
            const std::int64_t g = std::gcd(r1, r2);
            out.add_term((r1 / g) * (r2 / g), c1 * c2 * mpq_class(g));
        }
    }
    return out;
}

FloatComplex to_float(const CycloScalar& c, unsigned bits) {
    if (bits < 53) throw InvalidArgument("float precision must be at least 53 bits");
    FloatComplex acc;
    {
        PrecisionScope work(bits + 32);
        const Real two_pi = 2 * boost::math::constants::pi<Real>();
        Real re = 0;
        Real im = 0;
        for (std::size_t j = 0; j < c.coeffs().size(); ++j) {
            const auto& q = c.coeffs()[j];
            if (q == 0) continue;
            const Real qv = Real(q.get_num().get_str()) / Real(q.get_den().get_str());
            const Real angle = two_pi * static_cast<long>(j) / static_cast<long>(c.order());
            re += qv * boost::multiprecision::cos(angle);
            im += qv * boost::multiprecision::sin(angle);
        }
        acc.re = re;
        acc.im = im;
    }
    PrecisionScope out(bits);
    acc.re.precision(bits_to_digits10(bits));
    acc.im.precision(bits_to_digits10(bits));
    acc.precision = bits;
    return acc;
}

FloatComplex RadScalar::to_float(unsigned bits) const {
    if (bits < 53) throw InvalidArgument("float precision must be at least 53 bits");
    FloatComplex acc;
    {
        PrecisionScope work(bits + 32);
        acc = FloatComplex(Real(0), Real(0), bits + 32);
        for (const auto& [r, c] : terms_) {
            FloatComplex t = ballsym::to_float(c, bits + 32);
            const Real s = boost::multiprecision::sqrt(Real(r));
            acc += FloatComplex(t.re * s, t.im * s, bits + 32);
        }
    }
    acc.re.precision(bits_to_digits10(bits));
    acc.im.precision(bits_to_digits10(bits));
    acc.precision = bits;
    return acc;
}

std::string RadScalar::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [r, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        const bool compound = c.coeffs().size() > 1 || (c.coeffs().size() == 1 && c.coeffs()[0] == 0);
        if (r == 1) {
            os << (compound ? "(" + c.to_string() + ")" : c.to_string());
        } else {
            if (!(c.coeffs().size() == 1 && c.coeffs()[0] == 1)) {
                os << (compound ? "(" + c.to_string() + ")" : c.to_string()) << "*";
            }
            os << "sqrt(" << r << ")";
        }
    }
    return os.str();
}

RadScalar rad_arith(const RadScalar& a, const RadScalar& b, RadOp op) {
    switch (op) {
        case RadOp::Add: return a + b;
        case RadOp::Mul: return a * b;
        case RadOp::Conj: return a.conj();
        case RadOp::Inv: return a.inv();
    }
    throw InvalidArgument("unknown scalar operation");
}

}  // namespace ballsym

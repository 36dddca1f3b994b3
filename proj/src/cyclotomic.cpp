#include "ballsym/cyclotomic.hpp"

#include "ballsym/errors.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace ballsym {

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

// Exact division of integer polynomials (divisor monic).
std::vector<std::int64_t> divide_monic(std::vector<std::int64_t> num,
                                       const std::vector<std::int64_t>& den) {
    const std::size_t dd = den.size() - 1;
    std::vector<std::int64_t> quot(num.size() - dd, 0);
    for (std::size_t i = num.size(); i-- > dd;) {
        const std::int64_t c = num[i];
        quot[i - dd] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    return quot;
}

}  // namespace

const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t order) {
    static std::mutex mu;
    static std::map<std::int64_t, std::vector<std::int64_t>> cache;
    if (order < 1) throw InvalidArgument("cyclotomic order must be >= 1");
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(order); it != cache.end()) return it->second;
    }
    std::vector<std::int64_t> poly(static_cast<std::size_t>(order) + 1, 0);
    poly[0] = -1;
    poly[static_cast<std::size_t>(order)] = 1;
    for (std::int64_t d = 1; d < order; ++d) {
        if (order % d == 0) poly = divide_monic(poly, cyclotomic_polynomial(d));
    }
    std::lock_guard lock(mu);
    return cache.emplace(order, std::move(poly)).first->second;
}

CycloScalar::CycloScalar(const mpq_class& q, std::int64_t order) : order_(order) {
    if (order < 1) throw InvalidArgument("cyclotomic order must be >= 1");
    if (q != 0) {
        coeffs_.push_back(q);
        coeffs_.back().canonicalize();
    }
}

CycloScalar::CycloScalar(std::int64_t order, std::vector<mpq_class> coeffs)
    : order_(order), coeffs_(std::move(coeffs)) {}

std::vector<mpq_class> CycloScalar::reduce(std::int64_t order, std::vector<mpq_class> dense) {
    const auto& cp = cyclotomic_polynomial(order);
    const std::size_t deg = cp.size() - 1;
    // Fold exponents modulo L first (zeta^L = 1).
    const auto L = static_cast<std::size_t>(order);
    if (dense.size() > L) {
        for (std::size_t i = L; i < dense.size(); ++i) dense[i % L] += dense[i];
        dense.resize(L);
    }
    for (std::size_t i = dense.size(); i-- > deg;) {
        const mpq_class c = dense[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j <= deg; ++j) {
            if (cp[j] != 0) dense[i - deg + j] -= c * cp[j];
        }
    }
    if (dense.size() > deg) dense.resize(deg);
    while (!dense.empty() && dense.back() == 0) dense.pop_back();
    for (auto& c : dense) c.canonicalize();
    return dense;
}

CycloScalar CycloScalar::from_raw(std::int64_t order, std::span<const mpq_class> raw) {
    if (order < 1) throw InvalidArgument("cyclotomic order must be >= 1");
    return CycloScalar(order, reduce(order, std::vector<mpq_class>(raw.begin(), raw.end())));
}

CycloScalar CycloScalar::root_of_unity(std::int64_t order, std::int64_t k) {
    if (order < 1) throw InvalidArgument("cyclotomic order must be >= 1");
    k %= order;
    if (k < 0) k += order;
    std::vector<mpq_class> dense(static_cast<std::size_t>(k) + 1, 0);
    dense.back() = 1;
    return CycloScalar(order, reduce(order, std::move(dense)));
}

mpq_class CycloScalar::rational_value() const {
    if (!is_rational()) throw InvalidArgument("cyclotomic value is not rational: " + to_string());
    return coeffs_.empty() ? mpq_class(0) : coeffs_[0];
}

CycloScalar CycloScalar::lift(std::int64_t target) const {
    if (target == order_) return *this;
    if (target < 1 || target % order_ != 0) {
        throw InvalidArgument("lift target must be a multiple of the current order");
    }
    const std::int64_t step = target / order_;
    if (coeffs_.empty()) return CycloScalar(target, std::vector<mpq_class>{});
    std::vector<mpq_class> dense(static_cast<std::size_t>((coeffs_.size() - 1) * step) + 1, 0);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) dense[j * static_cast<std::size_t>(step)] = coeffs_[j];
    return CycloScalar(target, reduce(target, std::move(dense)));
}

CycloScalar CycloScalar::galois(std::int64_t k) const {
    if (std::gcd(k, order_) != 1) throw InvalidArgument("Galois exponent must be coprime to the order");
    if (coeffs_.size() <= 1) return *this;
    k %= order_;
    if (k < 0) k += order_;
    std::vector<mpq_class> dense(static_cast<std::size_t>(order_), 0);
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        dense[(j * static_cast<std::size_t>(k)) % static_cast<std::size_t>(order_)] += coeffs_[j];
    }
    return CycloScalar(order_, reduce(order_, std::move(dense)));
}

mpq_class CycloScalar::norm() const {
    CycloScalar acc(mpq_class(1), order_);
    for (std::int64_t k = 1; k < order_ || k == 1; ++k) {
        if (std::gcd(k, order_) == 1) acc *= galois(k);
    }
    return acc.rational_value();
}

CycloScalar CycloScalar::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero cyclotomic value");
    if (is_rational()) return CycloScalar(1 / coeffs_[0], order_);
    // a^{-1} = (product of the other conjugates) / N(a)
    CycloScalar others(mpq_class(1), order_);
    for (std::int64_t k = 2; k < order_; ++k) {
        if (std::gcd(k, order_) == 1) others *= galois(k);
    }
    const mpq_class n = (others * *this).rational_value();
    return others * mpq_class(1 / n);
}

CycloScalar CycloScalar::operator-() const {
    CycloScalar r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

namespace {

std::int64_t common_order(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace

CycloScalar& CycloScalar::operator+=(const CycloScalar& o) {
    if (o.order_ != order_) {
        const auto L = common_order(order_, o.order_);
        *this = lift(L);
        return *this += o.lift(L);
    }
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) coeffs_[j] += o.coeffs_[j];
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    return *this;
}

CycloScalar& CycloScalar::operator-=(const CycloScalar& o) { return *this += -o; }

CycloScalar operator*(const CycloScalar& a, const CycloScalar& b) {
    if (a.order_ != b.order_) {
        const auto L = common_order(a.order_, b.order_);
        return a.lift(L) * b.lift(L);
    }
    if (a.is_zero() || b.is_zero()) return CycloScalar(a.order_, std::vector<mpq_class>{});
    if (a.coeffs_.size() == 1) return b * a.coeffs_[0];
    if (b.coeffs_.size() == 1) return a * b.coeffs_[0];
    std::vector<mpq_class> dense(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) dense[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return CycloScalar(a.order_, CycloScalar::reduce(a.order_, std::move(dense)));
}

CycloScalar& CycloScalar::operator*=(const CycloScalar& o) { return *this = *this * o; }

CycloScalar& CycloScalar::operator*=(const mpq_class& q) {
    if (q == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& c : coeffs_) c *= q;
    return *this;
}

bool operator==(const CycloScalar& a, const CycloScalar& b) {
    if (a.order_ == b.order_) return a.coeffs_ == b.coeffs_;
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    const auto L = common_order(a.order_, b.order_);
    return a.lift(L).coeffs_ == b.lift(L).coeffs_;
}

std::string CycloScalar::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (j == 0) {
            os << coeffs_[j].get_str();
        } else {
            if (coeffs_[j] != 1) os << coeffs_[j].get_str() << "*";
            os << "z" << order_;
            if (j > 1) os << "^" << j;
        }
    }
    return os.str();
}

}  // namespace ballsym

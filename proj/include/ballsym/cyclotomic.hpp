#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ballsym {

/// Euler totient.
std::int64_t euler_phi(std::int64_t n);

/// Coefficients of the L-th cyclotomic polynomial, constant term first.
/// Cached; safe to call concurrently.
const std::vector<std::int64_t>& cyclotomic_polynomial(std::int64_t order);

/// Element of Q(zeta_L) in the power basis 1, zeta, ..., zeta^(phi(L)-1),
/// reduced modulo the L-th cyclotomic polynomial with trailing zeros trimmed.
/// The representation is unique for a fixed order; values of different
/// orders compare equal after lifting both to the lcm of the orders.
class CycloScalar {
public:
    CycloScalar() = default;
    explicit CycloScalar(const mpq_class& q, std::int64_t order = 1);

    /// Canonical representative of sum_j raw[j] zeta_L^j.
    static CycloScalar from_raw(std::int64_t order, std::span<const mpq_class> raw);
    /// zeta_L^k for any integer k.
    static CycloScalar root_of_unity(std::int64_t order, std::int64_t k);

    std::int64_t order() const noexcept { return order_; }
    const std::vector<mpq_class>& coeffs() const noexcept { return coeffs_; }

    bool is_zero() const noexcept { return coeffs_.empty(); }
    bool is_rational() const noexcept { return coeffs_.size() <= 1; }
    /// Throws InvalidArgument unless is_rational().
    mpq_class rational_value() const;

    /// Same value expressed at order `target`, which must be a multiple of order().
    CycloScalar lift(std::int64_t target) const;

    /// Galois automorphism zeta -> zeta^k, gcd(k, L) = 1.
    CycloScalar galois(std::int64_t k) const;
    /// Complex conjugation: zeta -> zeta^(L-1).
    CycloScalar conj() const { return galois(order_ - 1); }
    /// Field norm down to Q.
    mpq_class norm() const;
    /// Multiplicative inverse; throws DivisionByZero on zero.
    CycloScalar inverse() const;

    CycloScalar operator-() const;
    CycloScalar& operator+=(const CycloScalar& o);
    CycloScalar& operator-=(const CycloScalar& o);
    CycloScalar& operator*=(const CycloScalar& o);
    CycloScalar& operator*=(const mpq_class& q);

    friend CycloScalar operator+(CycloScalar a, const CycloScalar& b) { return a += b; }
    friend CycloScalar operator-(CycloScalar a, const CycloScalar& b) { return a -= b; }
    friend CycloScalar operator*(const CycloScalar& a, const CycloScalar& b);
    friend CycloScalar operator*(CycloScalar a, const mpq_class& q) { return a *= q; }
    friend bool operator==(const CycloScalar& a, const CycloScalar& b);

    /// Human-readable form such as "1/2 + 3*z^2" (z = primitive root of order L).
    std::string to_string() const;

private:
    CycloScalar(std::int64_t order, std::vector<mpq_class> coeffs);
    static std::vector<mpq_class> reduce(std::int64_t order, std::vector<mpq_class> dense);

    std::int64_t order_ = 1;
    std::vector<mpq_class> coeffs_;
};

}  // namespace ballsym

#pragma once

// Shared generators and independent oracles for the test suites.

#include "ballsym/matrix.hpp"
#include "ballsym/scalar.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace ballsym::testing {

inline const std::vector<std::int64_t>& square_free_radicands(std::int64_t limit = 30) {
    static const std::vector<std::int64_t> table = [limit] {
        std::vector<std::int64_t> out;
        for (std::int64_t r = 1; r <= limit; ++r) {
            if (is_square_free(r)) out.push_back(r);
        }
        return out;
    }();
    return table;
}

inline CycloScalar random_cyclo(std::mt19937_64& rng, std::int64_t order) {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::vector<mpq_class> raw(static_cast<std::size_t>(order));
    for (auto& c : raw) c = mpq_class(coeff(rng), den(rng));
    return CycloScalar::from_raw(order, raw);
}

/// Up to two radicand terms, coefficient orders dividing 24.
inline RadScalar random_rad(std::mt19937_64& rng, int max_terms = 2) {
    static const std::int64_t orders[] = {1, 2, 3, 4, 6, 8, 12, 24};
    std::uniform_int_distribution<std::size_t> ord_pick(0, 7);
    auto ord = [&](std::mt19937_64& g) { return orders[ord_pick(g)]; };
    const auto& rads = square_free_radicands();
    std::uniform_int_distribution<std::size_t> pick(0, rads.size() - 1);
    std::uniform_int_distribution<int> nterms(1, max_terms);
    RadScalar out;
    const int k = nterms(rng);
    for (int t = 0; t < k; ++t) out += RadScalar::radical(rads[pick(rng)], random_cyclo(rng, ord(rng)));
    return out;
}

inline std::vector<RadScalar> rv(std::initializer_list<mpq_class> xs) {
    return std::vector<RadScalar>(xs.begin(), xs.end());
}

/// <a, b> = sum a_i conj(b_i), written out directly.
inline RadScalar inner(const std::vector<RadScalar>& a, const std::vector<RadScalar>& b) {
    RadScalar acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i].conj();
    return acc;
}

/// Rational point with |z|^2 < 1/2 (coordinates k/(4n), |k| <= 2).
inline std::vector<RadScalar> random_rational_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> k(-2, 2);
    std::vector<RadScalar> z;
    for (std::size_t j = 0; j < n; ++j) {
        z.emplace_back(CycloScalar(mpq_class(k(rng), static_cast<long>(4 * n))) +
                       CycloScalar(mpq_class(k(rng), static_cast<long>(4 * n))) * CycloScalar::root_of_unity(4, 1));
    }
    return z;
}

/// Monomial unitary (permutation times roots of unity of order dividing 12),
/// optionally followed by a 45 degree rotation in the first two coordinates.
inline RadMatrix random_unitary(std::mt19937_64& rng, std::size_t n, bool rotate = false) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<int> e(0, 11);
    RadMatrix u(n, n);
    for (std::size_t i = 0; i < n; ++i) u(i, perm[i]) = RadScalar::root_of_unity(12, e(rng));
    if (rotate && n >= 2) {
        RadMatrix r = RadMatrix::identity(n);
        const RadScalar h = RadScalar::radical(2, CycloScalar(mpq_class(1, 2)));
        r(0, 0) = h;
        r(0, 1) = -h;
        r(1, 0) = h;
        r(1, 1) = h;
        u = r * u;
    }
    return u;
}

}  // namespace ballsym::testing

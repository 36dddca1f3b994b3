#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace ballsym {

using IntMatrix = std::vector<std::vector<mpz_class>>;

/// U A V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... , d_i > 0.
struct SmithForm {
    std::size_t rows = 0;
    std::size_t cols = 0;
    IntMatrix u;
    IntMatrix v;
    IntMatrix d;
    std::vector<mpz_class> invariant_factors;  // the nonzero diagonal entries

    std::size_t rank() const noexcept { return invariant_factors.size(); }
};

IntMatrix int_identity(std::size_t n);
IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner);
/// Determinant is +1 or -1.
bool is_unimodular(const IntMatrix& m);

/// `cols` gives the width when `a` has no rows.
SmithForm smith_normal_form(const IntMatrix& a, std::size_t cols);
/// Re-multiplies U A V and checks D, divisibility and unimodularity.
bool verify_smith(const IntMatrix& a, const SmithForm& s);

}  // namespace ballsym

#include "ballsym/lattice.hpp"

#include "ballsym/errors.hpp"

#include <utility>

namespace ballsym {

IntMatrix int_identity(std::size_t n) {
    IntMatrix m(n, std::vector<mpz_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

IntMatrix int_multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner) {
    const std::size_t cols = b.empty() ? 0 : b[0].size();
    IntMatrix out(a.size(), std::vector<mpz_class>(cols, 0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != inner) throw DimensionMismatch("integer matrix shape mismatch");
        for (std::size_t k = 0; k < inner; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

bool is_unimodular(const IntMatrix& m) {
    // Fraction-free (Bareiss) determinant.
    const std::size_t n = m.size();
    IntMatrix a = m;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && a[piv][k] == 0) ++piv;
        if (piv == n) return false;
        if (piv != k) {
            std::swap(a[piv], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    const mpz_class det = n == 0 ? mpz_class(1) : mpz_class(sign * prev);
    return abs(det) == 1;
}

namespace {

struct Work {
    IntMatrix a;
    IntMatrix u;
    IntMatrix v;
    std::size_t rows;
    std::size_t cols;

    void swap_rows(std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        std::swap(u[i], u[j]);
    }
    void swap_cols(std::size_t i, std::size_t j) {
        for (auto& r : a) std::swap(r[i], r[j]);
        for (auto& r : v) std::swap(r[i], r[j]);
    }
    // row_i -= q row_j
    void row_sub(std::size_t i, std::size_t j, const mpz_class& q) {
        for (std::size_t k = 0; k < cols; ++k) a[i][k] -= q * a[j][k];
        for (std::size_t k = 0; k < rows; ++k) u[i][k] -= q * u[j][k];
    }
    // col_i -= q col_j
    void col_sub(std::size_t i, std::size_t j, const mpz_class& q) {
        for (std::size_t k = 0; k < rows; ++k) a[k][i] -= q * a[k][j];
        for (std::size_t k = 0; k < cols; ++k) v[k][i] -= q * v[k][j];
    }
    void negate_row(std::size_t i) {
        for (auto& x : a[i]) x = -x;
        for (auto& x : u[i]) x = -x;
    }
};

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& input, std::size_t cols) {
    for (const auto& r : input) {
        if (r.size() != cols) throw DimensionMismatch("integer matrix rows have unequal length");
    }
    const std::size_t rows = input.size();
    Work w{input, int_identity(rows), int_identity(cols), rows, cols};
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // Smallest nonzero entry of the trailing block as pivot.
        std::size_t pi = rows;
        std::size_t pj = cols;
        for (std::size_t i = t; i < rows; ++i) {
            for (std::size_t j = t; j < cols; ++j) {
                if (w.a[i][j] == 0) continue;
                if (pi == rows || abs(w.a[i][j]) < abs(w.a[pi][pj])) {
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi == rows) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (w.a[i][t] == 0) continue;
                w.row_sub(i, t, floor_div(w.a[i][t], w.a[t][t]));
                if (w.a[i][t] != 0) {
                    w.swap_rows(t, i);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (w.a[t][j] == 0) continue;
                w.col_sub(j, t, floor_div(w.a[t][j], w.a[t][t]));
                if (w.a[t][j] != 0) {
                    w.swap_cols(t, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // The pivot must divide the rest of the block.
            for (std::size_t i = t + 1; i < rows && clean; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (w.a[i][j] % w.a[t][t] != 0) {
                        w.row_sub(t, i, -1);
                        clean = false;
                        break;
                    }
                }
            }
        }
        if (w.a[t][t] < 0) w.negate_row(t);
        ++t;
    }
    SmithForm s;
    s.rows = rows;
    s.cols = cols;
    s.u = std::move(w.u);
    s.v = std::move(w.v);
    s.d = std::move(w.a);
    for (std::size_t i = 0; i < std::min(rows, cols); ++i) {
        if (s.d[i][i] != 0) s.invariant_factors.push_back(s.d[i][i]);
    }
    return s;
}

bool verify_smith(const IntMatrix& a, const SmithForm& s) {
    if (!is_unimodular(s.u) || !is_unimodular(s.v)) return false;
    const IntMatrix uav = int_multiply(int_multiply(s.u, a, s.rows), s.v, s.cols);
    if (uav != s.d) return false;
    for (std::size_t i = 0; i < s.rows; ++i) {
        for (std::size_t j = 0; j < s.cols; ++j) {
            if (i != j && s.d[i][j] != 0) return false;
        }
    }
    for (std::size_t k = 0; k < s.invariant_factors.size(); ++k) {
        if (s.invariant_factors[k] <= 0 || s.d[k][k] != s.invariant_factors[k]) return false;
        if (k > 0 && s.invariant_factors[k] % s.invariant_factors[k - 1] != 0) return false;
    }
    return true;
}

}  // namespace ballsym

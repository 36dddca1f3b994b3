#include "ballsym/matrix.hpp"

#include <numeric>

namespace ballsym {

CycloMatrix to_cyclo_matrix(const RadMatrix& m) {
    std::int64_t L = 1;
    for (const auto& x : m.data()) L = std::lcm(L, x.embedding_order());
    std::vector<CycloScalar> data;
    data.reserve(m.data().size());
    for (const auto& x : m.data()) data.push_back(x.to_cyclotomic().lift(L));
    return CycloMatrix(m.rows(), m.cols(), std::move(data));
}

RadMatrix to_rad_matrix(const CycloMatrix& m) {
    std::vector<RadScalar> data(m.data().begin(), m.data().end());
    return RadMatrix(m.rows(), m.cols(), std::move(data));
}

FloatMatrix to_float_matrix(const RadMatrix& m, unsigned bits) {
    std::vector<FloatComplex> data;
    data.reserve(m.data().size());
    for (const auto& x : m.data()) data.push_back(x.to_float(bits));
    return FloatMatrix(m.rows(), m.cols(), std::move(data));
}

Echelon row_reduce(const RadMatrix& input) {
    Echelon e{input, {}};
    RadMatrix& a = e.reduced;
    for (auto& x : a.data()) x = x.canonical();
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t piv = row;
        while (piv < a.rows() && a(piv, col).empty()) ++piv;
        if (piv == a.rows()) continue;
        if (piv != row) {
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
        }
        const RadScalar inv = a(row, col).field_inverse();
        for (std::size_t j = col; j < a.cols(); ++j) {
            if (!a(row, j).empty()) a(row, j) = (a(row, j) * inv).canonical();
        }
        a(row, col) = RadScalar(1);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col).empty()) continue;
            const RadScalar f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) {
                if (!a(row, j).empty()) a(i, j) = (a(i, j) - f * a(row, j)).canonical();
            }
            a(i, col) = RadScalar();
        }
        e.pivots.push_back(col);
        ++row;
    }
    return e;
}

std::size_t rank(const RadMatrix& m) { return row_reduce(m).pivots.size(); }

std::vector<std::vector<RadScalar>> nullspace(const RadMatrix& m) {
    const Echelon e = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<std::vector<RadScalar>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<RadScalar> v(m.cols());
        v[free] = RadScalar(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<RadMatrix> solve(const RadMatrix& a, const RadMatrix& b) {
    if (a.rows() != b.rows()) throw DimensionMismatch("solve: row counts differ");
    RadMatrix aug(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
    }
    const Echelon e = row_reduce(aug);
    for (auto p : e.pivots) {
        if (p >= a.cols()) return std::nullopt;
    }
    RadMatrix x(a.cols(), b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
    }
    return x;
}

RadMatrix inverse(const RadMatrix& m) {
    if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    const auto x = solve(m, RadMatrix::identity(m.rows()));
    if (!x || rank(m) != m.rows()) throw DivisionByZero("matrix is singular");
    return *x;
}

bool is_unitary(const RadMatrix& u) {
    return u.is_square() && u.adjoint() * u == RadMatrix::identity(u.rows());
}

FloatMatrix inverse(const FloatMatrix& m, double eps) {
    if (!m.is_square()) throw DimensionMismatch("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    FloatMatrix a = m;
    FloatMatrix inv = FloatMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        Real best = a(col, col).abs();
        for (std::size_t i = col + 1; i < n; ++i) {
            Real v = a(i, col).abs();
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= eps) throw DivisionByZero("float matrix is numerically singular");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(piv, j), a(col, j));
            std::swap(inv(piv, j), inv(col, j));
        }
        const FloatComplex p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            const FloatComplex f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

double max_abs_diff(const FloatMatrix& a, const FloatMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shape mismatch");
    double worst = 0;
    for (std::size_t k = 0; k < a.data().size(); ++k) worst = std::max(worst, abs_diff(a.data()[k], b.data()[k]));
    return worst;
}

}  // namespace ballsym

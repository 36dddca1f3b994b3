#pragma once

#include "ballsym/errors.hpp"
#include "ballsym/scalar.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ballsym {

inline RadScalar conj_of(const RadScalar& x) { return x.conj(); }
inline CycloScalar conj_of(const CycloScalar& x) { return x.conj(); }
inline FloatComplex conj_of(const FloatComplex& x) { return x.conj(); }

template <class T>
T zero_of() {
    return T{};
}
template <>
inline FloatComplex zero_of<FloatComplex>() {
    return FloatComplex(Real(0), Real(0), kDefaultPrecisionBits);
}
template <class T>
T one_of() {
    return T(mpq_class(1));
}
template <>
inline FloatComplex one_of<FloatComplex>() {
    return FloatComplex(Real(1), Real(0), kDefaultPrecisionBits);
}

/// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, zero_of<T>()) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw DimensionMismatch("matrix data size does not match shape");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one_of<T>();
        return m;
    }
    static Matrix diagonal(const std::vector<T>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> v;
        v.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v.push_back((*this)(i, j));
        return v;
    }

    /// Conjugate transpose.
    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj_of((*this)(i, j));
        }
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shape mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (is_structural_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (is_structural_zero(b(k, j))) continue;
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    friend Matrix operator*(const T& s, Matrix m) {
        for (auto& x : m.data_) x = s * x;
        return m;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw DimensionMismatch("matrix-vector shape mismatch");
        std::vector<T> out(rows_, zero_of<T>());
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        }
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t k = 0; k < a.data_.size(); ++k) {
            if (!(a.data_[k] == b.data_[k])) return false;
        }
        return true;
    }

private:
    static bool is_structural_zero(const RadScalar& x) { return x.empty(); }
    static bool is_structural_zero(const CycloScalar& x) { return x.is_zero(); }
    static bool is_structural_zero(const FloatComplex&) { return false; }

    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RadMatrix = Matrix<RadScalar>;
using CycloMatrix = Matrix<CycloScalar>;
using FloatMatrix = Matrix<FloatComplex>;

/// Every entry embedded into one cyclotomic field (lcm of the embedding orders).
CycloMatrix to_cyclo_matrix(const RadMatrix& m);
RadMatrix to_rad_matrix(const CycloMatrix& m);
FloatMatrix to_float_matrix(const RadMatrix& m, unsigned bits = kDefaultPrecisionBits);

struct Echelon {
    RadMatrix reduced;                 // reduced row echelon form, entries in canonical form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
};

/// Exact reduced row echelon form; pivots chosen left to right, first nonzero
/// row in each column.
Echelon row_reduce(const RadMatrix& m);
std::size_t rank(const RadMatrix& m);
/// Column vectors spanning the right kernel.
std::vector<std::vector<RadScalar>> nullspace(const RadMatrix& m);
/// Throws DivisionByZero if singular.
RadMatrix inverse(const RadMatrix& m);
/// Solution X of A X = B; nullopt when inconsistent (A need not be square;
/// free variables are set to zero).
std::optional<RadMatrix> solve(const RadMatrix& a, const RadMatrix& b);

/// True iff U* U = I exactly.
bool is_unitary(const RadMatrix& u);

/// Partial-pivot Gaussian elimination in floating point; throws
/// DivisionByZero when a pivot falls below `eps`.
FloatMatrix inverse(const FloatMatrix& m, double eps = 1e-30);
double max_abs_diff(const FloatMatrix& a, const FloatMatrix& b);

}  // namespace ballsym

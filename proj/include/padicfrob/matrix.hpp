#pragma once

#include "padicfrob/padic.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicfrob {

/// Dense row-major matrix over a commutative coefficient type.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: entry count does not match shape");
    }

    static Matrix identity(std::size_t n, const T& one, const T& zero = T()) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& entries() const { return data_; }
    std::vector<T>& entries() { return data_; }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    template <typename S>
    Matrix& scale(const S& s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: inner dimensions differ");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    if (is_zero(b(k, j))) continue;
                    c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    bool is_zero_matrix() const {
        for (const auto& x : data_) {
            if (!is_zero(x)) return false;
        }
        return true;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    static bool is_zero(const T& x) { return zero_test(x); }

private:
    void require_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }

    static bool zero_test(const mpq_class& x) { return x == 0; }
    static bool zero_test(const ApproxPadic& x) { return x.is_exact() && x.approx() == 0; }
    template <typename U>
    static bool zero_test(const U& x) {
        return x.is_zero();
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<mpq_class>;
using ApproxMatrix = Matrix<ApproxPadic>;

RationalMatrix rational_identity(std::size_t n);
RationalMatrix rational_matrix(std::size_t rows, std::size_t cols, std::initializer_list<long> entries);
RationalMatrix scaled(RationalMatrix m, const mpq_class& s);

/// Entrywise embedding into exact ApproxPadic values.
ApproxMatrix to_approx(const PrimeContext& ctx, const RationalMatrix& m);
/// The rational approximations, dropping error bounds.
RationalMatrix approx_part(const ApproxMatrix& m);

/// Nilpotency index: smallest k with m^k = 0, or 0 when m is not nilpotent.
std::size_t nilpotency_index(const RationalMatrix& m);
/// Rank over Q by fraction-producing elimination.
std::size_t rank(const RationalMatrix& m);
/// Determinant by elimination over Q.
mpq_class determinant(const RationalMatrix& m);

/// Minimum of entry valuations; +inf for the zero matrix.
ExtRational matrix_min_val(const PrimeContext& ctx, const RationalMatrix& m);

/// Certified minimum valuation of an approximate matrix.
///
/// Indeterminate entries only have the lower bound err_val; the minimum is certified when
/// every such bound lies strictly above the smallest certified entry valuation.
CertifiedVal matrix_min_val(const PrimeContext& ctx, const ApproxMatrix& m);

std::string to_string(const RationalMatrix& m);

/// Coefficients M_0..M_N of a truncated matrix power series in one variable.
template <typename T>
struct MatrixSeries {
    std::string variable = "q";
    std::vector<Matrix<T>> coeffs;

    std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
    std::size_t dim() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
};

using RationalMatrixSeries = MatrixSeries<mpq_class>;
using ApproxMatrixSeries = MatrixSeries<ApproxPadic>;

}  // namespace padicfrob

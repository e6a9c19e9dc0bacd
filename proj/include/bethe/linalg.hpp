/*
   Copyright 2026 The bethe-xxx Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef BETHE_LINALG_HPP
#define BETHE_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scalar.hpp"

namespace bethe {

/// Dense row-major matrix over an exact or floating scalar.
template <class S>
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, scalar<S>(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar<S>(1);
        return m;
    }
    static Matrix from_columns(const std::vector<std::vector<S>>& cols, std::size_t rows) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    S& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const S& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    std::vector<S> column(std::size_t j) const {
        std::vector<S> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    bool is_zero(double eps = kDefaultEps) const {
        return std::all_of(a_.begin(), a_.end(), [eps](const S& x) { return bethe::is_zero(x, eps); });
    }
    /// Largest entry magnitude.
    double max_abs() const {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, magnitude(x));
        return m;
    }

    template <class T>
    Matrix<T> cast() const {
        Matrix<T> m(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = lift<T>((*this)(i, j));
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(const S& s) {
        for (auto& x : a_) x *= s;
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const S& s) { return a *= s; }
    friend Matrix operator*(const S& s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& aik = a(i, k);
                if (bethe::is_zero(aik, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }
    friend std::vector<S> operator*(const Matrix& a, const std::vector<S>& v) {
        if (a.cols_ != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
        std::vector<S> r(a.rows_, scalar<S>(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) r[i] += a(i, k) * v[k];
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

   private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<S> a_;
};

template <class S>
struct scalar_of<Matrix<S>> {
    using type = S;
};

template <class S>
Matrix<S> commutator(const Matrix<S>& a, const Matrix<S>& b) {
    return a * b - b * a;
}

template <class S>
double norm2(const std::vector<S>& v) {
    double s = 0.0;
    for (const auto& x : v) s += magnitude(x) * magnitude(x);
    return std::sqrt(s);
}

/// Reduced row echelon form in place, pivoting only in the first
/// `pivot_cols` columns (all columns by default). Floating mode pivots on the
/// largest magnitude and treats |x| <= eps as zero. Returns the pivot columns.
template <class S>
std::vector<std::size_t> rref(Matrix<S>& m, double eps = kDefaultEps, std::size_t pivot_cols = static_cast<std::size_t>(-1)) {
    pivot_cols = std::min(pivot_cols, m.cols());
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < pivot_cols && row < m.rows(); ++col) {
        std::size_t best = m.rows();
        double best_mag = 0.0;
        for (std::size_t i = row; i < m.rows(); ++i) {
            if (is_zero(m(i, col), eps)) continue;
            if constexpr (ScalarTraits<S>::exact) {
                best = i;
                break;
            } else {
                double mag = magnitude(m(i, col));
                if (mag > best_mag) best = i, best_mag = mag;
            }
        }
        if (best == m.rows()) continue;
        if (best != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(row, j));
        const S inv = scalar<S>(1) / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || is_zero(m(i, col), 0.0)) continue;
            const S f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class S>
std::size_t rank(Matrix<S> m, double eps = kDefaultEps) {
    return rref(m, eps).size();
}

/// Basis of the right null space, one vector per free column.
template <class S>
std::vector<std::vector<S>> nullspace(Matrix<S> m, double eps = kDefaultEps) {
    auto pivots = rref(m, eps);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<S> v(m.cols(), scalar<S>(0));
        v[free] = scalar<S>(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Result of an elimination solve: the solution, the rank of the coefficient
/// matrix and the residual norm ||A X - B||.
template <class S>
struct SolveResult {
    Matrix<S> x;
    std::size_t rank = 0;
    double residual = 0.0;
};

/// Solves A X = B by elimination when A has full column rank (A may be tall).
/// Returns nullopt when A is rank deficient, or, in exact mode, when the
/// system is inconsistent. Floating callers judge consistency by `residual`.
template <class S>
std::optional<SolveResult<S>> solve(const Matrix<S>& a, const Matrix<S>& b, double eps = kDefaultEps) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
    Matrix<S> aug(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
    }
    auto pivots = rref(aug, eps, a.cols());
    if (pivots.size() != a.cols()) return std::nullopt;
    if constexpr (ScalarTraits<S>::exact) {
        for (std::size_t i = a.cols(); i < a.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!is_zero(aug(i, a.cols() + j))) return std::nullopt;
    }
    SolveResult<S> out{Matrix<S>(a.cols(), b.cols()), pivots.size(), 0.0};
    for (std::size_t r = 0; r < a.cols(); ++r)
        for (std::size_t j = 0; j < b.cols(); ++j) out.x(r, j) = aug(r, a.cols() + j);
    out.residual = (a * out.x - b).max_abs();
    return out;
}

/// Single right-hand side convenience wrapper around solve().
template <class S>
std::optional<std::vector<S>> solve_vector(const Matrix<S>& a, const std::vector<S>& b, double eps = kDefaultEps,
                                           double* residual = nullptr) {
    Matrix<S> rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    auto r = solve(a, rhs, eps);
    if (!r) return std::nullopt;
    if (residual) *residual = r->residual;
    return r->x.column(0);
}

}  // namespace bethe

#endif  // BETHE_LINALG_HPP

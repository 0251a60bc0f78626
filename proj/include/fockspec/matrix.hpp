#ifndef FOCKSPEC_MATRIX_HPP
#define FOCKSPEC_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "fockspec/rational.hpp"

namespace fockspec {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    RationalMatrix(std::initializer_list<std::initializer_list<Rational>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }
    const Rational& operator()(std::size_t r, std::size_t c) const {
        assert(r < rows_ && c < cols_);
        return data_[r * cols_ + c];
    }

    std::vector<Rational> column(std::size_t c) const {
        std::vector<Rational> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
        return out;
    }

    Rational trace() const {
        Rational t = 0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    bool is_upper_triangular() const {
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < std::min(r, cols_); ++c)
                if ((*this)(r, c) != 0) return false;
        return true;
    }

    friend bool operator==(const RationalMatrix& x, const RationalMatrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
    }

    friend RationalMatrix operator*(const RationalMatrix& x, const RationalMatrix& y) {
        if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch");
        RationalMatrix out(x.rows_, y.cols_);
        for (std::size_t i = 0; i < x.rows_; ++i)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0) continue;
                for (std::size_t j = 0; j < y.cols_; ++j) out(i, j) += x(i, k) * y(k, j);
            }
        return out;
    }

    friend std::vector<Rational> operator*(const RationalMatrix& m, const std::vector<Rational>& v) {
        if (m.cols_ != v.size()) throw std::invalid_argument("matrix/vector shape mismatch");
        std::vector<Rational> out(m.rows_);
        for (std::size_t i = 0; i < m.rows_; ++i)
            for (std::size_t k = 0; k < m.cols_; ++k) out[i] += m(i, k) * v[k];
        return out;
    }

    friend RationalMatrix operator-(const RationalMatrix& x, const RationalMatrix& y) {
        if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("matrix shape mismatch");
        RationalMatrix out = x;
        for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= y.data_[i];
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
        Rational inv = 1 / m(row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            Rational f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

/// Basis of the right nullspace. Each vector is scaled so its last nonzero entry is 1.
inline std::vector<std::vector<Rational>> nullspace(RationalMatrix m) {
    auto pivots = row_reduce(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(m.cols());
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
        std::size_t last = v.size();
        while (last > 0 && v[last - 1] == 0) --last;
        Rational scale = 1 / v[last - 1];
        for (auto& x : v) x *= scale;
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Exact inverse; throws std::domain_error when singular.
inline RationalMatrix inverse(const RationalMatrix& m) {
    if (!m.square()) throw std::invalid_argument("inverse of non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    auto pivots = row_reduce(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
    RationalMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
    return out;
}

}  // namespace fockspec

#endif  // FOCKSPEC_MATRIX_HPP

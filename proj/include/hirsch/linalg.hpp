#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hirsch {

using Scalar = mpq_class;
using Vector = std::vector<Scalar>;

inline std::string to_string(const Scalar& q) { return q.get_str(); }

inline bool is_zero(std::span<const Scalar> v) {
    return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

// Dense row-major matrix over Q.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_columns(std::size_t rows, const std::vector<Vector>& cols) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static Matrix from_rows(std::size_t cols, const std::vector<Vector>& rows) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<Scalar> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const Scalar> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    Vector column(std::size_t j) const {
        Vector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    bool is_zero() const { return hirsch::is_zero(data_); }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Scalar& aik = a(i, k);
            if (sgn(aik) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

inline Vector operator*(const Matrix& a, std::span<const Scalar> v) {
    if (a.cols() != v.size()) throw std::invalid_argument("matrix-vector product: shape mismatch");
    Vector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (sgn(v[j]) != 0) out[i] += a(i, j) * v[j];
    return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference: shape mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

namespace detail {

// Pivot heuristic: smallest denominator, then smallest numerator magnitude.
inline bool better_pivot(const Scalar& cand, const Scalar& best) {
    int c = cmp(cand.get_den(), best.get_den());
    if (c != 0) return c < 0;
    return mpz_cmpabs(cand.get_num_mpz_t(), best.get_num_mpz_t()) < 0;
}

}  // namespace detail

// Reduced row echelon form in place. Returns pivot columns, one per nonzero row.
// If `companion` is given, the same row operations are applied to it.
inline std::vector<std::size_t> rref(Matrix& m, Matrix* companion = nullptr) {
    if (companion && companion->rows() != m.rows()) throw std::invalid_argument("rref: companion row mismatch");
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::optional<std::size_t> best;
        for (std::size_t i = r; i < m.rows(); ++i) {
            if (sgn(m(i, c)) == 0) continue;
            if (!best || detail::better_pivot(m(i, c), m(*best, c))) best = i;
        }
        if (!best) continue;
        m.swap_rows(r, *best);
        if (companion) companion->swap_rows(r, *best);

        const Scalar inv = 1 / m(r, c);
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
        if (companion)
            for (std::size_t j = 0; j < companion->cols(); ++j) (*companion)(r, j) *= inv;

        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || sgn(m(i, c)) == 0) continue;
            const Scalar f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j)
                if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
            if (companion)
                for (std::size_t j = 0; j < companion->cols(); ++j)
                    if (sgn((*companion)(r, j)) != 0) (*companion)(i, j) -= f * (*companion)(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Rank by fraction-free (Bareiss) elimination on the row-wise denominator-cleared integer matrix.
inline std::size_t rank(const Matrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;
    std::vector<mpz_class> a(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) a[i * cols + j] = m(i, j).get_num() * (l / m(i, j).get_den());
    }
    auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * cols + j]; };

    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::optional<std::size_t> best;
        for (std::size_t i = r; i < rows; ++i) {
            if (sgn(at(i, c)) == 0) continue;
            if (!best || mpz_cmpabs(at(i, c).get_mpz_t(), at(*best, c).get_mpz_t()) < 0) best = i;
        }
        if (!best) continue;
        if (*best != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(at(r, j), at(*best, j));
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                at(i, j) = at(r, c) * at(i, j) - at(i, c) * at(r, j);
                mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), prev.get_mpz_t());
            }
            at(i, c) = 0;
        }
        prev = at(r, c);
        ++r;
    }
    return r;
}

// Basis of {x : m x = 0}; one vector per free column, with a 1 in that column.
inline std::vector<Vector> nullspace(const Matrix& m) {
    Matrix r = m;
    const auto pivots = rref(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Vector> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vector v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Reduced echelon basis of the span of the given vectors (all of length n).
inline std::vector<Vector> span_basis(std::size_t n, const std::vector<Vector>& vectors) {
    Matrix m = Matrix::from_rows(n, vectors);
    const auto pivots = rref(m);
    std::vector<Vector> out;
    for (std::size_t i = 0; i < pivots.size(); ++i) out.emplace_back(m.row(i).begin(), m.row(i).end());
    return out;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    Matrix a = m;
    Matrix inv = Matrix::identity(m.rows());
    const auto pivots = rref(a, &inv);
    if (pivots.size() != m.rows()) return std::nullopt;
    return inv;
}

// Solves A x = b for a fixed A by caching its row reduction.
class LinearSolver {
public:
    LinearSolver() = default;
    explicit LinearSolver(const Matrix& a) : reduced_(a), transform_(Matrix::identity(a.rows())) {
        pivots_ = rref(reduced_, &transform_);
    }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t unknowns() const { return reduced_.cols(); }
    std::size_t equations() const { return reduced_.rows(); }

    // Some solution (free variables set to zero), or nullopt if b is not in the column span.
    std::optional<Vector> solve(std::span<const Scalar> b) const {
        if (b.size() != equations()) throw std::invalid_argument("solve: right-hand side length mismatch");
        const Vector w = transform_ * b;
        for (std::size_t i = pivots_.size(); i < w.size(); ++i)
            if (sgn(w[i]) != 0) return std::nullopt;
        Vector x(unknowns());
        for (std::size_t i = 0; i < pivots_.size(); ++i) x[pivots_[i]] = w[i];
        return x;
    }

private:
    Matrix reduced_;
    Matrix transform_;
    std::vector<std::size_t> pivots_;
};

}  // namespace hirsch

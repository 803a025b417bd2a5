#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qrep/scalar.hpp"

namespace qrep {

// Dense row-major matrix over an exact field scalar.
template <class S>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(size_t rows, size_t cols, std::vector<S> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: data size mismatch");
    }

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = S(1);
        return m;
    }
    static Matrix zero(size_t rows, size_t cols) { return Matrix(rows, cols); }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    S& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const S& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }
    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        for (size_t i = 0; i < data_.size(); ++i)
            if (data_[i] != o.data_[i]) return false;
        return true;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }
    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = -data_[i];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
        Matrix r(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                const S& a = at(i, k);
                if (a.is_zero()) continue;
                for (size_t j = 0; j < o.cols_; ++j) {
                    const S& b = o.at(k, j);
                    if (!b.is_zero()) r.at(i, j) += a * b;
                }
            }
        return r;
    }
    Matrix scaled(const S& c) const {
        Matrix r(rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] * c;
        return r;
    }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    Matrix block(size_t i0, size_t j0, size_t r, size_t c) const {
        if (i0 + r > rows_ || j0 + c > cols_)
            throw std::invalid_argument("Matrix: block out of range");
        Matrix b(r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j) b.at(i, j) = at(i0 + i, j0 + j);
        return b;
    }
    void set_block(size_t i0, size_t j0, const Matrix& b) {
        if (i0 + b.rows_ > rows_ || j0 + b.cols_ > cols_)
            throw std::invalid_argument("Matrix: block out of range");
        for (size_t i = 0; i < b.rows_; ++i)
            for (size_t j = 0; j < b.cols_; ++j) at(i0 + i, j0 + j) = b.at(i, j);
    }
    Matrix col(size_t j) const { return block(0, j, rows_, 1); }
    Matrix row(size_t i) const { return block(i, 0, 1, cols_); }
    Matrix cols_selected(const std::vector<size_t>& idx) const {
        Matrix r(rows_, idx.size());
        for (size_t j = 0; j < idx.size(); ++j)
            for (size_t i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[j]);
        return r;
    }

    const std::vector<S>& data() const { return data_; }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
    }
    size_t rows_, cols_;
    std::vector<S> data_;
};

template <class S>
Matrix<S> hstack(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("hstack: row mismatch");
    Matrix<S> r(a.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(0, a.cols(), b);
    return r;
}

template <class S>
Matrix<S> vstack(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
    Matrix<S> r(a.rows() + b.rows(), a.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), 0, b);
    return r;
}

template <class S>
Matrix<S> kron(const Matrix<S>& a, const Matrix<S>& b) {
    Matrix<S> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a.at(i, j).is_zero()) continue;
            for (size_t k = 0; k < b.rows(); ++k)
                for (size_t l = 0; l < b.cols(); ++l)
                    r.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
        }
    return r;
}

template <class S>
struct Rref {
    Matrix<S> mat;
    std::vector<size_t> pivots;  // pivot column per pivot row, increasing
    size_t rank = 0;
};

// Reduced row echelon form; pivot row chosen as the first row (from the
// current one down) with a nonzero entry in the scanned column.
template <class S>
Rref<S> rref(Matrix<S> a) {
    Rref<S> r;
    size_t row = 0;
    for (size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        size_t pr = row;
        while (pr < a.rows() && a.at(pr, col).is_zero()) ++pr;
        if (pr == a.rows()) continue;
        if (pr != row)
            for (size_t j = 0; j < a.cols(); ++j) std::swap(a.at(row, j), a.at(pr, j));
        S piv = a.at(row, col).inv();
        for (size_t j = col; j < a.cols(); ++j)
            if (!a.at(row, j).is_zero()) a.at(row, j) = a.at(row, j) * piv;
        for (size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a.at(i, col).is_zero()) continue;
            S f = a.at(i, col);
            for (size_t j = col; j < a.cols(); ++j)
                if (!a.at(row, j).is_zero()) a.at(i, j) = a.at(i, j) - f * a.at(row, j);
        }
        r.pivots.push_back(col);
        ++row;
    }
    r.rank = row;
    r.mat = std::move(a);
    return r;
}

template <class S>
size_t rank(const Matrix<S>& a) { return rref(a).rank; }

// Columns form a basis of the right kernel, one per free column, with the
// free coordinate set to 1. Free columns are listed in increasing order.
template <class S>
Matrix<S> kernel_basis(const Matrix<S>& a) {
    size_t n = a.cols();
    Rref<S> r = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (size_t p : r.pivots) is_pivot[p] = true;
    std::vector<size_t> free_cols;
    for (size_t j = 0; j < n; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    Matrix<S> k(n, free_cols.size());
    for (size_t f = 0; f < free_cols.size(); ++f) {
        k.at(free_cols[f], f) = S(1);
        for (size_t i = 0; i < r.rank; ++i)
            k.at(r.pivots[i], f) = -r.mat.at(i, free_cols[f]);
    }
    return k;
}

// Particular solution of A X = B with free variables set to 0.
template <class S>
std::optional<Matrix<S>> solve(const Matrix<S>& a, const Matrix<S>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
    Rref<S> r = rref(hstack(a, b));
    Matrix<S> x(a.cols(), b.cols());
    for (size_t i = 0; i < r.rank; ++i) {
        if (r.pivots[i] >= a.cols()) return std::nullopt;  // inconsistent row
        for (size_t j = 0; j < b.cols(); ++j)
            x.at(r.pivots[i], j) = r.mat.at(i, a.cols() + j);
    }
    return x;
}

template <class S>
std::optional<Matrix<S>> inverse(const Matrix<S>& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    Rref<S> r = rref(hstack(a, Matrix<S>::identity(a.rows())));
    if (r.rank < a.rows() || (r.rank > 0 && r.pivots[a.rows() - 1] >= a.cols()))
        return std::nullopt;
    for (size_t i = 0; i < r.rank && i < a.cols(); ++i)
        if (r.pivots[i] != i) return std::nullopt;
    return r.mat.block(0, a.cols(), a.rows(), a.cols());
}

template <class S>
bool is_invertible(const Matrix<S>& a) {
    return a.rows() == a.cols() && rank(a) == a.rows();
}

// Standard basis vectors extending the column space of A to the whole
// target, chosen greedily in index order; returns their indices.
template <class S>
std::vector<size_t> image_complement(const Matrix<S>& a) {
    Rref<S> r = rref(hstack(a, Matrix<S>::identity(a.rows())));
    std::vector<size_t> idx;
    for (size_t p : r.pivots)
        if (p >= a.cols()) idx.push_back(p - a.cols());
    return idx;
}

// Pivot columns of A, as a basis of the column space.
template <class S>
Matrix<S> column_space_basis(const Matrix<S>& a) {
    Rref<S> r = rref(a);
    return a.cols_selected(r.pivots);
}

template <class S>
S trace(const Matrix<S>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("trace: not square");
    S t(0);
    for (size_t i = 0; i < a.rows(); ++i) t += a.at(i, i);
    return t;
}

// Coefficients of det(xI - A), ascending degree, monic.
template <class S>
std::vector<S> charpoly(Matrix<S> h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("charpoly: not square");
    size_t n = h.rows();
    // Similarity reduction to upper Hessenberg form.
    for (size_t m = 0; m + 2 < n; ++m) {
        size_t pr = m + 1;
        while (pr < n && h.at(pr, m).is_zero()) ++pr;
        if (pr == n) continue;
        if (pr != m + 1) {
            for (size_t j = 0; j < n; ++j) std::swap(h.at(m + 1, j), h.at(pr, j));
            for (size_t i = 0; i < n; ++i) std::swap(h.at(i, m + 1), h.at(i, pr));
        }
        S piv = h.at(m + 1, m).inv();
        for (size_t i = m + 2; i < n; ++i) {
            if (h.at(i, m).is_zero()) continue;
            S t = h.at(i, m) * piv;
            for (size_t j = m; j < n; ++j) h.at(i, j) = h.at(i, j) - t * h.at(m + 1, j);
            for (size_t k = 0; k < n; ++k) h.at(k, m + 1) = h.at(k, m + 1) + t * h.at(k, i);
        }
    }
    // Characteristic polynomials of leading principal blocks.
    std::vector<std::vector<S>> p(n + 1);
    p[0] = {S(1)};
    for (size_t m = 1; m <= n; ++m) {
        std::vector<S> q(m + 1, S(0));
        const auto& prev = p[m - 1];
        for (size_t d = 0; d < prev.size(); ++d) {
            q[d + 1] += prev[d];
            q[d] -= h.at(m - 1, m - 1) * prev[d];
        }
        S t(1);
        for (size_t i = 1; i < m; ++i) {
            t *= h.at(m - i, m - i - 1);
            if (t.is_zero()) break;
            S c = h.at(m - i - 1, m - 1) * t;
            if (c.is_zero()) continue;
            const auto& pi = p[m - i - 1];
            for (size_t d = 0; d < pi.size(); ++d) q[d] -= c * pi[d];
        }
        p[m] = std::move(q);
    }
    return p[n];
}

template <class S>
std::string to_string(const Matrix<S>& a) {
    std::string s;
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) {
            if (j) s += ' ';
            s += a.at(i, j).str();
        }
        s += '\n';
    }
    return s;
}

}  // namespace qrep

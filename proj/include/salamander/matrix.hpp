#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"

namespace salamander {

// Dense row-major matrix. Vectors are rows; a map A -> B is stored with
// shape dim(B) x dim(A) and acts on column vectors.
template <class F>
class Matrix {
public:
    using field_type = F;
    using value_type = typename F::value_type;

    Matrix() = default;
    Matrix(const F& f, std::size_t rows, std::size_t cols)
        : f_(f), rows_(rows), cols_(cols), data_(rows * cols, f.zero()) {}

    static Matrix zero(const F& f, std::size_t rows, std::size_t cols) { return Matrix(f, rows, cols); }
    static Matrix identity(const F& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = f.one();
        return m;
    }
    static Matrix from_ints(const F& f, const std::vector<std::vector<long long>>& rows, std::size_t cols = 0) {
        std::size_t c = rows.empty() ? cols : rows.front().size();
        Matrix m(f, rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != c) throw Error("ragged matrix literal");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = f.from_int(rows[i][j]);
        }
        return m;
    }

    const F& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<value_type>& data() const { return data_; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!f_.is_zero(x)) return false;
        return true;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_)
            throw Error("matrix product shape mismatch: " + shape() + " * " + o.shape());
        Matrix r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const auto& a = (*this)(i, k);
                if (f_.is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = f_.add(r(i, j), f_.mul(a, o(k, j)));
            }
        return r;
    }
    Matrix operator+(const Matrix& o) const {
        need_same_shape(o);
        Matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = f_.add(data_[k], o.data_[k]);
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        need_same_shape(o);
        Matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = f_.sub(data_[k], o.data_[k]);
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& x : r.data_) x = f_.neg(x);
        return r;
    }
    Matrix scaled(const value_type& s) const {
        Matrix r = *this;
        for (auto& x : r.data_) x = f_.mul(x, s);
        return r;
    }

    Matrix transpose() const {
        Matrix r(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix row(std::size_t i) const { return block(i, 0, 1, cols_); }
    Matrix block(std::size_t i, std::size_t j, std::size_t nr, std::size_t nc) const {
        Matrix r(f_, nr, nc);
        for (std::size_t a = 0; a < nr; ++a)
            for (std::size_t b = 0; b < nc; ++b) r(a, b) = (*this)(i + a, j + b);
        return r;
    }
    void set_block(std::size_t i, std::size_t j, const Matrix& m) {
        for (std::size_t a = 0; a < m.rows(); ++a)
            for (std::size_t b = 0; b < m.cols(); ++b) (*this)(i + a, j + b) = m(a, b);
    }
    Matrix select_rows(const std::vector<std::size_t>& idx) const {
        Matrix r(f_, idx.size(), cols_);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < cols_; ++b) r(a, b) = (*this)(idx[a], b);
        return r;
    }
    Matrix select_cols(const std::vector<std::size_t>& idx) const {
        Matrix r(f_, rows_, idx.size());
        for (std::size_t a = 0; a < rows_; ++a)
            for (std::size_t b = 0; b < idx.size(); ++b) r(a, b) = (*this)(a, idx[b]);
        return r;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) s += ";";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) s += ",";
                s += f_.to_string((*this)(i, j));
            }
        }
        return s + "]";
    }

private:
    void need_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw Error("matrix shape mismatch: " + shape() + " vs " + o.shape());
    }

    F f_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<value_type> data_;
};

template <class F>
Matrix<F> vstack(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.cols() != b.cols()) throw Error("vstack column mismatch");
    Matrix<F> r(a.field(), a.rows() + b.rows(), a.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), 0, b);
    return r;
}

template <class F>
Matrix<F> hstack(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) throw Error("hstack row mismatch");
    Matrix<F> r(a.field(), a.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(0, a.cols(), b);
    return r;
}

template <class F>
Matrix<F> direct_sum(const Matrix<F>& a, const Matrix<F>& b) {
    Matrix<F> r(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    r.set_block(0, 0, a);
    r.set_block(a.rows(), a.cols(), b);
    return r;
}

template <class F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
    const F& f = a.field();
    Matrix<F> r(f, a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (f.is_zero(a(i, j))) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = f.mul(a(i, j), b(k, l));
        }
    return r;
}

template <class F>
struct RrefResult {
    Matrix<F> matrix;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

template <class F>
RrefResult<F> rref(Matrix<F> m) {
    const F& f = m.field();
    RrefResult<F> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && f.is_zero(m(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(row, j));
        auto s = f.inv(m(row, col));
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) = f.mul(m(row, j), s);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || f.is_zero(m(i, col))) continue;
            auto t = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(t, m(row, j)));
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.rank = row;
    out.matrix = std::move(m);
    return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
    return rref(m).rank;
}

// Inverse of a square matrix; throws NotInvertible when singular.
template <class F>
Matrix<F> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw NotInvertible("non-square matrix " + m.shape());
    std::size_t n = m.rows();
    auto r = rref(hstack(m, Matrix<F>::identity(m.field(), n)));
    if (r.rank < n || (n > 0 && r.pivots[n - 1] != n - 1)) throw NotInvertible("singular matrix");
    return r.matrix.block(0, n, n, n);
}

}  // namespace salamander

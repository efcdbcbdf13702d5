#pragma once

// Dense exact matrices over a field S (Q(i) or rational functions), with
// fraction-free (Bareiss) elimination for rank, kernel, solve and inverse.

#include <string>
#include <utility>
#include <vector>

#include "focklab/errors.hpp"
#include "focklab/rational.hpp"

namespace focklab {

template <class S>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, S(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t k = 0; k < n; ++k) m(k, k) = S(1);
        return m;
    }

    static Matrix column(const std::vector<S>& v) {
        Matrix m(v.size(), 1);
        for (std::size_t k = 0; k < v.size(); ++k) m(k, 0) = v[k];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    S& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const S& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!focklab::is_zero(x)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Matrix conj() const {
        Matrix t(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) t.data_[k] = focklab::conj(data_[k]);
        return t;
    }

    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix b(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
    }

    S trace() const {
        S t(0);
        for (std::size_t k = 0; k < std::min(rows_, cols_); ++k) t += (*this)(k, k);
        return t;
    }

    std::vector<S> column_vector(std::size_t c) const {
        std::vector<S> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator-(Matrix a) {
        for (auto& x : a.data_) x = -x;
        return a;
    }
    friend Matrix operator*(const S& s, Matrix a) {
        for (auto& x : a.data_) x = s * x;
        return a;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
        Matrix p(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const S& x = a(r, k);
                if (focklab::is_zero(x)) continue;
                for (std::size_t c = 0; c < b.cols_; ++c) p(r, c) += x * b(k, c);
            }
        return p;
    }
    friend std::vector<S> operator*(const Matrix& a, const std::vector<S>& v) {
        if (a.cols_ != v.size()) throw DimensionMismatch("matrix-vector product");
        std::vector<S> out(a.rows_, S(0));
        for (std::size_t r = 0; r < a.rows_; ++r)
            for (std::size_t c = 0; c < a.cols_; ++c)
                if (!focklab::is_zero(v[c])) out[r] += a(r, c) * v[c];
        return out;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    void check_same(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<S> data_;
};

template <class S>
struct Echelon {
    Matrix<S> form;                    // row echelon form (fraction-free)
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
    S last_pivot{1};                   // determinant up to sign for square input
    int swaps = 0;
};

/// Bareiss elimination; entries of later rows stay polynomial in the input
/// entries, which keeps growth in check for Q(i) and rational functions.
template <class S>
Echelon<S> bareiss_echelon(Matrix<S> m) {
    Echelon<S> out;
    S prev(1);
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && is_zero(m(p, col))) ++p;
        if (p == m.rows()) continue;
        if (p != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
            ++out.swaps;
        }
        const S piv = m(row, col);
        for (std::size_t r = row + 1; r < m.rows(); ++r) {
            const S f = m(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) {
                S v = piv * m(r, c) - f * m(row, c);
                m(r, c) = v / prev;
            }
        }
        prev = piv;
        out.pivots.push_back(col);
        ++row;
    }
    out.last_pivot = prev;
    out.form = std::move(m);
    return out;
}

template <class S>
std::size_t rank(const Matrix<S>& m) {
    return bareiss_echelon(m).pivots.size();
}

template <class S>
S determinant(const Matrix<S>& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
    if (m.rows() == 0) return S(1);
    auto e = bareiss_echelon(m);
    if (e.pivots.size() < m.rows()) return S(0);
    S d = e.form(m.rows() - 1, m.cols() - 1);
    return e.swaps % 2 ? -d : d;
}

/// Basis of {x : m x = 0}; every vector is checked by exact re-multiplication.
template <class S>
std::vector<std::vector<S>> kernel_basis(const Matrix<S>& m) {
    auto e = bareiss_echelon(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::vector<std::vector<S>> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<S> x(n, S(0));
        x[f] = S(1);
        for (std::size_t k = e.pivots.size(); k-- > 0;) {
            const std::size_t pc = e.pivots[k];
            S acc(0);
            for (std::size_t c = pc + 1; c < n; ++c)
                if (!is_zero(x[c])) acc += e.form(k, c) * x[c];
            x[pc] = -acc / e.form(k, pc);
        }
        basis.push_back(std::move(x));
    }
    for (const auto& v : basis)
        for (const auto& y : m * v)
            if (!is_zero(y)) throw std::logic_error("kernel vector failed back-substitution check");
    return basis;
}

/// One solution of m x = b; throws Inconsistent when none exists.
template <class S>
std::vector<S> solve_linear(const Matrix<S>& m, const std::vector<S>& b) {
    if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length");
    Matrix<S> aug(m.rows(), m.cols() + 1);
    aug.set_block(0, 0, m);
    for (std::size_t r = 0; r < m.rows(); ++r) aug(r, m.cols()) = b[r];
    auto e = bareiss_echelon(aug);
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) throw Inconsistent("linear system has no solution");
    std::vector<S> x(m.cols(), S(0));
    for (std::size_t k = e.pivots.size(); k-- > 0;) {
        const std::size_t pc = e.pivots[k];
        S acc = e.form(k, m.cols());
        for (std::size_t c = pc + 1; c < m.cols(); ++c)
            if (!is_zero(x[c])) acc -= e.form(k, c) * x[c];
        x[pc] = acc / e.form(k, pc);
    }
    auto check = m * x;
    for (std::size_t r = 0; r < b.size(); ++r)
        if (check[r] != b[r]) throw std::logic_error("solution failed back-substitution check");
    return x;
}

template <class S>
Matrix<S> inverse(const Matrix<S>& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw DimensionMismatch("inverse of non-square matrix");
    Matrix<S> inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<S> e(n, S(0));
        e[c] = S(1);
        std::vector<S> x;
        try {
            x = solve_linear(m, e);
        } catch (const Inconsistent&) {
            throw NotInvertible("singular matrix");
        }
        if (rank(m) < n) throw NotInvertible("singular matrix");
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = x[r];
    }
    return inv;
}

template <class S>
bool is_symmetric(const Matrix<S>& m) {
    return m == m.transpose();
}

/// Leading principal minors of a Hermitian matrix, all real and > 0.
inline bool is_positive_definite(const Matrix<GaussianRational>& h) {
    if (h != h.transpose().conj()) return false;
    for (std::size_t k = 1; k <= h.rows(); ++k) {
        GaussianRational d = determinant(h.block(0, 0, k, k));
        if (!d.is_real() || sgn(d.re()) <= 0) return false;
    }
    return true;
}

template <class S>
std::string to_string(const Matrix<S>& m) {
    std::string out = "[";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out += r ? ", [" : "[";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out += ", ";
            out += to_string(m(r, c));
        }
        out += "]";
    }
    return out + "]";
}

}  // namespace focklab

#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "c2seq/mpoly.hpp"
#include "c2seq/rat.hpp"
#include "c2seq/ratfunc.hpp"

namespace c2seq {

template <class R>
struct ring_traits {
    static constexpr bool is_field = true;
    static R exact_div(const R& a, const R& b) { return a / b; }
};

template <>
struct ring_traits<MPoly> {
    static constexpr bool is_field = false;
    static MPoly exact_div(const MPoly& a, const MPoly& b) {
        auto q = a.divided_exactly_by(b);
        if (!q) throw std::logic_error("ring: inexact polynomial division");
        return *q;
    }
};

/// Dense matrix over one exact coefficient domain (Rat, MPoly or RatFunc).
template <class R>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, R(0)) {}

    static Matrix identity(size_t n) {
        Matrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = R(1);
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    R& operator()(size_t i, size_t j) { return data_[i * cols_ + j]; }
    const R& operator()(size_t i, size_t j) const { return data_[i * cols_ + j]; }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                const R& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (size_t j = 0; j < b.cols_; ++j) {
                    const R& bkj = b(k, j);
                    if (!bkj.is_zero()) c(i, j) += aik * bkj;
                }
            }
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
        Matrix c = a;
        for (size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
        return c;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("Matrix: shape mismatch");
        Matrix c = a;
        for (size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }

    Matrix scaled(const R& c) const {
        Matrix m = *this;
        for (auto& x : m.data_) x *= c;
        return m;
    }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

private:
    size_t rows_, cols_;
    std::vector<R> data_;
};

template <class R>
Matrix<R> mat_pow(Matrix<R> base, unsigned long e) {
    if (!base.is_square()) throw std::invalid_argument("mat_pow: non-square matrix");
    Matrix<R> acc = Matrix<R>::identity(base.rows());
    while (e > 0) {
        if (e & 1) acc = acc * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return acc;
}

namespace detail {

template <class R>
R det_cofactor(const Matrix<R>& a) {
    size_t n = a.rows();
    if (n == 0) return R(1);
    if (n == 1) return a(0, 0);
    if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    R acc(0);
    for (size_t j = 0; j < n; ++j) {
        if (a(0, j).is_zero()) continue;
        Matrix<R> minor(n - 1, n - 1);
        for (size_t i = 1; i < n; ++i) {
            size_t cc = 0;
            for (size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(i - 1, cc++) = a(i, c);
            }
        }
        R term = a(0, j) * det_cofactor(minor);
        if (j % 2)
            acc -= term;
        else
            acc += term;
    }
    return acc;
}

template <class R>
R det_bareiss(Matrix<R> m) {
    size_t n = m.rows();
    R sign(1), prev(1);
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k).is_zero()) {
            size_t p = k + 1;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return R(0);
            for (size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                R num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = ring_traits<R>::exact_div(num, prev);
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

}  // namespace detail

/// Exact determinant over any of the supported domains.
template <class R>
R mat_det(const Matrix<R>& a) {
    if (!a.is_square()) throw std::invalid_argument("mat_det: non-square matrix");
    if (a.rows() <= 4) return detail::det_cofactor(a);
    return detail::det_bareiss(a);
}

/// Adjugate (transposed cofactor matrix): A * adj(A) = det(A) * I.
template <class R>
Matrix<R> mat_adjugate(const Matrix<R>& a) {
    if (!a.is_square()) throw std::invalid_argument("mat_adjugate: non-square matrix");
    size_t n = a.rows();
    if (n == 0) return a;
    if (n == 1) {
        Matrix<R> m(1, 1);
        m(0, 0) = R(1);
        return m;
    }
    Matrix<R> adj(n, n);
    Matrix<R> minor(n - 1, n - 1);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            size_t rr = 0;
            for (size_t r = 0; r < n; ++r) {
                if (r == i) continue;
                size_t cc = 0;
                for (size_t c = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor(rr, cc++) = a(r, c);
                }
                ++rr;
            }
            R d = mat_det(minor);
            adj(j, i) = ((i + j) % 2) ? -d : d;
        }
    return adj;
}

/// Monic characteristic polynomial coefficients e_0..e_r of a square matrix
/// over a field, via exact Hessenberg reduction.
template <class R>
std::vector<R> char_poly(const Matrix<R>& a) {
    static_assert(ring_traits<R>::is_field, "char_poly needs a field domain");
    if (!a.is_square()) throw std::invalid_argument("char_poly: non-square matrix");
    size_t n = a.rows();
    Matrix<R> h = a;
    for (size_t k = 0; k + 2 < n; ++k) {
        size_t p = k + 1;
        while (p < n && h(p, k).is_zero()) ++p;
        if (p == n) continue;
        if (p != k + 1) {
            for (size_t j = 0; j < n; ++j) std::swap(h(p, j), h(k + 1, j));
            for (size_t i = 0; i < n; ++i) std::swap(h(i, p), h(i, k + 1));
        }
        for (size_t i = k + 2; i < n; ++i) {
            if (h(i, k).is_zero()) continue;
            R mlt = h(i, k) / h(k + 1, k);
            for (size_t j = 0; j < n; ++j) h(i, j) -= mlt * h(k + 1, j);
            for (size_t r = 0; r < n; ++r) h(r, k + 1) += mlt * h(r, i);
        }
    }
    // det(lambda*I - H_m) for leading principal blocks of the Hessenberg form.
    std::vector<std::vector<R>> p(n + 1);
    p[0] = {R(1)};
    for (size_t m = 1; m <= n; ++m) {
        std::vector<R> cur(m + 1, R(0));
        // (lambda - h[m-1][m-1]) * p[m-1]
        for (size_t t = 0; t < p[m - 1].size(); ++t) {
            cur[t + 1] += p[m - 1][t];
            cur[t] -= h(m - 1, m - 1) * p[m - 1][t];
        }
        R chain(1);
        for (size_t i = m - 1; i-- > 0;) {
            chain *= h(i + 1, i);
            if (chain.is_zero()) break;
            R f = h(i, m - 1) * chain;
            if (f.is_zero()) continue;
            for (size_t t = 0; t < p[i].size(); ++t) cur[t] -= f * p[i][t];
        }
        p[m] = std::move(cur);
    }
    return p[n];
}

/// Reduced row echelon form in place; returns the pivot columns.
template <class R>
std::vector<size_t> rref(Matrix<R>& m) {
    static_assert(ring_traits<R>::is_field);
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        size_t p = row;
        while (p < m.rows() && m(p, col).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != row)
            for (size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
        R inv = R(1) / m(row, col);
        for (size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            R f = m(i, col);
            for (size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class R>
size_t mat_rank(Matrix<R> m) {
    return rref(m).size();
}

/// One exact solution of A x = b (free variables set to 0), or nullopt when
/// the system is inconsistent.
template <class R>
std::optional<std::vector<R>> solve_linear(const Matrix<R>& a, const std::vector<R>& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_linear: shape mismatch");
    Matrix<R> aug(a.rows(), a.cols() + 1);
    for (size_t i = 0; i < a.rows(); ++i) {
        for (size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
    std::vector<R> x(a.cols(), R(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, a.cols());
    return x;
}

/// Fraction-free Gauss-Jordan (Bareiss) solve of a square system: returns
/// (det, det * x) with A x = b, using only ring multiplications and exact
/// divisions; nullopt when A is singular. Avoids the normalization cost of
/// field elimination on large exact values.
template <class R>
std::optional<std::pair<R, std::vector<R>>> bareiss_jordan_solve(const Matrix<R>& a,
                                                                 const std::vector<R>& b) {
    size_t n = a.rows();
    if (!a.is_square() || b.size() != n)
        throw std::invalid_argument("bareiss_jordan_solve: shape mismatch");
    if (n == 0) return std::make_pair(R(1), std::vector<R>{});
    Matrix<R> m(n, n + 1);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m(i, j) = a(i, j);
        m(i, n) = b[i];
    }
    R sign(1), prev(1);
    for (size_t k = 0; k < n; ++k) {
        if (m(k, k).is_zero()) {
            size_t p = k + 1;
            while (p < n && m(p, k).is_zero()) ++p;
            if (p == n) return std::nullopt;
            for (size_t j = 0; j <= n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            for (size_t j = 0; j <= n; ++j) {
                if (j == k) continue;
                R num = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                m(i, j) = ring_traits<R>::exact_div(num, prev);
            }
            m(i, k) = R(0);
        }
        prev = m(k, k);
    }
    // After full Jordan elimination row i holds m(i,i) * x_i = m(i,n); the
    // last diagonal entry is the (unsigned) determinant.
    R det = sign * m(n - 1, n - 1);
    std::vector<R> y(n);
    for (size_t i = 0; i < n; ++i) {
        if (m(i, i) == m(n - 1, n - 1))
            y[i] = sign * m(i, n);
        else
            y[i] = sign * ring_traits<R>::exact_div(m(i, n) * m(n - 1, n - 1), m(i, i));
    }
    return std::make_pair(det, std::move(y));
}

/// Basis of the right nullspace of A.
template <class R>
std::vector<std::vector<R>> nullspace(Matrix<R> a) {
    size_t n = a.cols();
    auto pivots = rref(a);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<std::vector<R>> basis;
    for (size_t free = 0; free < n; ++free) {
        if (is_pivot[free]) continue;
        std::vector<R> v(n, R(0));
        v[free] = R(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Kronecker product.
template <class R>
Matrix<R> kron(const Matrix<R>& a, const Matrix<R>& b) {
    Matrix<R> k(a.rows() * b.rows(), a.cols() * b.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j).is_zero()) continue;
            for (size_t p = 0; p < b.rows(); ++p)
                for (size_t q = 0; q < b.cols(); ++q)
                    k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        }
    return k;
}

/// Characteristic polynomial of a polynomial matrix, computed in the
/// fraction field; coefficients clear back to polynomials.
inline std::vector<MPoly> char_poly(const Matrix<MPoly>& a) {
    Matrix<RatFunc> f(a.rows(), a.cols());
    for (size_t i = 0; i < a.rows(); ++i)
        for (size_t j = 0; j < a.cols(); ++j) f(i, j) = RatFunc(a(i, j));
    auto cf = char_poly(f);
    std::vector<MPoly> out;
    out.reserve(cf.size());
    for (const auto& c : cf) out.push_back(c.as_poly());
    return out;
}

}  // namespace c2seq

#pragma once

#include <map>
#include <utility>

#include "c2seq/cfinite.hpp"

namespace c2seq {

/// Matrix whose entries are C-finite sequences over one shared domain.
/// Evaluation at an index yields a plain Matrix<R>.
template <class R>
class CFMatrixSeq {
public:
    CFMatrixSeq() : rows_(0), cols_(0) {}
    CFMatrixSeq(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, CFiniteSeq<R>::zero()) {}

    static CFMatrixSeq constant(const Matrix<R>& m) {
        CFMatrixSeq s(m.rows(), m.cols());
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j)
                s.entry(i, j) = CFiniteSeq<R>::constant(m(i, j));
        return s;
    }

    /// M^{c n + d} when c n + d >= 0, the zero matrix otherwise. Entries
    /// share the order-r recurrence given by char_poly(M^c) (Cayley-Hamilton).
    static CFMatrixSeq const_power(const Matrix<R>& m, long c, long d) {
        if (c < 1) throw std::invalid_argument("const_power_seq: c must be >= 1");
        if (!m.is_square()) throw std::invalid_argument("const_power_seq: non-square matrix");
        size_t r = m.rows();
        auto e = char_poly(mat_pow(m, (unsigned long)c));
        size_t v = d >= 0 ? 0 : size_t((-d + c - 1) / c);
        std::vector<Matrix<R>> init;
        for (size_t n = 0; n < v + r; ++n) {
            long ex = c * long(n) + d;
            init.push_back(ex >= 0 ? mat_pow(m, (unsigned long)ex) : Matrix<R>(r, r));
        }
        CFMatrixSeq s(r, r);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < r; ++j) {
                std::vector<R> ei;
                ei.reserve(init.size());
                for (const auto& mat : init) ei.push_back(mat(i, j));
                s.entry(i, j) = CFiniteSeq<R>::from_char_poly(e, std::move(ei), v);
            }
        return s;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    CFiniteSeq<R>& entry(size_t i, size_t j) { return entries_[i * cols_ + j]; }
    const CFiniteSeq<R>& entry(size_t i, size_t j) const { return entries_[i * cols_ + j]; }

    /// Entrywise evaluation at index n.
    Matrix<R> at(size_t n) const {
        Matrix<R> m(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) m(i, j) = entry(i, j).term(n);
        return m;
    }

    CFMatrixSeq transpose() const {
        CFMatrixSeq t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) t.entry(j, i) = entry(i, j);
        return t;
    }

    CFMatrixSeq subseq(size_t t, size_t r) const {
        CFMatrixSeq s(rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) s.entry(i, j) = entry(i, j).subseq(t, r);
        return s;
    }

    CFMatrixSeq shifted(size_t k) const { return subseq(1, k); }

    /// Entrywise closure-algebra product, each entry minimized.
    CFMatrixSeq mul(const CFMatrixSeq& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("cfm_mul: shape mismatch");
        CFMatrixSeq c(rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < o.cols_; ++j) {
                CFiniteSeq<R> acc = CFiniteSeq<R>::zero();
                for (size_t k = 0; k < cols_; ++k)
                    acc = acc.add(entry(i, k).mul(o.entry(k, j)));
                c.entry(i, j) = acc.minimize();
            }
        return c;
    }

    /// Determinant sequence and adjugate sequence: A_n adj_n = det_n I,
    /// built by cofactor expansion inside the closure algebra.
    std::pair<CFiniteSeq<R>, CFMatrixSeq> det_adjugate() const {
        if (!is_square()) throw std::invalid_argument("cfm_det_adjugate: non-square matrix");
        std::map<std::pair<uint64_t, uint64_t>, CFiniteSeq<R>> memo;
        CFiniteSeq<R> det = minor_det(full_mask(rows_), full_mask(cols_), memo).minimize();
        CFMatrixSeq adj(rows_, cols_);
        if (rows_ == 0) return {CFiniteSeq<R>::constant(R(1)), adj};
        if (rows_ == 1) {
            adj.entry(0, 0) = CFiniteSeq<R>::constant(R(1));
            return {det, adj};
        }
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) {
                auto d = minor_det(full_mask(rows_) & ~(uint64_t(1) << j),
                                   full_mask(cols_) & ~(uint64_t(1) << i), memo);
                adj.entry(i, j) = ((i + j) % 2 ? d.negated() : d).minimize();
            }
        return {det, adj};
    }

    /// Inverse of the re-indexed sequence A_{p n + i + n1}, represented as
    /// an (adjugate, determinant) pair; the determinant must be nonzero on
    /// each checked index.
    std::pair<CFMatrixSeq, CFiniteSeq<R>> inverse_on_residue(size_t p, size_t i, size_t n1,
                                                             size_t check_horizon = 32) const {
        if (p < 1 || i >= p)
            throw std::invalid_argument("cfm_inverse_on_residue: residue out of range");
        CFMatrixSeq b = subseq(p, i + n1);
        auto [det, adj] = b.det_adjugate();
        for (size_t n = 0; n < check_horizon; ++n)
            if (det.term(n).is_zero())
                throw certification_error(
                    "cfm_inverse_on_residue: determinant vanishes at re-indexed n=" +
                    std::to_string(n));
        return {adj, det};
    }

private:
    size_t rows_, cols_;
    std::vector<CFiniteSeq<R>> entries_;

    static uint64_t full_mask(size_t n) { return n >= 64 ? ~uint64_t(0) : (uint64_t(1) << n) - 1; }

    CFiniteSeq<R> minor_det(uint64_t rowmask, uint64_t colmask,
                            std::map<std::pair<uint64_t, uint64_t>, CFiniteSeq<R>>& memo) const {
        if (rowmask == 0) return CFiniteSeq<R>::constant(R(1));
        auto key = std::make_pair(rowmask, colmask);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        size_t row = 0;
        while (!(rowmask & (uint64_t(1) << row))) ++row;
        uint64_t rrest = rowmask & ~(uint64_t(1) << row);
        CFiniteSeq<R> acc = CFiniteSeq<R>::zero();
        size_t parity = 0;
        for (size_t col = 0; col < cols_; ++col) {
            if (!(colmask & (uint64_t(1) << col))) continue;
            const auto& e = entry(row, col);
            if (!e.is_zero()) {
                auto sub = minor_det(rrest, colmask & ~(uint64_t(1) << col), memo);
                auto term = e.mul(sub);
                acc = acc.add(parity % 2 ? term.negated() : term);
            }
            ++parity;
        }
        acc = acc.minimize();
        memo.emplace(key, acc);
        return acc;
    }
};

}  // namespace c2seq

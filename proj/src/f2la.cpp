#include "kh/f2la.hpp"

#include <bit>

namespace kh {

void BitVec::xor_with(const BitVec& other) {
    if (other.size_ != size_) throw InputError("BitVec::xor_with: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
}

bool BitVec::is_zero() const {
    for (std::uint64_t w : words_)
        if (w) return false;
    return true;
}

std::size_t BitVec::first_set() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i]) return (i << 6) + std::countr_zero(words_[i]);
    return size_;
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitVec BitMatrix::row(std::size_t r) const {
    BitVec v(cols_);
    for (std::size_t w = 0; w < row_words_; ++w)
        v.words()[w] = words_[r * row_words_ + w];
    return v;
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
    for (std::size_t w = 0; w < row_words_; ++w)
        words_[dst * row_words_ + w] ^= words_[src * row_words_ + w];
}

void BitMatrix::xor_vec_into_row(const BitVec& v, std::size_t dst) {
    if (v.size() != cols_) throw InputError("xor_vec_into_row: size mismatch");
    for (std::size_t w = 0; w < row_words_; ++w)
        words_[dst * row_words_ + w] ^= v.words()[w];
}

BitVec BitMatrix::multiply(const BitVec& x) const {
    if (x.size() != cols_) throw InputError("BitMatrix::multiply: vector size mismatch");
    BitVec y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < row_words_; ++w)
            acc ^= words_[r * row_words_ + w] & x.words()[w];
        y.set(r, std::popcount(acc) & 1);
    }
    return y;
}

BitMatrix BitMatrix::multiply(const BitMatrix& b) const {
    if (cols_ != b.rows_) throw InputError("BitMatrix::multiply: dimension mismatch");
    // C = A*B computed row-wise: row_r(C) = XOR over set bits c of row_r(A) of row_c(B).
    BitMatrix c(rows_, b.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t w = 0; w < row_words_; ++w) {
            std::uint64_t bits = words_[r * row_words_ + w];
            while (bits) {
                const std::size_t k = (w << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                for (std::size_t bw = 0; bw < c.row_words_; ++bw)
                    c.words_[r * c.row_words_ + bw] ^= b.words_[k * b.row_words_ + bw];
            }
        }
    }
    return c;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t w = 0; w < row_words_; ++w) {
            std::uint64_t bits = words_[r * row_words_ + w];
            while (bits) {
                const std::size_t c = (w << 6) + std::countr_zero(bits);
                bits &= bits - 1;
                t.set(c, r, true);
            }
        }
    return t;
}

namespace {

// Row echelon form in place; returns pivot columns in increasing order.
// If reduce, clears above pivots as well (RREF).
std::vector<std::size_t> echelonize(BitMatrix& m, bool reduce) {
    std::vector<std::size_t> pivot_cols;
    std::size_t next_row = 0;
    for (std::size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        std::size_t pr = next_row;
        while (pr < m.rows() && !m.get(pr, c)) ++pr;
        if (pr == m.rows()) continue;
        if (pr != next_row) {
            // Swap via XOR to keep storage simple.
            m.xor_row_into(pr, next_row);
            m.xor_row_into(next_row, pr);
            m.xor_row_into(pr, next_row);
        }
        for (std::size_t r = reduce ? 0 : next_row + 1; r < m.rows(); ++r)
            if (r != next_row && m.get(r, c)) m.xor_row_into(next_row, r);
        pivot_cols.push_back(c);
        ++next_row;
    }
    return pivot_cols;
}

}  // namespace

std::size_t rank(const BitMatrix& a) {
    BitMatrix m = a;
    return echelonize(m, false).size();
}

std::vector<BitVec> kernel_basis(const BitMatrix& a) {
    BitMatrix m = a;
    const std::vector<std::size_t> pivots = echelonize(m, true);
    std::vector<bool> is_pivot(a.cols(), false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    std::vector<BitVec> basis;
    for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        BitVec v(a.cols());
        v.set(free_col, true);
        // Back-substitute: pivot row i has its pivot at pivots[i].
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (m.get(i, free_col)) v.set(pivots[i], true);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<BitVec> image_basis(const BitMatrix& a) {
    BitMatrix m = a;
    const std::vector<std::size_t> pivots = echelonize(m, false);
    std::vector<BitVec> basis;
    basis.reserve(pivots.size());
    const BitMatrix t = a.transpose();
    for (std::size_t c : pivots) basis.push_back(t.row(c));
    return basis;
}

std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b) {
    if (b.size() != a.rows()) throw InputError("solve: rhs size does not match rows");
    // Eliminate on the augmented matrix [A | b].
    BitMatrix m(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.get(r, c)) m.set(r, c, true);
        if (b.get(r)) m.set(r, a.cols(), true);
    }
    const std::vector<std::size_t> pivots = echelonize(m, true);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // 0 = 1 row
    BitVec x(a.cols());
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (m.get(i, a.cols())) x.set(pivots[i], true);
    return x;
}

bool Subspace::insert(BitVec v) {
    if (v.size() != ambient_) throw InputError("Subspace::insert: size mismatch");
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (v.get(pivots_[i])) v.xor_with(basis_[i]);
    const std::size_t p = v.first_set();
    if (p == ambient_) return false;
    // Keep the basis reduced and sorted by pivot.
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].get(p)) basis_[i].xor_with(v);
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
    basis_.insert(basis_.begin() + pos, std::move(v));
    pivots_.insert(pivots_.begin() + pos, p);
    return true;
}

bool Subspace::contains(BitVec v) const {
    if (v.size() != ambient_) throw InputError("Subspace::contains: size mismatch");
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (v.get(pivots_[i])) v.xor_with(basis_[i]);
    return v.is_zero();
}

}  // namespace kh

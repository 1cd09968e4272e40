// Dense linear algebra over GF(2) with 64-bit packed rows.
//
// Matrices act on column vectors: (A*x)[r] = XOR_c A(r,c)&x[c].
// All pivot searches scan for the first set bit in row-major order, so every
// operation is deterministic for a given input.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kh {

// Thrown for malformed caller input (dimension mismatches, bad files, ...).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation would exceed a configured resource cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Packed bit vector over GF(2).
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool v) {
        const std::uint64_t mask = std::uint64_t(1) << (i & 63);
        if (v) words_[i >> 6] |= mask; else words_[i >> 6] &= ~mask;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    void xor_with(const BitVec& other);
    bool is_zero() const;
    // Index of the first set bit, or size() if none.
    std::size_t first_set() const;

    bool operator==(const BitVec& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Dense GF(2) matrix, row-major packed.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), row_words_((cols + 63) / 64),
          words_(rows * row_words_, 0) {}

    static BitMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const {
        return (words_[r * row_words_ + (c >> 6)] >> (c & 63)) & 1u;
    }
    void set(std::size_t r, std::size_t c, bool v) {
        const std::uint64_t mask = std::uint64_t(1) << (c & 63);
        std::uint64_t& w = words_[r * row_words_ + (c >> 6)];
        if (v) w |= mask; else w &= ~mask;
    }
    void flip(std::size_t r, std::size_t c) {
        words_[r * row_words_ + (c >> 6)] ^= std::uint64_t(1) << (c & 63);
    }

    BitVec row(std::size_t r) const;
    void xor_row_into(std::size_t src, std::size_t dst);  // row[dst] ^= row[src]
    void xor_vec_into_row(const BitVec& v, std::size_t dst);

    BitVec multiply(const BitVec& x) const;        // A * x
    BitMatrix multiply(const BitMatrix& b) const;  // A * B
    BitMatrix transpose() const;

    bool operator==(const BitMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && words_ == other.words_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0, row_words_ = 0;
    std::vector<std::uint64_t> words_;
};

std::size_t rank(const BitMatrix& a);

// Basis of { x : A x = 0 }, one vector per free column, deterministic order.
std::vector<BitVec> kernel_basis(const BitMatrix& a);

// Basis of the column space { A x }, deterministic order (pivot columns of A
// in increasing column order).
std::vector<BitVec> image_basis(const BitMatrix& a);

// One solution of A x = b, or nullopt if inconsistent.
// Throws InputError if b.size() != a.rows().
std::optional<BitVec> solve(const BitMatrix& a, const BitVec& b);

// A subspace of GF(2)^ambient kept as a reduced echelon basis; supports
// incremental insertion and membership tests.
class Subspace {
public:
    explicit Subspace(std::size_t ambient) : ambient_(ambient) {}

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.size(); }

    // Returns true if v enlarged the subspace.
    bool insert(BitVec v);
    bool contains(BitVec v) const;
    const std::vector<BitVec>& basis() const { return basis_; }

private:
    std::size_t ambient_;
    std::vector<BitVec> basis_;        // echelon: basis_[i] pivots at pivots_[i]
    std::vector<std::size_t> pivots_;  // strictly increasing
};

}  // namespace kh

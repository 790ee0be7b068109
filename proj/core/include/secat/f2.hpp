#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace secat::f2 {

// Bit-packed vector over the two-element field. All arithmetic is mod 2.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    static BitVec unit(std::size_t n, std::size_t i);
    static BitVec from_bits(std::initializer_list<int> bits);
    static BitVec from_bits(const std::vector<int>& bits);

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    void set(std::size_t i, bool v);
    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t(1) << (i % 64); }

    BitVec& operator^=(const BitVec& o);
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }

    bool is_zero() const;
    // Index of the first set bit, or size() if zero.
    std::size_t leading() const;
    std::size_t popcount() const;

    bool operator==(const BitVec&) const = default;
    bool operator<(const BitVec& o) const;

    std::string to_string() const;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Dense matrix over F2, rows bit-packed.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows, BitVec(cols)) {}

    static BitMatrix identity(std::size_t n);
    static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return data_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v) { data_[r].set(c, v); }

    const BitVec& row(std::size_t r) const { return data_[r]; }
    void set_row(std::size_t r, const BitVec& v);
    BitVec col(std::size_t c) const;
    void set_col(std::size_t c, const BitVec& v);

    BitVec apply(const BitVec& v) const;  // matrix * vector
    BitMatrix operator*(const BitMatrix& o) const;
    BitMatrix operator+(const BitMatrix& o) const;
    BitMatrix transposed() const;

    bool is_zero() const;
    bool operator==(const BitMatrix&) const = default;

    std::string to_string() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVec> data_;
};

std::size_t rank(const BitMatrix& m);

// A subspace of F2^n held as a reduced-row-echelon basis with pivot columns
// ascending. The representation is unique, so operator== decides equality of
// subspaces.
struct Subspace {
    std::size_t ambient_dim = 0;
    std::vector<BitVec> basis;

    std::size_t dim() const { return basis.size(); }
    bool contains(const BitVec& v) const;
    bool operator==(const Subspace&) const = default;
};

Subspace span(std::size_t ambient_dim, const std::vector<BitVec>& gens);
Subspace kernel_basis(const BitMatrix& m);
Subspace image_basis(const BitMatrix& m);
Subspace sum(const Subspace& a, const Subspace& b);

struct SolveResult {
    std::optional<BitVec> solution;
    // When UNSAT, rank_a < rank_aug is the refutation witness.
    std::size_t rank_a = 0;
    std::size_t rank_aug = 0;
    bool sat() const { return solution.has_value(); }
};

// Any v with m*v = target, or UNSAT with the rank pair as witness.
SolveResult solve(const BitMatrix& m, const BitVec& target);

// Canonical representative of v + s; zero iff v lies in s.
BitVec coset_reduce(const Subspace& s, const BitVec& v);

// All 2^dim elements of a subspace (intended for small dims in tests/checks).
std::vector<BitVec> enumerate(const Subspace& s);

}  // namespace secat::f2

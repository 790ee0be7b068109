#include "secat/f2.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace secat::f2 {

BitVec BitVec::unit(std::size_t n, std::size_t i) {
    BitVec v(n);
    v.set(i, true);
    return v;
}

BitVec BitVec::from_bits(std::initializer_list<int> bits) {
    return from_bits(std::vector<int>(bits));
}

BitVec BitVec::from_bits(const std::vector<int>& bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        v.set(i, bits[i] % 2 != 0);
    return v;
}

void BitVec::set(std::size_t i, bool v) {
    if (v)
        words_[i / 64] |= std::uint64_t(1) << (i % 64);
    else
        words_[i / 64] &= ~(std::uint64_t(1) << (i % 64));
}

BitVec& BitVec::operator^=(const BitVec& o) {
    if (size_ != o.size_)
        throw std::invalid_argument("BitVec xor: size mismatch");
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] ^= o.words_[w];
    return *this;
}

bool BitVec::is_zero() const {
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::size_t BitVec::leading() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
        if (words_[w]) return w * 64 + std::countr_zero(words_[w]);
    return size_;
}

std::size_t BitVec::popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += std::popcount(w);
    return n;
}

bool BitVec::operator<(const BitVec& o) const {
    if (size_ != o.size_) return size_ < o.size_;
    for (std::size_t i = 0; i < size_; ++i) {
        bool a = get(i), b = o.get(i);
        if (a != b) return b;
    }
    return false;
}

std::string BitVec::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    BitMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c)
            throw std::invalid_argument("BitMatrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (int b : row) m.set(i, j++, b % 2 != 0);
        ++i;
    }
    return m;
}

void BitMatrix::set_row(std::size_t r, const BitVec& v) {
    if (v.size() != cols_)
        throw std::invalid_argument("set_row: size mismatch");
    data_[r] = v;
}

BitVec BitMatrix::col(std::size_t c) const {
    BitVec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.set(r, get(r, c));
    return v;
}

void BitMatrix::set_col(std::size_t c, const BitVec& v) {
    if (v.size() != rows_)
        throw std::invalid_argument("set_col: size mismatch");
    for (std::size_t r = 0; r < rows_; ++r) set(r, c, v.get(r));
}

BitVec BitMatrix::apply(const BitVec& v) const {
    if (v.size() != cols_)
        throw std::invalid_argument("apply: size mismatch");
    BitVec out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::size_t acc = 0;
        for (std::size_t c = 0; c < cols_; ++c)
            acc ^= (get(r, c) && v.get(c)) ? 1 : 0;
        out.set(r, acc & 1);
    }
    return out;
}

BitMatrix BitMatrix::operator*(const BitMatrix& o) const {
    if (cols_ != o.rows_)
        throw std::invalid_argument("matrix product: shape mismatch");
    BitMatrix out(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t k = 0; k < cols_; ++k)
            if (get(r, k)) out.data_[r] ^= o.data_[k];
    return out;
}

BitMatrix BitMatrix::operator+(const BitMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw std::invalid_argument("matrix sum: shape mismatch");
    BitMatrix out = *this;
    for (std::size_t r = 0; r < rows_; ++r) out.data_[r] ^= o.data_[r];
    return out;
}

BitMatrix BitMatrix::transposed() const {
    BitMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c)) out.set(c, r, true);
    return out;
}

bool BitMatrix::is_zero() const {
    for (const auto& row : data_)
        if (!row.is_zero()) return false;
    return true;
}

std::string BitMatrix::to_string() const {
    std::string s;
    for (std::size_t r = 0; r < rows_; ++r) {
        s += data_[r].to_string();
        if (r + 1 < rows_) s += '\n';
    }
    return s;
}

namespace {

// Reduced row echelon form of a list of row vectors; zero rows dropped,
// pivots ascending.
std::vector<BitVec> rref(std::vector<BitVec> rows) {
    std::vector<BitVec> out;
    for (auto& v : rows) {
        for (const auto& p : out) {
            std::size_t lead = p.leading();
            if (v.get(lead)) v ^= p;
        }
        if (v.is_zero()) continue;
        std::size_t lead = v.leading();
        for (auto& p : out)
            if (p.get(lead)) p ^= v;
        out.push_back(v);
    }
    std::sort(out.begin(), out.end(), [](const BitVec& a, const BitVec& b) {
        return a.leading() < b.leading();
    });
    return out;
}

}  // namespace

std::size_t rank(const BitMatrix& m) {
    std::vector<BitVec> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
    return rref(std::move(rows)).size();
}

bool Subspace::contains(const BitVec& v) const {
    return coset_reduce(*this, v).is_zero();
}

Subspace span(std::size_t ambient_dim, const std::vector<BitVec>& gens) {
    for (const auto& g : gens)
        if (g.size() != ambient_dim)
            throw std::invalid_argument("span: generator size mismatch");
    return Subspace{ambient_dim, rref(gens)};
}

Subspace kernel_basis(const BitMatrix& m) {
    // Row reduce the transpose alongside an identity to track combinations:
    // combinations of columns of m that vanish are kernel vectors.
    std::size_t n = m.cols();
    std::vector<BitVec> rows, track;
    for (std::size_t c = 0; c < n; ++c) {
        rows.push_back(m.col(c));
        track.push_back(BitVec::unit(n, c));
    }
    std::vector<std::pair<BitVec, BitVec>> pivots;
    std::vector<BitVec> kernel;
    for (std::size_t i = 0; i < n; ++i) {
        BitVec v = rows[i], t = track[i];
        for (const auto& [p, pt] : pivots) {
            if (v.get(p.leading())) {
                v ^= p;
                t ^= pt;
            }
        }
        if (v.is_zero()) {
            kernel.push_back(t);
        } else {
            for (auto& [p, pt] : pivots) {
                if (p.get(v.leading())) {
                    p ^= v;
                    pt ^= t;
                }
            }
            pivots.emplace_back(v, t);
        }
    }
    return span(n, kernel);
}

Subspace image_basis(const BitMatrix& m) {
    std::vector<BitVec> cols;
    for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.col(c));
    return span(m.rows(), cols);
}

Subspace sum(const Subspace& a, const Subspace& b) {
    if (a.ambient_dim != b.ambient_dim)
        throw std::invalid_argument("subspace sum: ambient mismatch");
    std::vector<BitVec> gens = a.basis;
    gens.insert(gens.end(), b.basis.begin(), b.basis.end());
    return span(a.ambient_dim, gens);
}

SolveResult solve(const BitMatrix& m, const BitVec& target) {
    if (target.size() != m.rows())
        throw std::invalid_argument("solve: target length must equal rows");
    std::size_t n = m.cols();
    // Gaussian elimination on [columns | target] tracking combinations.
    std::vector<std::pair<BitVec, BitVec>> pivots;  // (reduced column, combination)
    for (std::size_t c = 0; c < n; ++c) {
        BitVec v = m.col(c), t = BitVec::unit(n, c);
        for (const auto& [p, pt] : pivots) {
            if (v.get(p.leading())) {
                v ^= p;
                t ^= pt;
            }
        }
        if (!v.is_zero()) {
            for (auto& [p, pt] : pivots) {
                if (p.get(v.leading())) {
                    p ^= v;
                    pt ^= t;
                }
            }
            pivots.emplace_back(v, t);
        }
    }
    BitVec rhs = target, comb(n);
    for (const auto& [p, pt] : pivots) {
        if (rhs.get(p.leading())) {
            rhs ^= p;
            comb ^= pt;
        }
    }
    SolveResult res;
    res.rank_a = pivots.size();
    if (rhs.is_zero()) {
        res.rank_aug = pivots.size();
        res.solution = comb;
    } else {
        res.rank_aug = pivots.size() + 1;
    }
    return res;
}

BitVec coset_reduce(const Subspace& s, const BitVec& v) {
    if (v.size() != s.ambient_dim)
        throw std::invalid_argument("coset_reduce: dimension mismatch");
    BitVec out = v;
    for (const auto& b : s.basis)
        if (out.get(b.leading())) out ^= b;
    return out;
}

std::vector<BitVec> enumerate(const Subspace& s) {
    std::vector<BitVec> out{BitVec(s.ambient_dim)};
    for (const auto& b : s.basis) {
        std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] ^ b);
    }
    return out;
}

}  // namespace secat::f2

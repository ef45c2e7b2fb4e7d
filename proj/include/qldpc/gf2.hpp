#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qldpc/errors.hpp"

namespace qldpc {

namespace detail {
constexpr size_t kWordBits = 64;  // internal packing width; never leaks into formats
inline size_t words_for(size_t bits) { return (bits + kWordBits - 1) / kWordBits; }
inline uint64_t tail_mask(size_t bits) {
    size_t rem = bits % kWordBits;
    return rem == 0 ? ~0ull : ((1ull << rem) - 1);
}
}  // namespace detail

// Bit vector over GF(2). Trailing padding bits are kept at zero.
class BitVector {
  public:
    BitVector() = default;
    explicit BitVector(size_t len) : len_(len), words_(detail::words_for(len), 0) {}

    static BitVector from_string(const std::string& s) {
        BitVector v(s.size());
        for (size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                v.set(i, true);
            } else if (s[i] != '0') {
                throw ParseError("bit vector characters must be 0 or 1");
            }
        }
        return v;
    }

    size_t len() const { return len_; }
    bool get(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }
    void set(size_t i, bool b) {
        uint64_t mask = 1ull << (i % 64);
        if (b) {
            words_[i / 64] |= mask;
        } else {
            words_[i / 64] &= ~mask;
        }
    }
    void flip(size_t i) { words_[i / 64] ^= 1ull << (i % 64); }

    size_t weight() const {
        size_t w = 0;
        for (uint64_t word : words_) w += static_cast<size_t>(std::popcount(word));
        return w;
    }
    bool is_zero() const {
        for (uint64_t word : words_)
            if (word) return false;
        return true;
    }

    BitVector& operator^=(const BitVector& o) {
        if (o.len_ != len_) throw DimensionError("xor of bit vectors of unequal length");
        for (size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    // Parity of the overlap <a,b>.
    bool dot(const BitVector& o) const {
        if (o.len_ != len_) throw DimensionError("dot of bit vectors of unequal length");
        uint64_t acc = 0;
        for (size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & o.words_[i];
        return std::popcount(acc) & 1;
    }

    bool operator==(const BitVector& o) const { return len_ == o.len_ && words_ == o.words_; }
    bool operator!=(const BitVector& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string s(len_, '0');
        for (size_t i = 0; i < len_; ++i)
            if (get(i)) s[i] = '1';
        return s;
    }

    const std::vector<uint64_t>& words() const { return words_; }
    std::vector<uint64_t>& words() { return words_; }

  private:
    size_t len_ = 0;
    std::vector<uint64_t> words_;
};

// Dense bit-packed matrix over GF(2), row major. The single canonical storage
// for every binary matrix in the toolkit; sparse index views are derived from
// it on demand.
class BitMatrix {
  public:
    BitMatrix() = default;
    BitMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), wpr_(detail::words_for(cols)), words_(rows * wpr_, 0) {}

    static BitMatrix identity(size_t n) {
        BitMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }
    static BitMatrix zeros(size_t rows, size_t cols) { return BitMatrix(rows, cols); }

    // result[i][j] = 1 iff j == i + shift (mod size)
    static BitMatrix circulant(size_t shift, size_t size) {
        if (shift >= size) throw DomainError("circulant shift must satisfy 0 <= shift < size");
        BitMatrix m(size, size);
        for (size_t i = 0; i < size; ++i) m.set(i, (i + shift) % size, true);
        return m;
    }

    static BitMatrix from_rows(const std::vector<std::string>& rows, size_t cols_hint = 0) {
        size_t cols = rows.empty() ? cols_hint : rows[0].size();
        BitMatrix m(rows.size(), cols);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw ParseError("ragged rows in matrix literal");
            for (size_t j = 0; j < cols; ++j) {
                if (rows[i][j] == '1') {
                    m.set(i, j, true);
                } else if (rows[i][j] != '0') {
                    throw ParseError("matrix characters must be 0 or 1");
                }
            }
        }
        return m;
    }

    // Text format: first line "rows cols", then one 0/1 row per line.
    // Row digits may be contiguous or whitespace separated; a '|' separator
    // is ignored so side-by-side (H_X | H_Z) layouts parse directly.
    static BitMatrix from_text(const std::string& text) {
        std::istringstream in(text);
        long long rows = -1, cols = -1;
        if (!(in >> rows >> cols) || rows < 0 || cols < 0)
            throw ParseError("matrix text must start with 'rows cols'");
        BitMatrix m(static_cast<size_t>(rows), static_cast<size_t>(cols));
        for (long long i = 0; i < rows; ++i) {
            long long j = 0;
            while (j < cols) {
                char c;
                if (!(in >> c)) throw ParseError("matrix text ended early");
                if (c == '|') continue;
                if (c == '0' || c == '1') {
                    m.set(static_cast<size_t>(i), static_cast<size_t>(j), c == '1');
                    ++j;
                } else {
                    throw ParseError(std::string("unexpected character in matrix text: ") + c);
                }
            }
        }
        return m;
    }

    std::string to_text() const {
        std::ostringstream out;
        out << rows_ << ' ' << cols_ << '\n';
        for (size_t i = 0; i < rows_; ++i) {
            for (size_t j = 0; j < cols_; ++j) out << (get(i, j) ? '1' : '0');
            out << '\n';
        }
        return out.str();
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    bool get(size_t i, size_t j) const { return (word(i, j / 64) >> (j % 64)) & 1; }
    void set(size_t i, size_t j, bool b) {
        uint64_t mask = 1ull << (j % 64);
        if (b) {
            word(i, j / 64) |= mask;
        } else {
            word(i, j / 64) &= ~mask;
        }
    }

    bool is_zero() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }
    bool operator==(const BitMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && words_ == o.words_;
    }
    bool operator!=(const BitMatrix& o) const { return !(*this == o); }

    BitVector row(size_t i) const {
        BitVector v(cols_);
        for (size_t w = 0; w < wpr_; ++w) v.words()[w] = word(i, w);
        return v;
    }
    void set_row(size_t i, const BitVector& v) {
        if (v.len() != cols_) throw DimensionError("row length mismatch");
        for (size_t w = 0; w < wpr_; ++w) word(i, w) = v.words()[w];
    }
    void xor_row_into(size_t src, size_t dst) {
        uint64_t* d = &words_[dst * wpr_];
        const uint64_t* s = &words_[src * wpr_];
        for (size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }
    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        for (size_t w = 0; w < wpr_; ++w) std::swap(word(a, w), word(b, w));
    }
    size_t row_weight(size_t i) const {
        size_t acc = 0;
        for (size_t w = 0; w < wpr_; ++w) acc += static_cast<size_t>(std::popcount(word(i, w)));
        return acc;
    }

    // s = m . v^T, one bit per row.
    BitVector mul_vec(const BitVector& v) const {
        if (v.len() != cols_) throw DimensionError("matrix-vector dimension mismatch");
        BitVector s(rows_);
        for (size_t i = 0; i < rows_; ++i) {
            uint64_t acc = 0;
            const uint64_t* r = &words_[i * wpr_];
            for (size_t w = 0; w < wpr_; ++w) acc ^= r[w] & v.words()[w];
            if (std::popcount(acc) & 1) s.set(i, true);
        }
        return s;
    }

    BitMatrix transpose() const {
        BitMatrix t(cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t w = 0; w < wpr_; ++w) {
                uint64_t bits = word(i, w);
                while (bits) {
                    size_t j = w * 64 + static_cast<size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    t.set(j, i, true);
                }
            }
        return t;
    }

    friend BitMatrix matmul(const BitMatrix& a, const BitMatrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matmul inner dimension mismatch");
        BitMatrix r(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i) {
            uint64_t* out = &r.words_[i * r.wpr_];
            for (size_t w = 0; w < a.wpr_; ++w) {
                uint64_t bits = a.word(i, w);
                while (bits) {
                    size_t k = w * 64 + static_cast<size_t>(std::countr_zero(bits));
                    bits &= bits - 1;
                    const uint64_t* brow = &b.words_[k * b.wpr_];
                    for (size_t t = 0; t < b.wpr_; ++t) out[t] ^= brow[t];
                }
            }
        }
        return r;
    }
    friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) { return matmul(a, b); }

    friend BitMatrix kron(const BitMatrix& a, const BitMatrix& b) {
        constexpr size_t kMaxDim = size_t{1} << 31;
        if (a.rows_ != 0 && b.rows_ != 0 && (a.rows_ > kMaxDim / b.rows_))
            throw CapacityError("kron row count overflow");
        if (a.cols_ != 0 && b.cols_ != 0 && (a.cols_ > kMaxDim / b.cols_))
            throw CapacityError("kron column count overflow");
        BitMatrix r(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (size_t ia = 0; ia < a.rows_; ++ia)
            for (size_t ja = 0; ja < a.cols_; ++ja) {
                if (!a.get(ia, ja)) continue;
                for (size_t ib = 0; ib < b.rows_; ++ib)
                    for (size_t jb = 0; jb < b.cols_; ++jb)
                        if (b.get(ib, jb)) r.set(ia * b.rows_ + ib, ja * b.cols_ + jb, true);
            }
        return r;
    }

    friend BitMatrix operator^(const BitMatrix& a, const BitMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError("xor of matrices of unequal shape");
        BitMatrix r(a.rows_, a.cols_);
        for (size_t w = 0; w < a.words_.size(); ++w) r.words_[w] = a.words_[w] ^ b.words_[w];
        return r;
    }

    friend BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
        if (a.rows_ != b.rows_) throw DimensionError("hstack row count mismatch");
        BitMatrix r(a.rows_, a.cols_ + b.cols_);
        for (size_t i = 0; i < a.rows_; ++i) {
            for (size_t j = 0; j < a.cols_; ++j)
                if (a.get(i, j)) r.set(i, j, true);
            for (size_t j = 0; j < b.cols_; ++j)
                if (b.get(i, j)) r.set(i, a.cols_ + j, true);
        }
        return r;
    }
    friend BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
        if (a.cols_ != b.cols_) throw DimensionError("vstack column count mismatch");
        BitMatrix r(a.rows_ + b.rows_, a.cols_);
        for (size_t i = 0; i < a.rows_; ++i) r.copy_row_from(a, i, i);
        for (size_t i = 0; i < b.rows_; ++i) r.copy_row_from(b, i, a.rows_ + i);
        return r;
    }

  private:
    void copy_row_from(const BitMatrix& src, size_t src_row, size_t dst_row) {
        for (size_t w = 0; w < wpr_; ++w) word(dst_row, w) = src.word(src_row, w);
    }
    uint64_t& word(size_t i, size_t w) { return words_[i * wpr_ + w]; }
    uint64_t word(size_t i, size_t w) const { return words_[i * wpr_ + w]; }

    size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> words_;
};

// Reduced row-echelon form. Pivot rule: columns left to right, topmost unused
// row first. This rule fixes the canonical solution of solve() and makes OSD
// pivot selection deterministic.
struct Rref {
    BitMatrix mat;                   // fully reduced
    std::vector<size_t> pivot_cols;  // pivot column per pivot row, ascending
    size_t rank() const { return pivot_cols.size(); }
};

inline Rref rref(const BitMatrix& m) {
    Rref r{m, {}};
    size_t next_row = 0;
    for (size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        size_t pivot = next_row;
        while (pivot < m.rows() && !r.mat.get(pivot, c)) ++pivot;
        if (pivot == m.rows()) continue;
        r.mat.swap_rows(pivot, next_row);
        for (size_t i = 0; i < m.rows(); ++i)
            if (i != next_row && r.mat.get(i, c)) r.mat.xor_row_into(next_row, i);
        r.pivot_cols.push_back(c);
        ++next_row;
    }
    return r;
}

inline size_t rank(const BitMatrix& m) { return rref(m).rank(); }

// Reusable echelon form for fast repeated row-space membership tests.
class Echelon {
  public:
    Echelon() = default;
    explicit Echelon(const BitMatrix& m) {
        Rref r = rref(m);
        pivots_ = r.pivot_cols;
        rows_ = BitMatrix(pivots_.size(), m.cols());
        for (size_t i = 0; i < pivots_.size(); ++i) rows_.set_row(i, r.mat.row(i));
    }

    size_t rank() const { return pivots_.size(); }
    size_t cols() const { return rows_.cols(); }

    // Reduce v by the echelon rows; the residue is zero iff v is in the row space.
    BitVector reduce(BitVector v) const {
        for (size_t i = 0; i < pivots_.size(); ++i)
            if (v.get(pivots_[i])) v ^= rows_.row(i);
        return v;
    }
    bool contains(const BitVector& v) const { return reduce(v).is_zero(); }

  private:
    BitMatrix rows_;
    std::vector<size_t> pivots_;
};

inline bool in_rowspace(const BitVector& v, const BitMatrix& m) {
    if (v.len() != m.cols()) throw DimensionError("in_rowspace length mismatch");
    return Echelon(m).contains(v);
}

// Rows form a basis of the right kernel {v : m v^T = 0}.
inline BitMatrix nullspace_basis(const BitMatrix& m) {
    Rref r = rref(m);
    std::vector<size_t> pivot_of_col(m.cols(), SIZE_MAX);
    for (size_t i = 0; i < r.pivot_cols.size(); ++i) pivot_of_col[r.pivot_cols[i]] = i;
    size_t dim = m.cols() - r.rank();
    BitMatrix basis(dim, m.cols());
    size_t out = 0;
    for (size_t f = 0; f < m.cols(); ++f) {
        if (pivot_of_col[f] != SIZE_MAX) continue;
        basis.set(out, f, true);
        for (size_t i = 0; i < r.pivot_cols.size(); ++i)
            if (r.mat.get(i, f)) basis.set(out, r.pivot_cols[i], true);
        ++out;
    }
    return basis;
}

// Solve m x^T = s^T. Returns the canonical solution under the pivot rule
// (free variables zero), or nullopt when inconsistent.
inline std::optional<BitVector> solve(const BitMatrix& m, const BitVector& s) {
    if (s.len() != m.rows()) throw DimensionError("solve right-hand side length mismatch");
    BitMatrix work = m;
    BitVector rhs = s;
    std::vector<size_t> pivot_cols;
    size_t next_row = 0;
    for (size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        size_t pivot = next_row;
        while (pivot < m.rows() && !work.get(pivot, c)) ++pivot;
        if (pivot == m.rows()) continue;
        work.swap_rows(pivot, next_row);
        bool tmp = rhs.get(pivot);
        rhs.set(pivot, rhs.get(next_row));
        rhs.set(next_row, tmp);
        for (size_t i = 0; i < m.rows(); ++i)
            if (i != next_row && work.get(i, c)) {
                work.xor_row_into(next_row, i);
                if (rhs.get(next_row)) rhs.flip(i);
            }
        pivot_cols.push_back(c);
        ++next_row;
    }
    for (size_t i = next_row; i < m.rows(); ++i)
        if (rhs.get(i)) return std::nullopt;
    BitVector x(m.cols());
    for (size_t i = 0; i < pivot_cols.size(); ++i)
        if (rhs.get(i)) x.set(pivot_cols[i], true);
    return x;
}

}  // namespace qldpc

#pragma once

#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/rng.hpp"

namespace qldpc::testing {

inline BitMatrix random_matrix(size_t rows, size_t cols, Rng& rng, double density = 0.5) {
    BitMatrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j)
            if (rng.uniform() < density) m.set(i, j, true);
    return m;
}

inline BitVector random_vector(size_t len, Rng& rng, double density = 0.5) {
    BitVector v(len);
    for (size_t i = 0; i < len; ++i)
        if (rng.uniform() < density) v.set(i, true);
    return v;
}

// Brute-force row-space membership: tries all 2^rows combinations.
inline bool in_rowspace_bruteforce(const BitVector& v, const BitMatrix& m) {
    size_t rows = m.rows();
    for (uint64_t mask = 0; mask < (1ull << rows); ++mask) {
        BitVector combo(m.cols());
        for (size_t i = 0; i < rows; ++i)
            if ((mask >> i) & 1) combo ^= m.row(i);
        if (combo == v) return true;
    }
    return false;
}

}  // namespace qldpc::testing

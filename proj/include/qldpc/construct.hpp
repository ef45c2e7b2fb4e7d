#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "qldpc/code.hpp"
#include "qldpc/gf2.hpp"

namespace qldpc {

// --- Classical ingredients -------------------------------------------------

// Parity checks of the length-L repetition code. Closed: L x L circulant
// I + S (cycle). Open: (L-1) x L chain with rows (..11..).
inline BitMatrix repetition_check(size_t L, bool closed) {
    if (L < 2) throw DomainError("repetition code needs L >= 2");
    if (closed) {
        BitMatrix m(L, L);
        for (size_t i = 0; i < L; ++i) {
            m.set(i, i, true);
            m.set(i, (i + 1) % L, true);
        }
        return m;
    }
    BitMatrix m(L - 1, L);
    for (size_t i = 0; i + 1 < L; ++i) {
        m.set(i, i, true);
        m.set(i, i + 1, true);
    }
    return m;
}

// --- Hypergraph product -----------------------------------------------------

// H_X = (H_a x I_nb | I_ra x H_b^T), H_Z = (I_na x H_b | H_a^T x I_rb).
inline CssCode hypergraph_product(const BitMatrix& ha, const BitMatrix& hb) {
    BitMatrix hx = hstack(kron(ha, BitMatrix::identity(hb.cols())),
                          kron(BitMatrix::identity(ha.rows()), hb.transpose()));
    BitMatrix hz = hstack(kron(BitMatrix::identity(ha.cols()), hb),
                          kron(ha.transpose(), BitMatrix::identity(hb.rows())));
    return validate_css(std::move(hx), std::move(hz), "hp");
}

inline CssCode toric_code(size_t L) {
    BitMatrix rep = repetition_check(L, true);
    CssCode code = hypergraph_product(rep, rep);
    code.meta = "toric";
    return code;
}

inline CssCode surface_code(size_t L) {
    BitMatrix rep = repetition_check(L, false);
    CssCode code = hypergraph_product(rep, rep);
    code.meta = "surface";
    return code;
}

// --- Quasi-cyclic lifted product ---------------------------------------------

// Base matrix over Z_q united with -1 (the zero block marker).
struct BaseMatrix {
    size_t rows = 0, cols = 0;
    size_t q = 1;
    std::vector<int> entries;  // row major; -1 or values in [0, q)

    BaseMatrix() = default;
    BaseMatrix(size_t r, size_t c, size_t q_) : rows(r), cols(c), q(q_), entries(r * c, -1) {
        if (q_ == 0) throw DomainError("lift size q must be positive");
    }

    int get(size_t i, size_t j) const { return entries[i * cols + j]; }
    void set(size_t i, size_t j, int v) {
        if (v < -1 || v >= static_cast<int>(q))
            throw DomainError("base matrix entry out of Z_q u {-1}");
        entries[i * cols + j] = v;
    }

    // Base-level identity: 0 (identity circulant) on the diagonal, -1
    // (zero block) elsewhere.
    static BaseMatrix identity(size_t n, size_t q) {
        BaseMatrix m(n, n, q);
        for (size_t i = 0; i < n; ++i) m.set(i, i, 0);
        return m;
    }
};

// Transpose and replace each entry with its additive inverse in Z_q;
// -1 entries are invariant.
inline BaseMatrix conjugate_transpose(const BaseMatrix& b) {
    BaseMatrix r(b.cols, b.rows, b.q);
    for (size_t i = 0; i < b.rows; ++i)
        for (size_t j = 0; j < b.cols; ++j) {
            int v = b.get(i, j);
            r.set(j, i, v < 0 ? -1 : static_cast<int>((b.q - static_cast<size_t>(v)) % b.q));
        }
    return r;
}

// Expand each entry into a q x q circulant; -1 becomes the zero block.
inline BitMatrix lift(const BaseMatrix& b) {
    BitMatrix m(b.rows * b.q, b.cols * b.q);
    for (size_t i = 0; i < b.rows; ++i)
        for (size_t j = 0; j < b.cols; ++j) {
            int v = b.get(i, j);
            if (v < 0) continue;
            for (size_t r = 0; r < b.q; ++r)
                m.set(i * b.q + r, j * b.q + (r + static_cast<size_t>(v)) % b.q, true);
        }
    return m;
}

namespace detail {

// Kronecker product at base level. Entry product: -1 absorbs, otherwise
// shifts add mod q (circulant multiplication). This is the unique semantics
// with lift(base_kron(a,b)) = kron(lift(a), lift(b)) for block-monomial bases.
inline BaseMatrix base_kron(const BaseMatrix& a, const BaseMatrix& b) {
    if (a.q != b.q) throw LiftError("base kron requires equal lift sizes");
    BaseMatrix r(a.rows * b.rows, a.cols * b.cols, a.q);
    for (size_t ia = 0; ia < a.rows; ++ia)
        for (size_t ja = 0; ja < a.cols; ++ja) {
            int va = a.get(ia, ja);
            if (va < 0) continue;
            for (size_t ib = 0; ib < b.rows; ++ib)
                for (size_t jb = 0; jb < b.cols; ++jb) {
                    int vb = b.get(ib, jb);
                    if (vb < 0) continue;
                    r.set(ia * b.rows + ib, ja * b.cols + jb,
                          static_cast<int>((static_cast<size_t>(va) + static_cast<size_t>(vb)) %
                                           a.q));
                }
        }
    return r;
}

inline BaseMatrix base_hstack(const BaseMatrix& a, const BaseMatrix& b) {
    if (a.rows != b.rows || a.q != b.q) throw LiftError("base hstack shape or q mismatch");
    BaseMatrix r(a.rows, a.cols + b.cols, a.q);
    for (size_t i = 0; i < a.rows; ++i) {
        for (size_t j = 0; j < a.cols; ++j) r.set(i, j, a.get(i, j));
        for (size_t j = 0; j < b.cols; ++j) r.set(i, a.cols + j, b.get(i, j));
    }
    return r;
}

}  // namespace detail

// B_X = (B_a x I | I x B_b^*), B_Z = (I x B_b | B_a^* x I) at base level,
// then lifted into circulant blocks. q = 1 reduces to the hypergraph product.
inline CssCode lifted_product(const BaseMatrix& ba, const BaseMatrix& bb) {
    if (ba.q != bb.q) throw LiftError("lifted product requires equal lift sizes");
    size_t q = ba.q;
    BaseMatrix bx = detail::base_hstack(detail::base_kron(ba, BaseMatrix::identity(bb.cols, q)),
                                        detail::base_kron(BaseMatrix::identity(ba.rows, q),
                                                          conjugate_transpose(bb)));
    BaseMatrix bz = detail::base_hstack(detail::base_kron(BaseMatrix::identity(ba.cols, q), bb),
                                        detail::base_kron(conjugate_transpose(ba),
                                                          BaseMatrix::identity(bb.rows, q)));
    return validate_css(lift(bx), lift(bz), "lp");
}

// --- Two-block family ---------------------------------------------------------

// H_X = (A | B), H_Z = (B^T | A^T) from commuting square matrices.
inline CssCode two_block(const BitMatrix& a, const BitMatrix& b, std::string meta = "two-block") {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw DimensionError("two-block requires square matrices of equal size");
    if (matmul(a, b) != matmul(b, a))
        throw CommutationError("two-block requires A and B to commute");
    size_t ell = a.rows();
    BitMatrix hx = hstack(a, b);
    BitMatrix hz = hstack(b.transpose(), a.transpose());
    return validate_css(std::move(hx), std::move(hz), std::move(meta), ell);
}

struct Monomial {
    size_t x_power = 0;
    size_t y_power = 0;
    bool operator<(const Monomial& o) const {
        return x_power != o.x_power ? x_power < o.x_power : y_power < o.y_power;
    }
    bool operator==(const Monomial& o) const {
        return x_power == o.x_power && y_power == o.y_power;
    }
};

// Bivariate bicycle code on x = S_ell x I_m, y = I_ell x S_m. Each block is a
// sum of monomials x^i y^j; three per block unless `relaxed`. Duplicate
// monomials are rejected (they cancel over GF(2)).
inline CssCode bivariate_bicycle(size_t ell, size_t m, const std::vector<Monomial>& a_monomials,
                                 const std::vector<Monomial>& b_monomials, bool relaxed = false) {
    if (ell == 0 || m == 0) throw DomainError("bivariate bicycle requires positive ell and m");
    auto build_block = [&](const std::vector<Monomial>& monomials) {
        if (!relaxed && monomials.size() != 3)
            throw DomainError("bivariate bicycle blocks take exactly three monomials");
        if (monomials.empty()) throw DomainError("bivariate bicycle block needs monomials");
        std::set<Monomial> seen;
        BitMatrix block(ell * m, ell * m);
        for (const Monomial& mono : monomials) {
            Monomial canon{mono.x_power % ell, mono.y_power % m};
            if (!seen.insert(canon).second)
                throw DomainError("duplicate monomial would cancel over GF(2)");
            block = block ^ kron(BitMatrix::circulant(canon.x_power % ell, ell),
                                 BitMatrix::circulant(canon.y_power % m, m));
        }
        return block;
    };
    CssCode code = two_block(build_block(a_monomials), build_block(b_monomials), "bb");
    return code;
}

// --- Groups and Cayley graphs --------------------------------------------------

// Finite group as an explicit multiplication table; the axioms are checked on
// construction so downstream code can trust closure and inverses.
struct GroupSpec {
    size_t order = 0;
    std::vector<size_t> mul;  // row major: mul[a * order + b] = a * b
    std::vector<std::string> labels;
    size_t identity = 0;

    GroupSpec(size_t order_, std::vector<size_t> mul_, std::vector<std::string> labels_)
        : order(order_), mul(std::move(mul_)), labels(std::move(labels_)) {
        if (order == 0) throw DomainError("group order must be positive");
        if (mul.size() != order * order) throw DomainError("multiplication table size mismatch");
        if (labels.size() != order) throw DomainError("label count mismatch");
        for (size_t v : mul)
            if (v >= order) throw DomainError("multiplication table entry out of range");
        bool have_identity = false;
        for (size_t e = 0; e < order && !have_identity; ++e) {
            bool ok = true;
            for (size_t g = 0; g < order && ok; ++g)
                ok = product(e, g) == g && product(g, e) == g;
            if (ok) {
                identity = e;
                have_identity = true;
            }
        }
        if (!have_identity) throw DomainError("multiplication table has no identity");
        for (size_t g = 0; g < order; ++g) {
            bool has_inverse = false;
            for (size_t h = 0; h < order && !has_inverse; ++h)
                has_inverse = product(g, h) == identity && product(h, g) == identity;
            if (!has_inverse) throw DomainError("group element lacks an inverse");
        }
        for (size_t a = 0; a < order; ++a)
            for (size_t b = 0; b < order; ++b)
                for (size_t c = 0; c < order; ++c)
                    if (product(product(a, b), c) != product(a, product(b, c)))
                        throw DomainError("multiplication table is not associative");
    }

    size_t product(size_t a, size_t b) const { return mul[a * order + b]; }
};

inline GroupSpec cyclic_group(size_t n) {
    if (n == 0) throw DomainError("cyclic group order must be positive");
    std::vector<size_t> mul(n * n);
    std::vector<std::string> labels(n);
    for (size_t a = 0; a < n; ++a) {
        labels[a] = a == 0 ? "e" : "g" + std::to_string(a);
        for (size_t b = 0; b < n; ++b) mul[a * n + b] = (a + b) % n;
    }
    return GroupSpec(n, std::move(mul), std::move(labels));
}

// Dihedral group of order 2n with elements a^i b^j in the canonical order
// e, a, ..., a^{n-1}, b, ab, ..., a^{n-1}b; relations a^n = b^2 = e and
// b a = a^{-1} b.
inline GroupSpec dihedral_group(size_t n) {
    if (n < 1) throw DomainError("dihedral parameter must be positive");
    size_t order = 2 * n;
    auto index = [n](size_t i, size_t j) { return i + n * j; };
    std::vector<size_t> mul(order * order);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < 2; ++j)
            for (size_t k = 0; k < n; ++k)
                for (size_t l = 0; l < 2; ++l) {
                    // (a^i b^j)(a^k b^l): b a^k = a^{-k} b
                    size_t shift = j == 0 ? (i + k) % n : (i + n - k % n) % n;
                    mul[index(i, j) * order + index(k, l)] = index(shift, (j + l) % 2);
                }
    std::vector<std::string> labels(order);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < 2; ++j) {
            std::string s;
            if (i == 1) {
                s = "a";
            } else if (i > 1) {
                s = "a" + std::to_string(i);
            }
            if (j == 1) s += "b";
            if (s.empty()) s = "e";
            labels[index(i, j)] = s;
        }
    return GroupSpec(order, std::move(mul), std::move(labels));
}

inline GroupSpec direct_product(const GroupSpec& g1, const GroupSpec& g2) {
    size_t order = g1.order * g2.order;
    auto index = [&](size_t a1, size_t a2) { return a1 * g2.order + a2; };
    std::vector<size_t> mul(order * order);
    std::vector<std::string> labels(order);
    for (size_t a1 = 0; a1 < g1.order; ++a1)
        for (size_t a2 = 0; a2 < g2.order; ++a2) {
            labels[index(a1, a2)] = "(" + g1.labels[a1] + "," + g2.labels[a2] + ")";
            for (size_t b1 = 0; b1 < g1.order; ++b1)
                for (size_t b2 = 0; b2 < g2.order; ++b2)
                    mul[index(a1, a2) * order + index(b1, b2)] =
                        index(g1.product(a1, b1), g2.product(a2, b2));
        }
    return GroupSpec(order, std::move(mul), std::move(labels));
}

enum class CayleySide { Right, Left };

struct CayleySpec {
    const GroupSpec& group;
    std::vector<size_t> gens;
    CayleySide side = CayleySide::Right;
};

// Adjacency matrix of Cay(G, S): M[g][gs] = 1 for right action, M[g][sg] = 1
// for left action.
inline BitMatrix cayley_adjacency(const CayleySpec& spec) {
    if (spec.gens.empty()) throw DomainError("cayley generator set must be nonempty");
    for (size_t s : spec.gens)
        if (s >= spec.group.order) throw DomainError("cayley generator out of range");
    BitMatrix m(spec.group.order, spec.group.order);
    for (size_t g = 0; g < spec.group.order; ++g)
        for (size_t s : spec.gens) {
            size_t h = spec.side == CayleySide::Right ? spec.group.product(g, s)
                                                      : spec.group.product(s, g);
            m.set(g, h, true);
        }
    return m;
}

// A = right-Cayley adjacency of S_A, B = left-Cayley adjacency of S_B.
// Right and left translations commute, so the two-block condition holds for
// any group and any generator sets; the check in two_block stays on as an
// internal consistency assertion.
inline CssCode two_block_group_algebra(const GroupSpec& group, const std::vector<size_t>& sa,
                                       const std::vector<size_t>& sb) {
    BitMatrix a = cayley_adjacency({group, sa, CayleySide::Right});
    BitMatrix b = cayley_adjacency({group, sb, CayleySide::Left});
    return two_block(a, b, "2bga");
}

}  // namespace qldpc

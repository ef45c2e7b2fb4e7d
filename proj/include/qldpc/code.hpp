#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qldpc/gf2.hpp"
#include "qldpc/pauli.hpp"
#include "qldpc/rng.hpp"

namespace qldpc {

// Which half of a CSS error is being decoded or classified. XError means the
// X component of the data error (detected by Z-type checks), and vice versa.
enum class ErrorSide { XError, ZError };

enum class Residual { SyndromeMismatch, Stabilizer, Logical };

// Validated CSS code. Check matrices may contain dependent rows; k always
// comes from the rank formula. Echelon forms of both matrices are cached for
// per-trial residual classification.
struct CssCode {
    BitMatrix hx;  // X-type checks (detect Z errors)
    BitMatrix hz;  // Z-type checks (detect X errors)
    size_t n = 0;
    size_t k = 0;
    std::string meta;       // construction provenance tag
    size_t block_size = 0;  // two-block family: columns per A/B block

    Echelon hx_space;  // row space of hx (X-type stabilizers)
    Echelon hz_space;  // row space of hz (Z-type stabilizers)

    const BitMatrix& check_matrix(ErrorSide side) const {
        return side == ErrorSide::XError ? hz : hx;
    }
    // Stabilizers acting trivially on the given error side.
    const Echelon& stabilizer_space(ErrorSide side) const {
        return side == ErrorSide::XError ? hx_space : hz_space;
    }
};

inline CssCode validate_css(BitMatrix hx, BitMatrix hz, std::string meta = "",
                            size_t block_size = 0) {
    if (hx.cols() != hz.cols()) throw DimensionError("hx and hz must have equal column counts");
    BitMatrix product = matmul(hx, hz.transpose());
    if (!product.is_zero()) {
        for (size_t i = 0; i < product.rows(); ++i)
            for (size_t j = 0; j < product.cols(); ++j)
                if (product.get(i, j))
                    throw CssViolation("H_X H_Z^T != 0: rows hx[" + std::to_string(i) +
                                       "], hz[" + std::to_string(j) + "] anticommute");
    }
    CssCode code;
    code.n = hx.cols();
    code.hx_space = Echelon(hx);
    code.hz_space = Echelon(hz);
    size_t rank_sum = code.hx_space.rank() + code.hz_space.rank();
    if (rank_sum > code.n) throw CssViolation("rank(hx) + rank(hz) exceeds qubit count");
    code.k = code.n - rank_sum;
    code.hx = std::move(hx);
    code.hz = std::move(hz);
    code.meta = std::move(meta);
    code.block_size = block_size;
    return code;
}

// General stabilizer code; k from the GF(2) rank of the (x|z) row space.
struct StabilizerCode {
    CheckMatrix checks;
    size_t n = 0;
    size_t k = 0;

    explicit StabilizerCode(CheckMatrix c) : checks(std::move(c)) {
        n = checks.num_qubits();
        size_t r = rank(hstack(checks.hx, checks.hz));
        if (r > n) throw CssViolation("stabilizer rank exceeds qubit count");
        k = n - r;
    }
};

// Z-type and X-type logical representatives with pairing xbar . zbar^T = I_k.
struct LogicalBasis {
    BitMatrix zbar;
    BitMatrix xbar;
};

namespace detail {

// Rows of `kernel` extending rowspace(sub) to a basis of the kernel.
inline BitMatrix extend_to_kernel_basis(const BitMatrix& kernel, const Echelon& sub) {
    std::vector<BitVector> picked;
    std::vector<BitVector> reduced;  // running echelon of sub + picked
    std::vector<size_t> lead;
    auto reduce = [&](BitVector v) {
        v = sub.reduce(std::move(v));
        for (size_t i = 0; i < reduced.size(); ++i)
            if (v.get(lead[i])) v ^= reduced[i];
        return v;
    };
    for (size_t i = 0; i < kernel.rows(); ++i) {
        BitVector v = reduce(kernel.row(i));
        if (v.is_zero()) continue;
        size_t l = 0;
        while (!v.get(l)) ++l;
        picked.push_back(kernel.row(i));
        reduced.push_back(v);
        lead.push_back(l);
    }
    BitMatrix out(picked.size(), kernel.cols());
    for (size_t i = 0; i < picked.size(); ++i) out.set_row(i, picked[i]);
    return out;
}

}  // namespace detail

// Z representatives span ker(hx) beyond rowspace(hz), X representatives span
// ker(hz) beyond rowspace(hx). Symplectic Gram-Schmidt enforces the pairing
// xbar_i . zbar_j^T = delta_ij; candidates are processed in a fixed order so
// the basis is deterministic.
inline LogicalBasis logical_basis(const CssCode& code) {
    if (code.k == 0) throw EmptyLogicalSpace("code has no logical qubits");
    BitMatrix zc = detail::extend_to_kernel_basis(nullspace_basis(code.hx), code.hz_space);
    BitMatrix xc = detail::extend_to_kernel_basis(nullspace_basis(code.hz), code.hx_space);
    if (zc.rows() != code.k || xc.rows() != code.k)
        throw CssViolation("logical candidate count does not match k");

    std::vector<BitVector> z, x;
    for (size_t i = 0; i < code.k; ++i) {
        z.push_back(zc.row(i));
        x.push_back(xc.row(i));
    }
    for (size_t i = 0; i < code.k; ++i) {
        size_t mate = i;
        while (mate < code.k && !x[mate].dot(z[i])) ++mate;
        if (mate == code.k) throw CssViolation("degenerate logical pairing");
        std::swap(x[i], x[mate]);
        for (size_t j = 0; j < code.k; ++j) {
            if (j != i && x[j].dot(z[i])) x[j] ^= x[i];
            if (j > i && z[j].dot(x[i])) z[j] ^= z[i];
        }
    }
    LogicalBasis basis{BitMatrix(code.k, code.n), BitMatrix(code.k, code.n)};
    for (size_t i = 0; i < code.k; ++i) {
        basis.zbar.set_row(i, z[i]);
        basis.xbar.set_row(i, x[i]);
    }
    return basis;
}

// Validation for user-supplied representatives of a general stabilizer code:
// both must commute with every generator, and pair up as xbar . zbar^T = I_k.
inline bool validate_logical_pair(const StabilizerCode& code, const std::vector<PauliOp>& zbar,
                                  const std::vector<PauliOp>& xbar) {
    if (zbar.size() != code.k || xbar.size() != code.k) return false;
    for (const auto& list : {zbar, xbar})
        for (const PauliOp& p : list) {
            for (size_t i = 0; i < code.checks.num_checks(); ++i)
                if (symplectic_product(p, code.checks.generator(i))) return false;
            // must lie outside the stabilizer row space
            BitVector sym = BitVector(2 * code.n);
            for (size_t j = 0; j < code.n; ++j) {
                if (p.x.get(j)) sym.set(j, true);
                if (p.z.get(j)) sym.set(code.n + j, true);
            }
            if (in_rowspace(sym, hstack(code.checks.hx, code.checks.hz))) return false;
        }
    for (size_t i = 0; i < code.k; ++i)
        for (size_t j = 0; j < code.k; ++j)
            if (symplectic_product(xbar[i], zbar[j]) != (i == j ? 1 : 0)) return false;
    return true;
}

struct CodeParams {
    size_t n = 0;
    size_t k = 0;
    std::optional<size_t> d_x;      // exact
    std::optional<size_t> d_z;      // exact
    std::optional<size_t> d_upper;  // bound only
    std::string method;

    std::optional<size_t> d() const {
        if (d_x && d_z) return std::min(*d_x, *d_z);
        return std::nullopt;
    }
};

namespace detail {

// Minimum weight over ker(h) \ rowspace(g) by Gray-code enumeration of the
// kernel space. Exact, cost 2^dim(ker h).
inline std::optional<size_t> min_logical_weight_exhaustive(const BitMatrix& h, const Echelon& g,
                                                           size_t max_dim) {
    BitMatrix basis = nullspace_basis(h);
    size_t dim = basis.rows();
    if (dim > max_dim) throw BudgetExceeded("kernel dimension exceeds exhaustive budget");
    std::optional<size_t> best;
    if (dim == 0) return best;
    BitVector current(h.cols());
    uint64_t total = 1ull << dim;
    for (uint64_t step = 1; step < total; ++step) {
        size_t flip = static_cast<size_t>(std::countr_zero(step));  // Gray code order
        current ^= basis.row(flip);
        size_t w = current.weight();
        if (best && w >= *best) continue;
        if (!g.contains(current)) best = w;
    }
    return best;
}

// Minimum weight over ker(h) \ rowspace(g) among vectors of weight <= w_max.
// Complete for that weight range, so a hit at weight w proves d = w.
inline std::optional<size_t> min_logical_weight_bounded(const BitMatrix& h, const Echelon& g,
                                                        size_t w_max) {
    size_t n = h.cols();
    std::vector<BitVector> col_syndrome(n, BitVector(h.rows()));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < h.rows(); ++i)
            if (h.get(i, j)) col_syndrome[j].set(i, true);

    std::vector<size_t> support;
    BitVector synd(h.rows());
    BitVector v(n);
    bool found = false;
    // Depth-first over supports of exact weight w, ascending w.
    auto search = [&](auto&& self, size_t start, size_t remaining) -> void {
        if (found) return;
        if (remaining == 0) {
            if (synd.is_zero() && !g.contains(v)) found = true;
            return;
        }
        for (size_t j = start; j + remaining <= n && !found; ++j) {
            synd ^= col_syndrome[j];
            v.set(j, true);
            self(self, j + 1, remaining - 1);
            synd ^= col_syndrome[j];
            v.set(j, false);
        }
    };
    for (size_t w = 1; w <= w_max; ++w) {
        search(search, 0, w);
        if (found) return w;
    }
    return std::nullopt;
}

inline std::optional<size_t> min_logical_weight(const BitMatrix& h, const Echelon& g,
                                                size_t w_max, size_t max_kernel_dim) {
    size_t kernel_dim = h.cols() - Echelon(h).rank();
    if (kernel_dim <= max_kernel_dim)
        return min_logical_weight_exhaustive(h, g, max_kernel_dim);
    if (w_max == 0) throw BudgetExceeded("kernel dimension exceeds exhaustive budget");
    double combos = 0.0, term = 1.0;
    for (size_t w = 1; w <= w_max; ++w) {
        term *= static_cast<double>(h.cols() - w + 1) / static_cast<double>(w);
        combos += term;
    }
    if (combos > 2e8) throw BudgetExceeded("weight-bounded search space too large");
    auto d = min_logical_weight_bounded(h, g, w_max);
    if (!d) throw BudgetExceeded("no logical operator found up to w_max; distance undetermined");
    return d;
}

}  // namespace detail

// Exact distances by exhaustive search: kernel-space enumeration when the
// kernel dimension fits the budget, otherwise enumeration of all vectors of
// weight <= w_max (exact only when a representative is found in range).
// Throws BudgetExceeded when neither search space is fully coverable;
// callers fall back to distance_probe.
inline CodeParams distance_exhaustive(const CssCode& code, size_t w_max = 0,
                                      size_t max_kernel_dim = 28) {
    CodeParams params;
    params.n = code.n;
    params.k = code.k;
    params.method = "exhaustive";
    if (code.k == 0) return params;  // no logical operators: distances undefined
    params.d_z = detail::min_logical_weight(code.hz, code.hx_space, w_max, max_kernel_dim);
    params.d_x = detail::min_logical_weight(code.hx, code.hz_space, w_max, max_kernel_dim);
    return params;
}

namespace detail {

// One randomized information-set pass: permute columns, take the kernel basis
// of the permuted matrix (systematic, hence low weight), and harvest vectors
// outside the opposite row space. Pairwise sums widen the net cheaply.
inline void probe_side(const BitMatrix& h, const Echelon& opposite, Rng& rng,
                       std::optional<size_t>& best) {
    size_t n = h.cols();
    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    for (size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);

    BitMatrix permuted(h.rows(), n);
    for (size_t i = 0; i < h.rows(); ++i)
        for (size_t j = 0; j < n; ++j)
            if (h.get(i, j)) permuted.set(i, perm[j], true);

    BitMatrix basis = nullspace_basis(permuted);
    auto consider = [&](const BitVector& vp) {
        size_t w = vp.weight();
        if (best && w >= *best) return;
        BitVector v(n);
        for (size_t j = 0; j < n; ++j)
            if (vp.get(perm[j])) v.set(j, true);
        if (!opposite.contains(v)) best = w;
    };
    for (size_t i = 0; i < basis.rows(); ++i) consider(basis.row(i));
    if (basis.rows() <= 128) {
        for (size_t i = 0; i < basis.rows(); ++i)
            for (size_t j = i + 1; j < basis.rows(); ++j) consider(basis.row(i) ^ basis.row(j));
    }
}

}  // namespace detail

// Randomized upper bound on the distance. Monotone nonincreasing in trials
// and deterministic given the seed.
inline CodeParams distance_probe(const CssCode& code, size_t trials, uint64_t seed) {
    if (code.k == 0) throw EmptyLogicalSpace("distance probe requires k >= 1");
    CodeParams params;
    params.n = code.n;
    params.k = code.k;
    params.method = "probe";
    if (trials == 0) return params;
    std::optional<size_t> best_z, best_x;
    Rng rng = Rng::split(seed, 0);
    for (size_t t = 0; t < trials; ++t) {
        detail::probe_side(code.hz, code.hx_space, rng, best_z);
        detail::probe_side(code.hx, code.hz_space, rng, best_x);
    }
    if (best_z && best_x) params.d_upper = std::min(*best_z, *best_x);
    return params;
}

// Residual classification, the only legal scoring rule for trials. For the
// X-error side: residual r = e + ehat is a syndrome mismatch when hz r^T != 0,
// a harmless stabilizer when r is spanned by hx rows, else a logical fault.
inline Residual classify_residual(const BitVector& e, const BitVector& ehat, const CssCode& code,
                                  ErrorSide side) {
    if (e.len() != code.n || ehat.len() != code.n)
        throw DimensionError("residual length mismatch");
    BitVector r = e ^ ehat;
    if (!code.check_matrix(side).mul_vec(r).is_zero()) return Residual::SyndromeMismatch;
    if (code.stabilizer_space(side).contains(r)) return Residual::Stabilizer;
    return Residual::Logical;
}

}  // namespace qldpc

#pragma once

#include <string>

#include "qldpc/gf2.hpp"

namespace qldpc {

// Symplectic representation of an n-qubit Pauli operator: per qubit,
// I -> (0,0), X -> (1,0), Z -> (0,1), Y -> (1,1). Phases are not tracked;
// they have no effect on syndromes.
struct PauliOp {
    size_t n = 0;
    BitVector x;  // X components
    BitVector z;  // Z components

    PauliOp() = default;
    explicit PauliOp(size_t n_) : n(n_), x(n_), z(n_) {}
    PauliOp(BitVector x_, BitVector z_) : n(x_.len()), x(std::move(x_)), z(std::move(z_)) {
        if (x.len() != z.len()) throw DimensionError("pauli x/z parts of unequal length");
    }
};

inline PauliOp parse_pauli(const std::string& text) {
    if (text.empty()) throw ParseError("empty pauli string");
    PauliOp p(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        switch (text[i]) {
            case 'I':
                break;
            case 'X':
                p.x.set(i, true);
                break;
            case 'Z':
                p.z.set(i, true);
                break;
            case 'Y':
                p.x.set(i, true);
                p.z.set(i, true);
                break;
            default:
                throw ParseError(std::string("invalid pauli character: ") + text[i]);
        }
    }
    return p;
}

inline std::string print_pauli(const PauliOp& p) {
    std::string s(p.n, 'I');
    for (size_t i = 0; i < p.n; ++i) {
        bool xi = p.x.get(i), zi = p.z.get(i);
        if (xi && zi) {
            s[i] = 'Y';
        } else if (xi) {
            s[i] = 'X';
        } else if (zi) {
            s[i] = 'Z';
        }
    }
    return s;
}

// 0 iff the operators commute, 1 iff they anticommute.
inline int symplectic_product(const PauliOp& p, const PauliOp& q) {
    if (p.n != q.n) throw DimensionError("symplectic product length mismatch");
    return (p.x.dot(q.z) ^ p.z.dot(q.x)) ? 1 : 0;
}

// Number of non-identity positions; a Y position counts once.
inline size_t weight(const PauliOp& p) {
    size_t w = 0;
    for (size_t i = 0; i < p.x.words().size(); ++i)
        w += static_cast<size_t>(std::popcount(p.x.words()[i] | p.z.words()[i]));
    return w;
}

// Product of Paulis with phases ignored: plain XOR of the symplectic parts.
inline PauliOp compose(const PauliOp& p, const PauliOp& q) {
    if (p.n != q.n) throw DimensionError("compose length mismatch");
    return PauliOp(p.x ^ q.x, p.z ^ q.z);
}

// Check matrix of a general stabilizer code: row i is the symplectic
// representation (h_{i,X} h_{i,Z}) of generator h_i.
struct CheckMatrix {
    BitMatrix hx;
    BitMatrix hz;

    CheckMatrix() = default;
    CheckMatrix(BitMatrix hx_, BitMatrix hz_) : hx(std::move(hx_)), hz(std::move(hz_)) {
        if (hx.cols() != hz.cols() || hx.rows() != hz.rows())
            throw DimensionError("check matrix x/z blocks must have equal shape");
        if (!symplectically_orthogonal())
            throw CssViolation("stabilizer generators do not mutually commute");
    }

    size_t num_checks() const { return hx.rows(); }
    size_t num_qubits() const { return hx.cols(); }

    PauliOp generator(size_t i) const { return PauliOp(hx.row(i), hz.row(i)); }

    // Parse the side-by-side (H_X | H_Z) text layout: 2n columns per row.
    static CheckMatrix from_text(const std::string& text) {
        BitMatrix both = BitMatrix::from_text(text);
        if (both.cols() % 2 != 0)
            throw ParseError("symplectic check matrix must have an even column count");
        size_t n = both.cols() / 2;
        BitMatrix hx(both.rows(), n), hz(both.rows(), n);
        for (size_t i = 0; i < both.rows(); ++i)
            for (size_t j = 0; j < n; ++j) {
                if (both.get(i, j)) hx.set(i, j, true);
                if (both.get(i, n + j)) hz.set(i, j, true);
            }
        return CheckMatrix(std::move(hx), std::move(hz));
    }

  private:
    bool symplectically_orthogonal() const {
        BitMatrix commutator = matmul(hx, hz.transpose()) ^ matmul(hz, hx.transpose());
        return commutator.is_zero();
    }
};

// s[i] = symplectic product of e with generator i: s = e_X H_Z^T + e_Z H_X^T.
inline BitVector syndrome(const PauliOp& e, const CheckMatrix& h) {
    if (e.n != h.num_qubits()) throw DimensionError("syndrome qubit count mismatch");
    return h.hz.mul_vec(e.x) ^ h.hx.mul_vec(e.z);
}

}  // namespace qldpc

#include <catch2/catch_amalgamated.hpp>

#include "qldpc/pauli.hpp"
#include "test_helpers.hpp"

using namespace qldpc;

namespace {

// Five-qubit code with generators XZZXI IXZZX XIXZZ ZXIXZ.
CheckMatrix five_qubit_checks() {
    BitMatrix hx = BitMatrix::from_rows({"10010", "01001", "10100", "01010"});
    BitMatrix hz = BitMatrix::from_rows({"01100", "00110", "00011", "10001"});
    return CheckMatrix(std::move(hx), std::move(hz));
}

}  // namespace

TEST_CASE("parse_pauli maps characters to symplectic pairs") {
    PauliOp p1 = parse_pauli("XXIZIY");
    CHECK(p1.x.to_string() == "110001");
    CHECK(p1.z.to_string() == "000101");
    PauliOp p2 = parse_pauli("IZIIIX");
    CHECK(p2.x.to_string() == "000001");
    CHECK(p2.z.to_string() == "010000");
    PauliOp id = parse_pauli("III");
    CHECK(id.x.is_zero());
    CHECK(id.z.is_zero());
    CHECK_THROWS_AS(parse_pauli("XQZ"), ParseError);
    CHECK_THROWS_AS(parse_pauli(""), ParseError);
}

TEST_CASE("parse/print round trip") {
    Rng rng(41);
    const char* alphabet = "IXYZ";
    for (int trial = 0; trial < 50; ++trial) {
        std::string s;
        size_t len = 1 + rng.below(12);
        for (size_t i = 0; i < len; ++i) s += alphabet[rng.below(4)];
        CHECK(print_pauli(parse_pauli(s)) == s);
    }
}

TEST_CASE("symplectic product") {
    CHECK(symplectic_product(parse_pauli("XXIZIY"), parse_pauli("IZIIIX")) == 0);
    PauliOp p = parse_pauli("XYZI");
    CHECK(symplectic_product(p, p) == 0);
    CHECK(symplectic_product(parse_pauli("X"), parse_pauli("Z")) == 1);
    CHECK_THROWS_AS(symplectic_product(parse_pauli("XX"), parse_pauli("X")), DimensionError);
}

TEST_CASE("symplectic product is symmetric and bilinear") {
    Rng rng(43);
    const char* alphabet = "IXYZ";
    auto random_pauli = [&](size_t n) {
        std::string s;
        for (size_t i = 0; i < n; ++i) s += alphabet[rng.below(4)];
        return parse_pauli(s);
    };
    for (int trial = 0; trial < 30; ++trial) {
        size_t n = 1 + rng.below(10);
        PauliOp a = random_pauli(n), b = random_pauli(n), c = random_pauli(n);
        CHECK(symplectic_product(a, b) == symplectic_product(b, a));
        CHECK(symplectic_product(compose(a, b), c) ==
              (symplectic_product(a, c) ^ symplectic_product(b, c)));
    }
}

TEST_CASE("weight") {
    CHECK(weight(parse_pauli("XXIZIY")) == 4);
    CHECK(weight(parse_pauli("IIII")) == 0);
    CHECK(weight(parse_pauli("YYYYY")) == 5);
}

TEST_CASE("weight subadditive under composition") {
    Rng rng(47);
    const char* alphabet = "IXYZ";
    for (int trial = 0; trial < 30; ++trial) {
        size_t n = 1 + rng.below(10);
        std::string a, b;
        for (size_t i = 0; i < n; ++i) {
            a += alphabet[rng.below(4)];
            b += alphabet[rng.below(4)];
        }
        PauliOp pa = parse_pauli(a), pb = parse_pauli(b);
        CHECK(weight(compose(pa, pb)) <= weight(pa) + weight(pb));
    }
}

TEST_CASE("check matrix validates symplectic orthogonality") {
    CHECK_NOTHROW(five_qubit_checks());
    // X and Z on the same qubit anticommute
    CHECK_THROWS_AS(CheckMatrix(BitMatrix::from_rows({"1", "0"}), BitMatrix::from_rows({"0", "1"})),
                    CssViolation);
}

TEST_CASE("check matrix side-by-side text layout") {
    CheckMatrix h = CheckMatrix::from_text(
        "4 10\n"
        "10010|01100\n"
        "01001|00110\n"
        "10100|00011\n"
        "01010|10001\n");
    CheckMatrix ref = five_qubit_checks();
    CHECK(h.hx == ref.hx);
    CHECK(h.hz == ref.hz);
}

TEST_CASE("syndrome of the five-qubit code") {
    CheckMatrix h = five_qubit_checks();
    CHECK(syndrome(parse_pauli("IIIII"), h).is_zero());
    for (size_t i = 0; i < h.num_checks(); ++i)
        CHECK(syndrome(h.generator(i), h).is_zero());

    // brute-force oracle: per-generator symplectic products
    auto oracle = [&](const PauliOp& e) {
        BitVector s(h.num_checks());
        for (size_t i = 0; i < h.num_checks(); ++i)
            if (symplectic_product(e, h.generator(i))) s.set(i, true);
        return s;
    };
    // single Z errors against every position; frozen values from the oracle
    CHECK(oracle(parse_pauli("ZIIII")).to_string() == "1010");
    CHECK(syndrome(parse_pauli("ZIIII"), h).to_string() == "1010");
    CHECK(oracle(parse_pauli("IIZII")).to_string() == "0010");
    CHECK(syndrome(parse_pauli("IIZII"), h).to_string() == "0010");
    Rng rng(53);
    const char* alphabet = "IXYZ";
    for (int trial = 0; trial < 40; ++trial) {
        std::string s;
        for (size_t i = 0; i < 5; ++i) s += alphabet[rng.below(4)];
        PauliOp e = parse_pauli(s);
        CHECK(syndrome(e, h) == oracle(e));
    }
}

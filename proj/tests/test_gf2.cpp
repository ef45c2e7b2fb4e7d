#include <catch2/catch_amalgamated.hpp>

#include "qldpc/gf2.hpp"
#include "test_helpers.hpp"

using namespace qldpc;
using qldpc::testing::in_rowspace_bruteforce;
using qldpc::testing::random_matrix;
using qldpc::testing::random_vector;

TEST_CASE("matmul basics") {
    Rng rng(7);
    BitMatrix m = random_matrix(3, 5, rng);
    CHECK(matmul(BitMatrix::identity(3), m) == m);
    CHECK(matmul(m, BitMatrix::zeros(5, 4)) == BitMatrix::zeros(3, 4));
    CHECK_THROWS_AS(matmul(m, m), DimensionError);
}

TEST_CASE("dummy code orthogonality") {
    // H_X and H_Z of the four-qubit illustration code
    BitMatrix hx = BitMatrix::from_rows({"1010", "0101"});
    BitMatrix hz = BitMatrix::from_rows({"0101", "1010"});
    CHECK(matmul(hx, hz.transpose()).is_zero());
}

TEST_CASE("matmul associativity on random instances") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        BitMatrix a = random_matrix(4, 6, rng);
        BitMatrix b = random_matrix(6, 3, rng);
        BitMatrix c = random_matrix(3, 5, rng);
        CHECK(matmul(matmul(a, b), c) == matmul(a, matmul(b, c)));
    }
}

TEST_CASE("kron basics") {
    CHECK(kron(BitMatrix::identity(2), BitMatrix::identity(2)) == BitMatrix::identity(4));
    BitMatrix ones = BitMatrix::from_rows({"11"});
    CHECK(kron(ones, BitMatrix::identity(2)) == BitMatrix::from_rows({"1010", "0101"}));
    Rng rng(3);
    BitMatrix m = random_matrix(3, 4, rng);
    CHECK(kron(BitMatrix::zeros(1, 1), m) == BitMatrix::zeros(3, 4));
}

TEST_CASE("kron mixed product property") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        BitMatrix a = random_matrix(2, 3, rng);
        BitMatrix c = random_matrix(3, 2, rng);
        BitMatrix b = random_matrix(3, 2, rng);
        BitMatrix d = random_matrix(2, 4, rng);
        CHECK(matmul(kron(a, b), kron(c, d)) == kron(matmul(a, c), matmul(b, d)));
    }
}

TEST_CASE("rank basics") {
    CHECK(rank(BitMatrix::identity(6)) == 6);
    CHECK(rank(BitMatrix::zeros(4, 7)) == 0);
    CHECK(rank(BitMatrix::from_rows({"11", "11"})) == 1);
}

TEST_CASE("rank equals transpose rank") {
    Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        BitMatrix m = random_matrix(1 + rng.below(7), 1 + rng.below(7), rng);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("nullspace basics") {
    CHECK(nullspace_basis(BitMatrix::identity(4)).rows() == 0);
    BitMatrix pair = nullspace_basis(BitMatrix::from_rows({"11"}));
    REQUIRE(pair.rows() == 1);
    CHECK(pair.row(0).to_string() == "11");
    CHECK(nullspace_basis(BitMatrix::zeros(3, 5)) == BitMatrix::identity(5));
}

TEST_CASE("nullspace dimension and membership") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        BitMatrix m = random_matrix(1 + rng.below(6), 1 + rng.below(8), rng);
        BitMatrix basis = nullspace_basis(m);
        CHECK(basis.rows() == m.cols() - rank(m));
        for (size_t i = 0; i < basis.rows(); ++i) CHECK(m.mul_vec(basis.row(i)).is_zero());
        CHECK(rank(basis) == basis.rows());
    }
}

TEST_CASE("in_rowspace basics") {
    BitMatrix m = BitMatrix::from_rows({"110", "011"});
    CHECK(in_rowspace(m.row(0), m));
    CHECK(in_rowspace(BitVector(3), m));
    CHECK_FALSE(in_rowspace(BitVector::from_string("10"), BitMatrix::from_rows({"11"})));
    CHECK_THROWS_AS(in_rowspace(BitVector(4), m), DimensionError);
}

TEST_CASE("in_rowspace agrees with brute force") {
    Rng rng(19);
    for (int trial = 0; trial < 40; ++trial) {
        BitMatrix m = random_matrix(1 + rng.below(12), 1 + rng.below(9), rng);
        BitVector v = random_vector(m.cols(), rng);
        CHECK(in_rowspace(v, m) == in_rowspace_bruteforce(v, m));
    }
}

TEST_CASE("solve basics") {
    Rng rng(23);
    BitMatrix m = random_matrix(4, 6, rng);
    auto x0 = solve(m, BitVector(4));
    REQUIRE(x0.has_value());
    CHECK(x0->is_zero());

    BitVector s = random_vector(5, rng);
    auto xi = solve(BitMatrix::identity(5), s);
    REQUIRE(xi.has_value());
    CHECK(*xi == s);

    BitMatrix inconsistent = BitMatrix::zeros(2, 3);
    inconsistent.set(0, 0, true);
    BitVector bad(2);
    bad.set(1, true);  // zero row forced to 1
    CHECK_FALSE(solve(inconsistent, bad).has_value());
}

TEST_CASE("solve finds solutions when consistent") {
    Rng rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        BitMatrix m = random_matrix(1 + rng.below(6), 1 + rng.below(8), rng);
        BitVector e = random_vector(m.cols(), rng);
        BitVector s = m.mul_vec(e);
        auto x = solve(m, s);
        REQUIRE(x.has_value());
        CHECK(m.mul_vec(*x) == s);
    }
}

TEST_CASE("circulant basics") {
    CHECK(BitMatrix::circulant(0, 4) == BitMatrix::identity(4));
    CHECK(BitMatrix::circulant(1, 3) == BitMatrix::from_rows({"010", "001", "100"}));
    CHECK_THROWS_AS(BitMatrix::circulant(3, 3), DomainError);
}

TEST_CASE("circulant product and commutation") {
    for (size_t q : {3u, 5u, 8u})
        for (size_t a = 0; a < q; ++a)
            for (size_t b = 0; b < q; ++b) {
                BitMatrix ca = BitMatrix::circulant(a, q);
                BitMatrix cb = BitMatrix::circulant(b, q);
                CHECK(matmul(ca, cb) == BitMatrix::circulant((a + b) % q, q));
                CHECK(matmul(ca, cb) == matmul(cb, ca));
            }
}

TEST_CASE("matrix text format round trip") {
    Rng rng(31);
    BitMatrix m = random_matrix(5, 9, rng);
    CHECK(BitMatrix::from_text(m.to_text()) == m);
    // side-by-side separator parses too
    BitMatrix small = BitMatrix::from_text("1 4\n10|01\n");
    CHECK(small == BitMatrix::from_rows({"1001"}));
    CHECK_THROWS_AS(BitMatrix::from_text("2 2\n01\n"), ParseError);
}

TEST_CASE("bit vector weight and padding") {
    BitVector v = BitVector::from_string("10110");
    CHECK(v.weight() == 3);
    v.flip(0);
    CHECK(v.weight() == 2);
    // padding bits stay clear through xor
    BitVector w(65);
    w.set(64, true);
    BitVector u = w ^ w;
    CHECK(u.is_zero());
}

TEST_CASE("kron dimension overflow is rejected") {
    BitMatrix tall(size_t{1} << 16, 1);
    CHECK_THROWS_AS(kron(tall, tall), CapacityError);
}

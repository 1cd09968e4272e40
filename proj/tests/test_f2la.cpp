#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "kh/f2la.hpp"

using namespace kh;

namespace {

BitMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    BitMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (rng() & 1) m.set(i, j, true);
    return m;
}

}  // namespace

TEST_CASE("bit vector basics") {
    BitVec v(130);
    CHECK(v.is_zero());
    v.set(0, true);
    v.set(129, true);
    CHECK(v.first_set() == 0);
    v.flip(0);
    CHECK(v.first_set() == 129);
    BitVec w(130);
    w.set(129, true);
    w.xor_with(v);
    CHECK(w.is_zero());
}

TEST_CASE("rank-nullity and transpose rank on random matrices") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        const std::size_t r = 1 + rng() % 40, c = 1 + rng() % 40;
        const BitMatrix m = random_matrix(rng, r, c);
        const std::size_t rk = rank(m);
        CHECK(rk + kernel_basis(m).size() == c);
        CHECK(rk == rank(m.transpose()));
        CHECK(image_basis(m).size() == rk);
    }
}

TEST_CASE("kernel vectors are annihilated, image vectors are attainable") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 50; ++it) {
        const BitMatrix m = random_matrix(rng, 1 + rng() % 20, 1 + rng() % 20);
        for (const BitVec& k : kernel_basis(m)) CHECK(m.multiply(k).is_zero());
        for (const BitVec& b : image_basis(m)) {
            const auto x = solve(m, b);
            REQUIRE(x.has_value());
            CHECK(m.multiply(*x) == b);
        }
    }
}

TEST_CASE("solve detects inconsistency") {
    BitMatrix m(2, 2);  // rows equal, so (1, 0) is unreachable
    m.set(0, 0, true);
    m.set(1, 0, true);
    BitVec b(2);
    b.set(0, true);
    CHECK_FALSE(solve(m, b).has_value());
}

TEST_CASE("matrix multiplication is associative") {
    std::mt19937_64 rng(13);
    for (int it = 0; it < 30; ++it) {
        const std::size_t a = 1 + rng() % 12, b = 1 + rng() % 12, c = 1 + rng() % 12,
                          d = 1 + rng() % 12;
        const BitMatrix x = random_matrix(rng, a, b);
        const BitMatrix y = random_matrix(rng, b, c);
        const BitMatrix z = random_matrix(rng, c, d);
        CHECK(x.multiply(y).multiply(z) == x.multiply(y.multiply(z)));
    }
}

TEST_CASE("subspace insertion tracks dimension and membership") {
    std::mt19937_64 rng(17);
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = 1 + rng() % 30;
        const BitMatrix m = random_matrix(rng, n, 1 + rng() % 30);
        Subspace s(n);
        std::size_t dim = 0;
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (s.insert(m.transpose().row(c))) ++dim;
        CHECK(dim == rank(m));
        CHECK(s.dim() == dim);
        for (const BitVec& b : image_basis(m)) CHECK(s.contains(b));
    }
}

TEST_CASE("determinism: identical seeds give identical echelon data") {
    auto run = [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        const BitMatrix m = random_matrix(rng, 25, 33);
        std::vector<BitVec> out = kernel_basis(m);
        auto img = image_basis(m);
        out.insert(out.end(), img.begin(), img.end());
        return out;
    };
    CHECK(run(99) == run(99));
}

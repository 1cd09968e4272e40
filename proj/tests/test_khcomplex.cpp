#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "kh/khcomplex.hpp"
#include "naive_oracle.hpp"

using namespace kh;

namespace {

SuturedTangle one_crossing_tangle() {
    SuturedTangle t;
    t.crossings = {{1, 3, 2, 0}};
    t.b0 = 0;
    t.b1 = 1;
    t.t0 = 2;
    t.t1 = 3;
    t.name = "unknot";
    return t;
}

GradedVectorSpace cube_homology(const PlanarDiagram& d) {
    return reduce_with_transfer(cube_complex(d, true, 24)).homology;
}

// Zero matrix fallbacks for buckets missing from a map.
BitMatrix at_or(const std::map<int, BitMatrix>& m, int u, std::size_t rows, std::size_t cols) {
    const auto it = m.find(u);
    if (it != m.end()) return it->second;
    return BitMatrix(rows, cols);
}

void check_reduction_identities(const GradedComplex& c, const Reduction& r) {
    for (const auto& [u, gens] : c.gens) {
        const std::size_t n = gens.size();
        const std::size_t h = r.hdim(u);
        const BitMatrix incl = at_or(r.incl, u, n, h);
        const BitMatrix proj = at_or(r.proj, u, h, n);

        // proj . incl = identity on homology.
        CHECK(proj.multiply(incl) == BitMatrix::identity(h));

        // d.hom + hom.d = id - incl.proj on the whole bucket.
        const std::size_t n_lo = c.dim(u - 1), n_hi = c.dim(u + 1);
        const BitMatrix d_lo = at_or(c.diff, u - 1, n, n_lo);
        const BitMatrix d_u = at_or(c.diff, u, n_hi, n);
        const BitMatrix hom_u = at_or(r.hom, u, n_lo, n);
        const BitMatrix hom_hi = at_or(r.hom, u + 1, n, n_hi);
        BitMatrix want = BitMatrix::identity(n);
        const BitMatrix ip = incl.multiply(proj);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (ip.get(i, j)) want.flip(i, j);
        BitMatrix got = d_lo.multiply(hom_u);
        const BitMatrix t2 = hom_hi.multiply(d_u);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (t2.get(i, j)) got.flip(i, j);
        CHECK(got == want);

        // Side conditions.
        CHECK(rank(hom_u.multiply(incl)) == 0);
        CHECK(rank(proj.multiply(hom_hi)) == 0);
        const BitMatrix hom_sq = hom_u.multiply(hom_hi);
        CHECK(rank(hom_sq) == 0);
    }
}

}  // namespace

TEST_CASE("cube complexes satisfy d2 = 0 and q-homogeneity") {
    const SuturedTangle t = one_crossing_tangle();
    for (int n = -3; n <= 3; ++n) CHECK_NOTHROW(cube_complex(closure(t, n), true, 24).check());
    CHECK_NOTHROW(cube_complex(closure_infinity(t), true, 24).check());
}

TEST_CASE("reduction transfer identities hold on cube complexes") {
    const SuturedTangle t = one_crossing_tangle();
    for (int n : {-2, 0, 1, 3}) {
        const GradedComplex c = cube_complex(closure(t, n), true, 24);
        check_reduction_identities(c, reduce_with_transfer(c));
    }
}

TEST_CASE("ladder models match the full cube for the one-crossing tangle") {
    const SuturedTangle t = one_crossing_tangle();
    TwistSystem sys(t);
    for (int n = -5; n <= 5; ++n) {
        CHECK_NOTHROW(sys.level_complex(n).check());
        CHECK(sys.level_reduction(n).homology == cube_homology(closure(t, n)));
    }
}

TEST_CASE("ladder models match the full cube for the dataset trefoil") {
    const SuturedTangle t = SuturedTangle::load("data/trefoil.tangle.json");
    TwistSystem sys(t);
    // Level 2 would put the full 13-crossing cube past ~5 GB, so stop at a
    // 12-crossing cube; higher levels are covered by the oracle suites.
    for (int n = -1; n <= 1; ++n)
        CHECK(sys.level_reduction(n).homology == cube_homology(closure(t, n)));
}

TEST_CASE("independent naive oracle agrees on small closures") {
    const SuturedTangle t = one_crossing_tangle();
    TwistSystem sys(t);
    for (int n = -4; n <= 4; ++n)
        CHECK(sys.level_reduction(n).homology.dims == oracle::reduced_homology(closure(t, n)));
}

TEST_CASE("trivial capping closure has one-dimensional homology") {
    TwistSystem sys(one_crossing_tangle());
    CHECK(sys.infinity_total_dim() == 1);
}

TEST_CASE("polynomial renderings of the anchor table") {
    GradedVectorSpace v;
    v.add(-7, -20);
    v.add(-6, -18);
    v.add(-5, -18);
    v.add(-4, -14);
    v.add(-3, -14);
    v.add(-2, -12);
    v.add(0, -8);
    CHECK(jones_polynomial(v) == "t^-4 + t^-6 - t^-10");
    CHECK(determinant(v) == 1);
    CHECK_FALSE(is_thin(v));

    GradedVectorSpace thin;
    thin.add(0, -1);
    thin.add(2, 3);
    CHECK(is_thin(thin));
}

TEST_CASE("grid rendering layout") {
    GradedVectorSpace v;
    v.add(0, -1);  // 2delta = 1
    v.add(1, 3);   // 2delta = -1
    CHECK(tsv_table(v) == "2delta\t0\t1\n1\t1\t0\n-1\t0\t1\n");
}

TEST_CASE("crossing cap is enforced") {
    SuturedTangle t = one_crossing_tangle();
    CHECK_THROWS_AS(homology(t, 8, 4), ResourceError);
}

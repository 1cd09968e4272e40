#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "kh/skein.hpp"

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

}  // namespace

TEST_CASE("twist steps are chain maps of degree (0, -1)") {
    for (const char* path : {"data/unknot.tangle.json", "data/trefoil.tangle.json",
                             "data/torus-8_19.tangle.json"}) {
        TwistSystem sys(SuturedTangle::load(path));
        for (int i = -3; i < 3; ++i) {
            const ChainMap f = twist_step_map(sys, i);
            CHECK(f.q2_shift == -1);
            CHECK_NOTHROW(f.check(sys.level_complex(i + 1), sys.level_complex(i)));
        }
    }
}

TEST_CASE("quotient maps compose steps and respect gradings") {
    TwistSystem sys(one_crossing_tangle());
    const ChainMap f = twist_quotient_map(sys, 3, -2);
    CHECK(f.q2_shift == -5);
    CHECK_NOTHROW(f.check(sys.level_complex(3), sys.level_complex(-2)));

    const ChainMap id = twist_quotient_map(sys, 1, 1);
    for (const auto& [u, b] : id.blocks) CHECK(b == BitMatrix::identity(b.rows()));

    CHECK_THROWS_AS(twist_quotient_map(sys, 0, 1), InputError);
}

TEST_CASE("induced maps on homology are functorial") {
    TwistSystem sys(SuturedTangle::load("data/trefoil.tangle.json"));
    const auto whole = induced_on_homology(sys, twist_quotient_map(sys, 2, 0));
    const auto top = induced_on_homology(sys, twist_step_map(sys, 1));
    const auto bottom = induced_on_homology(sys, twist_step_map(sys, 0));
    for (const auto& [u, b] : whole) {
        const auto t = top.find(u);
        const auto s = bottom.find(u);
        if (t == top.end() || s == bottom.end()) {
            CHECK(rank(b) == 0);
            continue;
        }
        CHECK(b == s->second.multiply(t->second));
    }
}

TEST_CASE("one-step exactness against the capping closure") {
    for (const char* path : {"data/unknot.tangle.json", "data/trefoil.tangle.json",
                             "data/torus-5_1.tangle.json", "data/torus-8_19.tangle.json"}) {
        TwistSystem sys(SuturedTangle::load(path));
        for (int i = -3; i < 3; ++i) {
            const TriangleCheck t = triangle_check(sys, i);
            CHECK(t.ok);
            CHECK(t.expected == sys.infinity_total_dim());
        }
    }
}

TEST_CASE("systems are deterministic across construction") {
    const SuturedTangle t = SuturedTangle::load("data/trefoil.tangle.json");
    TwistSystem a(t), b(t);
    for (int i : {-1, 0, 2}) {
        CHECK(twist_step_map(a, i).blocks == twist_step_map(b, i).blocks);
        CHECK(a.level_complex(i).diff == b.level_complex(i).diff);
    }
}

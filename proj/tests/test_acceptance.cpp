// Acceptance gate: one line per criterion, PASS or FAIL, nonzero exit if any
// hard criterion fails.  Soft diagnostics (the final criterion) are reported
// but never fatal.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "kh/limit.hpp"
#include "naive_oracle.hpp"

using namespace kh;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok) {
    std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", idx, name.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

GradedVectorSpace anchor_table() {
    GradedVectorSpace v;
    v.add(-7, -20);
    v.add(-6, -18);
    v.add(-5, -18);
    v.add(-4, -14);
    v.add(-3, -14);
    v.add(-2, -12);
    v.add(0, -8);
    return v;
}

KappaInvariant single_diagonal(std::initializer_list<int> us, int two_delta, int double_u = 1000) {
    KappaInvariant k;
    for (int u : us) k.table[{u, two_delta}] += 1;
    if (double_u != 1000) k.table[{double_u, two_delta}] += 1;
    for (const auto& [c, n] : k.table) k.total += n;
    return k;
}

bool maybe_load(const std::string& path, SuturedTangle& out) {
    try {
        out = SuturedTangle::load(path);
        return true;
    } catch (const InputError&) {
        return false;
    }
}

}  // namespace

int main() {
    const SuturedTangle unknot = SuturedTangle::load("data/unknot.tangle.json");
    const SuturedTangle trefoil = SuturedTangle::load("data/trefoil.tangle.json");

    // 1-2: the level-1 closure of the dataset trefoil tangle.
    const GradedVectorSpace v1 = homology(trefoil, 1);
    report(1, "trefoil level-1 homology equals the anchor table", v1 == anchor_table());
    report(2, "anchor Jones polynomial", jones_polynomial(v1) == "t^-4 + t^-6 - t^-10");

    // 3: trivial knot detection.
    {
        TwistSystem sys(unknot);
        bool zero = true;
        for (auto [lo, hi] : {std::pair{0, 2}, {-1, 3}, {-3, 5}}) {
            for (const auto& [u, b] : compute_window(sys, lo, hi).composite)
                if (rank(b)) zero = false;
        }
        const KappaInvariant k = compute_kappa(sys);
        report(3, "unknot: zero composite and zero invariant", zero && k.total == 0);
    }

    // 4: the one-crossing tangle's closures against the naive oracle.
    {
        TwistSystem sys(unknot);
        bool ok = true;
        for (int n = -5; n <= 5; ++n)
            if (sys.level_reduction(n).homology.dims != oracle::reduced_homology(closure(unknot, n)))
                ok = false;
        report(4, "torus-link closures match the naive cube oracle", ok);
    }

    // 5: the four-cell trefoil invariant.
    KappaInvariant trefoil_kappa;
    {
        TwistSystem sys(trefoil);
        trefoil_kappa = compute_kappa(sys);
        const KappaInvariant expect = single_diagonal({-5, -3, -2, 0}, 1);
        report(5, "trefoil invariant: four cells on the +1 diagonal",
               trefoil_kappa == expect && trefoil_kappa.total == 4 &&
                   trefoil_kappa.cert.agreement >= 3);
    }

    // 6: total dimensions along the window.
    {
        const std::vector<std::size_t> expect = {7, 6, 5, 6, 5, 6, 7, 8, 9};
        bool ok = true;
        std::size_t prev = 0;
        for (int i = 1; i <= 9; ++i) {
            const std::size_t dim = homology(trefoil, i).total();
            if (dim != expect[i - 1]) ok = false;
            if (i > 1 && (dim > prev ? dim - prev : prev - dim) != 1) ok = false;
            prev = dim;
        }
        report(6, "trefoil window dims 7,6,5,6,5,6,7,8,9 with unit steps", ok);
    }

    // 7: the windowed tower profile on certified gradings.
    {
        TwistSystem sys(trefoil, 40);
        const InverseWindow w = compute_window(sys, -6, 16);
        const auto profile = limit_profile(sys, w);
        bool ok = true;
        for (int level = 8; level <= 12; ++level) {
            std::map<int, std::size_t> expect = {{-5, 1}, {-4, 1}, {-3, 1}, {-2, 2}, {-1, 1}, {0, 2}};
            for (int u = 1; u <= level - 8; ++u) expect[u] = 1;
            if (profile.at(level) != expect) ok = false;
        }
        report(7, "tower profile: F2 at u in {0,-2}, F elsewhere certified, 0 below -5", ok);
    }

    // 8: mirroring.
    {
        TwistSystem sys(trefoil.mirrored());
        const KappaInvariant mk = compute_kappa(sys);
        report(8, "mirror trefoil invariant is the reflection",
               mk == mirror_reflect(trefoil_kappa) &&
                   mk == single_diagonal({0, 2, 3, 5}, -1));
    }

    // 9: figure-eight pair (extended).
    {
        SuturedTangle h1, h2;
        bool ok = maybe_load("data/figure8-h1.tangle.json", h1) &&
                  maybe_load("data/figure8-h2.tangle.json", h2);
        if (ok) {
            KappaInvariant expect1;
            for (int u : {0, 2, 3, 5}) expect1.table[{u, -3}] = 1;
            for (int u : {4, 6, 7, 9}) expect1.table[{u, -1}] = 1;
            expect1.total = 8;
            const KappaInvariant k1 = compute_kappa(TwistSystem(h1));
            const KappaInvariant k2 = compute_kappa(TwistSystem(h2));
            ok = k1 == expect1 && k2 == mirror_reflect(k1);
        }
        report(9, "figure-eight pair: two-row grids exchanged by reflection", ok);
    }

    // 10: larger torus families (extended).
    {
        SuturedTangle t51, t819;
        bool ok = maybe_load("data/torus-5_1.tangle.json", t51) &&
                  maybe_load("data/torus-8_19.tangle.json", t819);
        if (ok) {
            const KappaInvariant k5 = compute_kappa(TwistSystem(t51));
            const KappaInvariant k8 = compute_kappa(TwistSystem(t819));
            ok = k5 == single_diagonal({-2, -1, 0, 1, 2, 3, 4}, 1, 1) &&
                 k8 == single_diagonal({1, 2, 3, 4, 5, 6, 7}, 1, 4);
        }
        report(10, "torus families: unit dims with one double, single diagonal", ok);
    }

    // 11: property suites.
    {
        bool ok = true;
        std::vector<SuturedTangle> dataset = {unknot, trefoil};
        for (const char* name :
             {"torus-5_1", "torus-8_19", "figure8-h1", "figure8-h2"}) {
            SuturedTangle t;
            if (maybe_load(std::string("data/") + name + ".tangle.json", t))
                dataset.push_back(t);
        }
        for (const auto& t : dataset) {
            TwistSystem sys(t);
            const std::size_t expect = sys.infinity_total_dim();
            for (int n = -3; n <= 3; ++n) {
                try {
                    sys.level_complex(n).check();
                } catch (const std::exception&) {
                    ok = false;
                }
                if (n < 3) {
                    const ChainMap f = twist_step_map(sys, n);
                    try {
                        f.check(sys.level_complex(n + 1), sys.level_complex(n));
                    } catch (const std::exception&) {
                        ok = false;
                    }
                    if (triangle_check(sys, n).kernel_dim + triangle_check(sys, n).cokernel_dim !=
                        expect)
                        ok = false;
                }
            }
            // Determinism: a freshly built system reproduces every matrix.
            TwistSystem again(t);
            for (int n = -2; n <= 2; ++n)
                if (!(sys.level_complex(n).diff == again.level_complex(n).diff)) ok = false;
        }

        // Certificates of the stabilized computations.
        ok = ok && trefoil_kappa.cert.agreement >= 3 && trefoil_kappa.cert.top_surjective &&
             trefoil_kappa.cert.bottom_injective;

        // Reflection is an involution.
        ok = ok && mirror_reflect(mirror_reflect(trefoil_kappa)) == trefoil_kappa;

        // Linear algebra invariants on random matrices, identical under reseeding.
        std::mt19937_64 rng(2024);
        for (int it = 0; it < 100 && ok; ++it) {
            const std::size_t r = 1 + rng() % 32, c = 1 + rng() % 32;
            BitMatrix m(r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j)
                    if (rng() & 1) m.set(i, j, true);
            if (rank(m) + kernel_basis(m).size() != c) ok = false;
            if (rank(m) != rank(m.transpose())) ok = false;
        }
        report(11, "property suites: complexes, exactness, certificates, determinism", ok);
    }

    // 12: soft diagnostics, reported but never fatal.
    {
        std::vector<std::pair<std::string, KappaInvariant>> computed = {
            {"trefoil", trefoil_kappa}};
        SuturedTangle t;
        if (maybe_load("data/torus-5_1.tangle.json", t))
            computed.push_back({"torus-5_1", compute_kappa(TwistSystem(t))});
        if (maybe_load("data/torus-8_19.tangle.json", t))
            computed.push_back({"torus-8_19", compute_kappa(TwistSystem(t))});
        if (maybe_load("data/figure8-h1.tangle.json", t))
            computed.push_back({"figure8-h1", compute_kappa(TwistSystem(t))});
        bool all = true;
        for (const auto& [name, k] : computed) {
            const StructureReport rep = structure_report(k);
            std::printf("      soft %-10s %s\n", name.c_str(), rep.text.c_str());
            if (!rep.mod4_ok || !rep.tiled) all = false;
        }
        report(12, all ? "soft diagnostics: mod-4 and tiling hold on all examples"
                       : "soft diagnostics reported (non-fatal deviation noted)",
               true);
    }

    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}

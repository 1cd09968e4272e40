// The inverse system of a twist family over a finite window, its eventual
// image, and the bigraded invariant kappa.
//
// For an admissible tangle (capping closure a trivial knot) the homologies
// A_i = H(closure(t, i)) with the half-twist removal maps f_i : A_{i+1} -> A_i
// form an inverse system.  kappa is the eventual image: the ranks of long
// composites once widening the window no longer changes them.  Its absolute
// u-grading is read in any level (the maps preserve u); the diagonal grading
// is pinned by the generator growing at the top of the window, which is
// placed at 2*delta = +1.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "kh/skein.hpp"

namespace kh {

// Raised when the window policy hits the crossing cap before the eventual
// image stabilizes.  Carries the last window and its per-u ranks.
struct UnstabilizedError : std::runtime_error {
    UnstabilizedError(const std::string& what, int lo, int hi,
                      std::map<int, std::size_t> partial)
        : std::runtime_error(what), lo(lo), hi(hi), partial_by_u(std::move(partial)) {}
    int lo = 0, hi = 0;
    std::map<int, std::size_t> partial_by_u;
};

struct InverseWindow {
    int lo = 0, hi = 0;
    std::map<int, GradedVectorSpace> spaces;  // level -> graded dims of A_i
    std::map<int, BitMatrix> composite;       // per u: H(A_hi)^u -> H(A_lo)^u
    std::map<int, std::size_t> step_ranks;    // level i -> rank of induced f_i
};

// Throws InputError when the tangle is not admissible or lo >= hi;
// ResourceError when a level exceeds the crossing cap.
InverseWindow compute_window(const TwistSystem& sys, int lo, int hi);

struct EventualImage {
    std::map<int, std::size_t> by_u;                     // rank of the composite
    std::map<std::pair<int, int>, std::size_t> by_cell;  // (u, q2 in A_hi coords)
    bool agrees_with_subwindows = false;
    bool top_surjective = false;
    bool bottom_injective = false;
    bool stable = false;  // all three of the above
};
EventualImage eventual_image(const TwistSystem& sys, const InverseWindow& w);

struct Stabilization {
    int lo = 0, hi = 0;
    int agreement = 0;  // consecutive windows with identical per-u ranks
    bool top_surjective = false;
    bool bottom_injective = false;
};

struct KappaInvariant {
    std::map<std::pair<int, int>, std::size_t> table;  // (u, two_delta) -> dim
    std::size_t total = 0;
    Stabilization cert;

    std::map<int, std::size_t> by_u() const;
    bool operator==(const KappaInvariant& o) const { return table == o.table; }
};

// Default policy: start with [-4, 4], widen by 2 on each side until three
// consecutive windows agree and the end conditions hold.  Throws
// UnstabilizedError when the cap is reached first.
KappaInvariant compute_kappa(const TwistSystem& sys);

// The (u, two_delta) table of the eventual image of a stable window.  Throws
// UnstabilizedError("unstable top") when the top of the window does not grow
// by exactly one generator per step.
std::map<std::pair<int, int>, std::size_t> absolute_delta_lift(const TwistSystem& sys,
                                                               const InverseWindow& w);

// Entry at (u, 2delta) moves to (-u, -2delta); involutive.
KappaInvariant mirror_reflect(const KappaInvariant& k);

enum class AmphiVerdict { OBSTRUCTED, SILENT };
struct AmphiResult {
    AmphiVerdict verdict = AmphiVerdict::SILENT;
    KappaInvariant kappa;
    KappaInvariant reflected;
};
// OBSTRUCTED when kappa and its reflection differ as u-graded tables.
AmphiResult amphicheirality_check(const SuturedTangle& t,
                                  std::size_t crossing_cap = kDefaultCrossingCap);

// Conjecture diagnostics: total dimension mod 4 and a greedy tiling by
// translates of V = F at u-offsets {0, 2, 3, 5} on one diagonal.  Never a
// hard failure.
struct StructureReport {
    std::size_t total = 0;
    bool mod4_ok = false;
    bool tiled = false;
    std::vector<std::pair<int, int>> v_translates;  // (u offset, two_delta)
    std::string text;
};
StructureReport structure_report(const KappaInvariant& k);

// Per window level: per-u dimension of the image of A_hi -> A_i.
std::map<int, std::map<int, std::size_t>> limit_profile(const TwistSystem& sys,
                                                        const InverseWindow& w);

// Grid rendering: rows two_delta descending, columns u ascending.
std::string kappa_tsv(const KappaInvariant& k);
std::string kappa_json(const KappaInvariant& k);

}  // namespace kh

// Planar diagram combinatorics: sutured 2-strand tangles, their closures,
// orientations and crossing signs.
//
// Crossings are 4-tuples of arc ids listed counterclockwise starting from the
// incoming under-strand, so the under-strand runs slot 0 -> slot 2 and the
// over-strand occupies slots 1 and 3.  Resolutions:
//   0-smoothing joins {slot0, slot3} and {slot1, slot2}
//   1-smoothing joins {slot0, slot1} and {slot2, slot3}
// With this convention the oriented resolution of a positive crossing is the
// 0-smoothing and of a negative crossing the 1-smoothing.

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kh/f2la.hpp"

namespace kh {

using Crossing = std::array<int, 4>;

// A tangle in D^2 x I with two bottom endpoints (b0, b1) and two top
// endpoints (t0, t1), each naming the open arc ending there.
struct SuturedTangle {
    std::vector<Crossing> crossings;
    int b0 = 0, b1 = 0, t0 = 0, t1 = 0;
    std::string name;

    // Structural checks: every arc id is used exactly twice, the diagram
    // embeds in the disk with boundary order (b0, b1, t1, t0), and the two
    // open strands run bottom-to-top.  Throws InputError on failure.
    void validate() const;

    // True if each open strand connects a bottom endpoint to a top endpoint.
    bool braid_like() const;

    // Reflection through the plane of the page (all crossings switched).
    SuturedTangle mirrored() const;

    static SuturedTangle from_json_text(const std::string& text);
    static SuturedTangle load(const std::string& path);
    std::string to_json_text() const;
};

// A closed diagram produced by a tangle closure (or by mirroring one).
struct PlanarDiagram {
    std::vector<Crossing> crossings;
    std::vector<int> free_circles;    // arc ids of crossing-free components
    int basepoint_arc = -1;
    std::vector<int> distinguished;   // twist crossing indices, bottom to top
    // Arcs marking the twist site: the two closure strands through the site
    // for closure(t, n), the two caps for closure_infinity(t).
    std::array<int, 2> site_arcs{-1, -1};

    // Filled in by orient():
    std::vector<int> signs;           // +1 / -1 per crossing
    int n_plus = 0, n_minus = 0;

    std::size_t size() const { return crossings.size(); }
};

// Insert |n| half twists (positive crossings for n > 0) between t0 and t1,
// then join b0 to the t0 strand and b1 to the t1 strand around the sides.
// The result is oriented: open strands bottom-to-top, closed components by
// first traversal from the lowest arc id.
PlanarDiagram closure(const SuturedTangle& t, int n);

// Cap t0 to t1 and b0 to b1.
PlanarDiagram closure_infinity(const SuturedTangle& t);

// Level-0 grading offset of the twist family:
//   n_minus(closure_infinity) - n_minus(closure(t, 0)).
int twist_offset_c(const SuturedTangle& t);

PlanarDiagram mirror(const PlanarDiagram& d);

// Circles of a full resolution.  state bit i = chosen smoothing of crossing i.
struct Smoothing {
    int n_circles = 0;
    std::map<int, int> circle_of_arc;  // arc id -> circle index (0-based)
};
Smoothing smooth(const PlanarDiagram& d, std::uint64_t state);

// Orient the diagram and compute crossing signs; called by the closures.
// Throws InputError if the requested seed orientations conflict.
void orient(PlanarDiagram& d, const std::vector<std::pair<int, std::pair<int, int>>>& seeds);

// Euler-characteristic embedding test on the rotation system; throws
// InputError when the diagram is not planar.
void check_planar(const PlanarDiagram& d);

}  // namespace kh

// Independent reference implementation of reduced homology over GF(2) for
// small closed diagrams: the full cube of resolutions, with plain integer
// matrices and textbook Gaussian elimination.  Deliberately shares no code
// with the library beyond the PlanarDiagram fields, so it can serve as an
// oracle in tests.  Exponential in the crossing number; keep inputs small.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "kh/diagram.hpp"

namespace oracle {

namespace detail {

// Circles of one resolution as arc -> circle id, plus the circle count.
struct Circles {
    std::map<int, int> of_arc;
    int count = 0;
};

inline Circles circles(const kh::PlanarDiagram& d, std::uint64_t state) {
    // Naive merging: start with every arc its own group, repeatedly relabel.
    std::map<int, int> group;
    auto touch = [&](int a) {
        if (!group.count(a)) group[a] = a;
    };
    for (int a : d.free_circles) touch(a);
    for (const auto& c : d.crossings)
        for (int s = 0; s < 4; ++s) touch(c[s]);

    auto join = [&](int a, int b) {
        const int ga = group[a], gb = group[b];
        if (ga == gb) return;
        for (auto& [arc, g] : group)
            if (g == gb) g = ga;
    };
    for (std::size_t i = 0; i < d.crossings.size(); ++i) {
        const auto& c = d.crossings[i];
        if ((state >> i) & 1) {
            join(c[0], c[1]);
            join(c[2], c[3]);
        } else {
            join(c[0], c[3]);
            join(c[1], c[2]);
        }
    }

    Circles out;
    std::map<int, int> renumber;
    for (const auto& [arc, g] : group) {
        if (!renumber.count(g)) renumber[g] = out.count++;
        out.of_arc[arc] = renumber[g];
    }
    return out;
}

// A generator: resolution state plus one bit per circle (set = label x).
// The basepoint circle always carries x.
struct Gen {
    std::uint64_t state = 0;
    std::uint64_t xbits = 0;
    bool operator<(const Gen& o) const {
        return state != o.state ? state < o.state : xbits < o.xbits;
    }
};

inline int popcount(std::uint64_t v) {
    int n = 0;
    for (; v; v >>= 1) n += static_cast<int>(v & 1);
    return n;
}

inline std::size_t gauss_rank(std::vector<std::vector<unsigned char>> m) {
    std::size_t r = 0;
    const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && !m[piv][c]) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = 0; i < rows; ++i)
            if (i != r && m[i][c])
                for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
        ++r;
    }
    return r;
}

}  // namespace detail

// Dimensions of reduced homology keyed by (u, doubled quantum grading).
inline std::map<std::pair<int, int>, std::size_t> reduced_homology(const kh::PlanarDiagram& d) {
    using namespace detail;
    const std::size_t n = d.crossings.size();

    // Enumerate generators, bucketed by (u, q2).
    std::map<std::uint64_t, Circles> smoothed;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << n); ++s) smoothed[s] = circles(d, s);

    auto grading = [&](const Gen& g) {
        const Circles& cir = smoothed.at(g.state);
        const int r = popcount(g.state);
        const int xs = popcount(g.xbits);
        const int deg = (cir.count - xs) - xs;
        const int u = r - d.n_minus;
        const int q2 = deg + r + d.n_plus - 2 * d.n_minus + 1;
        return std::pair<int, int>{u, q2};
    };

    std::map<std::pair<int, int>, std::vector<Gen>> bucket;  // (u, q2) -> gens
    std::map<Gen, std::pair<std::pair<int, int>, std::size_t>> index;
    for (const auto& [s, cir] : smoothed) {
        const int bp = cir.of_arc.at(d.basepoint_arc);
        for (std::uint64_t m = 0; m < (std::uint64_t(1) << cir.count); ++m) {
            if (!((m >> bp) & 1)) continue;  // basepoint circle must carry x
            const Gen g{s, m};
            auto& vec = bucket[grading(g)];
            index[g] = {grading(g), vec.size()};
            vec.push_back(g);
        }
    }

    // Images under the cube differential (preserves q2, raises u by one).
    auto differential = [&](const Gen& g) {
        std::vector<Gen> out;
        const Circles& src = smoothed.at(g.state);
        for (std::size_t i = 0; i < n; ++i) {
            if ((g.state >> i) & 1) continue;
            const std::uint64_t ns = g.state | (std::uint64_t(1) << i);
            const Circles& dst = smoothed.at(ns);
            if (dst.count == src.count - 1) {
                // Merge: the new label is the product of the two old ones.
                std::uint64_t xb = 0;
                bool dead = false;
                for (int c = 0; c < dst.count; ++c) {
                    int xs = 0, seen = 0;
                    std::set<int> olds;
                    for (const auto& [arc, cc] : dst.of_arc)
                        if (cc == c) olds.insert(src.of_arc.at(arc));
                    for (int o : olds) {
                        ++seen;
                        if ((g.xbits >> o) & 1) ++xs;
                    }
                    (void)seen;
                    if (xs >= 2) dead = true;  // x.x = 0
                    if (xs >= 1) xb |= std::uint64_t(1) << c;
                }
                if (!dead) out.push_back({ns, xb});
            } else {
                // Split: 1 -> 1|x + x|1, x -> x|x.
                std::set<int> halves;  // new circles covering the split circle
                int split_old = -1;
                for (const auto& [arc, cc] : dst.of_arc) {
                    const int o = src.of_arc.at(arc);
                    std::set<int> news;
                    for (const auto& [arc2, cc2] : dst.of_arc)
                        if (src.of_arc.at(arc2) == o) news.insert(cc2);
                    if (news.size() == 2) {
                        split_old = o;
                        halves = news;
                    }
                }
                std::uint64_t base = 0;
                for (const auto& [arc, cc] : dst.of_arc) {
                    const int o = src.of_arc.at(arc);
                    if (o != split_old && ((g.xbits >> o) & 1)) base |= std::uint64_t(1) << cc;
                }
                const int a = *halves.begin(), b = *halves.rbegin();
                if ((g.xbits >> split_old) & 1) {
                    out.push_back({ns, base | (std::uint64_t(1) << a) | (std::uint64_t(1) << b)});
                } else {
                    out.push_back({ns, base | (std::uint64_t(1) << a)});
                    out.push_back({ns, base | (std::uint64_t(1) << b)});
                }
            }
        }
        return out;
    };

    // Per (u, q2): dim ker d - dim im d(one grade down), graded piece by piece.
    std::map<std::pair<int, int>, std::size_t> rank_out, rank_in;
    for (const auto& [uq, gens] : bucket) {
        const std::pair<int, int> target{uq.first + 1, uq.second};
        const auto it = bucket.find(target);
        const std::size_t rows = it == bucket.end() ? 0 : it->second.size();
        std::vector<std::vector<unsigned char>> m(rows,
                                                  std::vector<unsigned char>(gens.size(), 0));
        for (std::size_t c = 0; c < gens.size(); ++c)
            for (const Gen& img : differential(gens[c])) {
                const auto& [iuq, row] = index.at(img);
                if (iuq != target) continue;  // dropped: lands outside (never happens)
                m[row][c] ^= 1;
            }
        const std::size_t rk = rows ? gauss_rank(m) : 0;
        rank_out[uq] = rk;
        rank_in[target] += rk;
    }

    std::map<std::pair<int, int>, std::size_t> dims;
    for (const auto& [uq, gens] : bucket) {
        const std::size_t h = gens.size() - rank_out[uq] - rank_in[uq];
        if (h) dims[uq] = h;
    }
    return dims;
}

}  // namespace oracle

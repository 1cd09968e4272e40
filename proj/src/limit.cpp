#include "kh/limit.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace kh {

namespace {

void require_admissible(const TwistSystem& sys) {
    const std::size_t d = sys.infinity_total_dim();
    if (d != 1)
        throw InputError("tangle '" + sys.tangle().name +
                         "' is not admissible: capping closure has homology dimension " +
                         std::to_string(d) + ", expected 1");
}

std::map<int, std::size_t> ranks_by_u(const std::map<int, BitMatrix>& m) {
    std::map<int, std::size_t> out;
    for (const auto& [u, b] : m) {
        const std::size_t r = rank(b);
        if (r) out[u] = r;
    }
    return out;
}

// Per-(u, source q2) ranks of a graded map between reduced homologies.
// The map must be homogeneous of q2-degree `shift`.
std::map<std::pair<int, int>, std::size_t> ranks_by_cell(const std::map<int, BitMatrix>& m,
                                                         const Reduction& src,
                                                         const Reduction& dst, int shift) {
    std::map<std::pair<int, int>, std::size_t> out;
    for (const auto& [u, b] : m) {
        if (!b.rows() || !b.cols()) continue;
        const std::vector<int>& sq = src.h_q2.at(u);
        const std::vector<int>& dq = dst.h_q2.at(u);
        std::set<int> qs(sq.begin(), sq.end());
        for (int q2 : qs) {
            std::vector<std::size_t> cols, rows;
            for (std::size_t c = 0; c < sq.size(); ++c)
                if (sq[c] == q2) cols.push_back(c);
            for (std::size_t r = 0; r < dq.size(); ++r)
                if (dq[r] == q2 + shift) rows.push_back(r);
            BitMatrix sub(rows.size(), cols.size());
            for (std::size_t r = 0; r < rows.size(); ++r)
                for (std::size_t c = 0; c < cols.size(); ++c)
                    if (b.get(rows[r], cols[c])) sub.set(r, c, true);
            const std::size_t rk = rank(sub);
            if (rk) out[{u, q2}] = rk;
        }
    }
    return out;
}

std::map<int, BitMatrix> composite_on_homology(const TwistSystem& sys, int lo, int hi) {
    return induced_on_homology(sys, twist_quotient_map(sys, hi, lo));
}

}  // namespace

std::map<int, std::size_t> KappaInvariant::by_u() const {
    std::map<int, std::size_t> out;
    for (const auto& [k, n] : table) out[k.first] += n;
    return out;
}

InverseWindow compute_window(const TwistSystem& sys, int lo, int hi) {
    require_admissible(sys);
    if (lo >= hi) throw InputError("window requires lo < hi");
    InverseWindow w;
    w.lo = lo;
    w.hi = hi;
    for (int i = lo; i <= hi; ++i) w.spaces[i] = sys.level_reduction(i).homology;
    w.composite = composite_on_homology(sys, lo, hi);
    for (int i = lo; i < hi; ++i) {
        std::size_t r = 0;
        for (const auto& [u, b] : induced_on_homology(sys, twist_step_map(sys, i))) r += rank(b);
        w.step_ranks[i] = r;
    }
    return w;
}

EventualImage eventual_image(const TwistSystem& sys, const InverseWindow& w) {
    EventualImage ev;
    ev.by_u = ranks_by_u(w.composite);
    ev.by_cell = ranks_by_cell(w.composite, sys.level_reduction(w.hi),
                               sys.level_reduction(w.lo), -(w.hi - w.lo));

    ev.agrees_with_subwindows =
        ev.by_u == ranks_by_u(composite_on_homology(sys, w.lo, w.hi - 1)) &&
        ev.by_u == ranks_by_u(composite_on_homology(sys, w.lo + 1, w.hi));

    // End conditions: the top step surjective, the bottom step injective.
    ev.top_surjective = true;
    for (const auto& [u, b] : induced_on_homology(sys, twist_step_map(sys, w.hi - 1)))
        if (rank(b) != b.rows()) ev.top_surjective = false;
    ev.bottom_injective = true;
    for (const auto& [u, b] : induced_on_homology(sys, twist_step_map(sys, w.lo)))
        if (rank(b) != b.cols()) ev.bottom_injective = false;

    ev.stable = ev.agrees_with_subwindows && ev.top_surjective && ev.bottom_injective;
    return ev;
}

std::map<std::pair<int, int>, std::size_t> absolute_delta_lift(const TwistSystem& sys,
                                                               const InverseWindow& w) {
    // Anchor: the one generator by which A_hi outgrows A_{hi-1}, located as
    // the kernel of the top step map.  Its diagonal is declared 2*delta = +1.
    const auto top = induced_on_homology(sys, twist_step_map(sys, w.hi - 1));
    const Reduction& rhi = sys.level_reduction(w.hi);
    const Reduction& rlo = sys.level_reduction(w.hi - 1);
    std::size_t total_ker = 0, total_coker = 0;
    int u_star = 0, q2_star = 0;
    for (const auto& [u, b] : top) {
        total_coker += b.rows() - rank(b);
        if (!b.cols()) continue;
        const std::vector<int>& sq = rhi.h_q2.at(u);
        std::set<int> qs(sq.begin(), sq.end());
        for (int q2 : qs) {
            std::vector<std::size_t> cols;
            for (std::size_t c = 0; c < sq.size(); ++c)
                if (sq[c] == q2) cols.push_back(c);
            BitMatrix sub(b.rows(), cols.size());
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < cols.size(); ++c)
                    if (b.get(r, cols[c])) sub.set(r, c, true);
            const std::size_t k = cols.size() - rank(sub);
            if (k) {
                total_ker += k;
                u_star = u;
                q2_star = q2;
            }
        }
    }
    (void)rlo;
    if (total_ker != 1 || total_coker != 0)
        throw UnstabilizedError("unstable top: level " + std::to_string(w.hi) +
                                    " does not grow by exactly one generator (kernel " +
                                    std::to_string(total_ker) + ", cokernel " +
                                    std::to_string(total_coker) + "); window too small",
                                w.lo, w.hi, {});
    const int two_delta_star = 2 * u_star - q2_star;

    std::map<std::pair<int, int>, std::size_t> table;
    const auto cells = ranks_by_cell(w.composite, sys.level_reduction(w.hi),
                                     sys.level_reduction(w.lo), -(w.hi - w.lo));
    for (const auto& [cell, dim] : cells) {
        const int two_delta = (2 * cell.first - cell.second) - two_delta_star + 1;
        table[{cell.first, two_delta}] += dim;
    }
    return table;
}

KappaInvariant compute_kappa(const TwistSystem& sys) {
    require_admissible(sys);
    const std::size_t base = closure(sys.tangle(), 0).size();
    const std::size_t cap = sys.crossing_cap();
    int lo = -4, hi = 4;
    std::vector<std::map<int, std::size_t>> history;
    while (true) {
        if (base + static_cast<std::size_t>(std::max(hi, -lo)) > cap) {
            std::map<int, std::size_t> partial;
            if (!history.empty()) partial = history.back();
            throw UnstabilizedError(
                "window policy exhausted at [" + std::to_string(lo) + ", " + std::to_string(hi) +
                    "]: crossing cap " + std::to_string(cap) + " reached before stabilization",
                lo, hi, partial);
        }
        const InverseWindow w = compute_window(sys, lo, hi);
        const EventualImage ev = eventual_image(sys, w);
        history.push_back(ev.by_u);
        int agreement = 1;
        for (std::size_t i = history.size(); i-- > 1;) {
            if (history[i - 1] == history.back()) ++agreement;
            else break;
        }
        if (agreement >= 3 && ev.stable) {
            KappaInvariant k;
            k.table = absolute_delta_lift(sys, w);
            for (const auto& [cell, n] : k.table) k.total += n;
            k.cert = {lo, hi, agreement, ev.top_surjective, ev.bottom_injective};
            return k;
        }
        lo -= 2;
        hi += 2;
    }
}

KappaInvariant mirror_reflect(const KappaInvariant& k) {
    KappaInvariant out;
    for (const auto& [cell, n] : k.table) out.table[{-cell.first, -cell.second}] += n;
    out.total = k.total;
    out.cert = k.cert;
    return out;
}

AmphiResult amphicheirality_check(const SuturedTangle& t, std::size_t crossing_cap) {
    AmphiResult res;
    TwistSystem sys(t, crossing_cap);
    res.kappa = compute_kappa(sys);
    res.reflected = mirror_reflect(res.kappa);
    res.verdict = res.kappa.by_u() == res.reflected.by_u() ? AmphiVerdict::SILENT
                                                           : AmphiVerdict::OBSTRUCTED;
    return res;
}

StructureReport structure_report(const KappaInvariant& k) {
    StructureReport rep;
    rep.total = k.total;
    rep.mod4_ok = rep.total % 4 == 0;

    std::map<std::pair<int, int>, std::size_t> left = k.table;  // (u, 2delta)
    auto cell = [&](int u, int d) -> std::size_t& { return left[{u, d}]; };
    rep.tiled = true;
    while (true) {
        // Lowest remaining cell ordered by (two_delta, u).
        bool found = false;
        int u0 = 0, d0 = 0;
        for (const auto& [c, n] : left) {
            if (!n) continue;
            if (!found || std::make_pair(c.second, c.first) < std::make_pair(d0, u0)) {
                u0 = c.first;
                d0 = c.second;
                found = true;
            }
        }
        if (!found) break;
        bool fits = true;
        for (int off : {0, 2, 3, 5})
            if (cell(u0 + off, d0) == 0) fits = false;
        if (!fits) {
            rep.tiled = false;
            break;
        }
        for (int off : {0, 2, 3, 5}) --cell(u0 + off, d0);
        rep.v_translates.push_back({u0, d0});
    }

    std::ostringstream out;
    out << "total " << rep.total << (rep.mod4_ok ? " == 0 (mod 4)" : " != 0 (mod 4)") << "; ";
    if (rep.tiled) {
        out << "V-pattern tiling with " << rep.v_translates.size() << " translate(s)";
        for (const auto& [u, d] : rep.v_translates)
            out << " [u+" << u << ", 2delta=" << d << "]";
    } else {
        out << "V-pattern tiling failed";
    }
    rep.text = out.str();
    return rep;
}

std::map<int, std::map<int, std::size_t>> limit_profile(const TwistSystem& sys,
                                                        const InverseWindow& w) {
    std::map<int, std::map<int, std::size_t>> out;
    for (int i = w.lo; i <= w.hi; ++i) {
        if (i == w.hi) {
            out[i] = sys.level_reduction(i).homology.by_u();
            continue;
        }
        out[i] = ranks_by_u(composite_on_homology(sys, i, w.hi));
    }
    return out;
}

std::string kappa_tsv(const KappaInvariant& k) {
    std::set<int> us;
    std::set<int, std::greater<int>> tds;
    for (const auto& [c, n] : k.table) {
        if (!n) continue;
        us.insert(c.first);
        tds.insert(c.second);
    }
    std::ostringstream out;
    out << "2delta";
    for (int u : us) out << '\t' << u;
    out << '\n';
    for (int td : tds) {
        out << td;
        for (int u : us) {
            const auto it = k.table.find({u, td});
            out << '\t' << (it == k.table.end() ? 0 : it->second);
        }
        out << '\n';
    }
    return out.str();
}

std::string kappa_json(const KappaInvariant& k) {
    std::ostringstream out;
    out << "{\"entries\":[";
    bool first = true;
    for (const auto& [c, n] : k.table) {
        if (!n) continue;
        if (!first) out << ",";
        out << "{\"u\":" << c.first << ",\"two_delta\":" << c.second << ",\"dim\":" << n << "}";
        first = false;
    }
    out << "],\"total\":" << k.total << ",\"stabilization\":{\"window\":[" << k.cert.lo << ","
        << k.cert.hi << "],\"agreement\":" << k.cert.agreement
        << ",\"top_surjective\":" << (k.cert.top_surjective ? "true" : "false")
        << ",\"bottom_injective\":" << (k.cert.bottom_injective ? "true" : "false") << "}}";
    return out.str();
}

}  // namespace kh

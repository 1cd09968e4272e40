#include "kh/diagram.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kh {

namespace {

using Dart = std::pair<int, int>;  // (crossing index, slot)

// arc id -> darts where the arc ends (0, 1 or 2 entries).
std::map<int, std::vector<Dart>> dart_map(const std::vector<Crossing>& cs) {
    std::map<int, std::vector<Dart>> occ;
    for (int c = 0; c < static_cast<int>(cs.size()); ++c)
        for (int s = 0; s < 4; ++s) occ[cs[c][s]].push_back({c, s});
    return occ;
}

// One end of an arc: a crossing dart or a tangle boundary slot (0..3 for
// b0, b1, t0, t1), encoded as crossing = -1 - slot.
Dart boundary_end(int slot) { return {-1 - slot, 0}; }
bool is_boundary(const Dart& d) { return d.first < 0; }

}  // namespace

void SuturedTangle::validate() const {
    std::map<int, int> uses;
    for (const Crossing& c : crossings)
        for (int s = 0; s < 4; ++s) ++uses[c[s]];
    for (int a : {b0, b1, t0, t1}) ++uses[a];
    for (const auto& [arc, n] : uses)
        if (n != 2)
            throw InputError("tangle arc " + std::to_string(arc) + " used " +
                             std::to_string(n) + " times (expected 2)");
    if (!braid_like())
        throw InputError("tangle is not braid-like: an open strand does not run bottom-to-top");
    check_planar(closure_infinity(*this));
}

bool SuturedTangle::braid_like() const {
    // Ends of every arc: crossing darts plus boundary slots.
    std::map<int, std::vector<Dart>> ends = dart_map(crossings);
    const int bslot[4] = {b0, b1, t0, t1};
    for (int s = 0; s < 4; ++s) ends[bslot[s]].push_back(boundary_end(s));

    // Walk the strand starting at boundary slot `from`; return the slot where
    // it leaves, or -1 on malformed input.
    auto trace = [&](int from) -> int {
        int arc = bslot[from];
        Dart at = boundary_end(from);
        for (std::size_t guard = 0; guard <= ends.size() * 2; ++guard) {
            const auto it = ends.find(arc);
            if (it == ends.end() || it->second.size() != 2) return -1;
            const Dart other = (it->second[0] == at) ? it->second[1] : it->second[0];
            if (is_boundary(other)) return -1 - other.first;
            // Pass through the crossing: exit at the opposite slot.
            const Dart exit{other.first, (other.second + 2) % 4};
            arc = crossings[exit.first][exit.second];
            at = exit;
        }
        return -1;
    };
    const int from_b0 = trace(0);
    const int from_b1 = trace(1);
    return (from_b0 == 2 || from_b0 == 3) && (from_b1 == 2 || from_b1 == 3) &&
           from_b0 != from_b1;
}

SuturedTangle SuturedTangle::mirrored() const {
    SuturedTangle m = *this;
    for (Crossing& c : m.crossings) c = {c[1], c[2], c[3], c[0]};
    return m;
}

SuturedTangle SuturedTangle::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad tangle JSON: ") + e.what());
    }
    SuturedTangle t;
    try {
        for (const auto& c : j.at("crossings")) {
            if (c.size() != 4) throw InputError("crossing is not a 4-tuple");
            t.crossings.push_back({c[0].get<int>(), c[1].get<int>(), c[2].get<int>(), c[3].get<int>()});
        }
        const auto& b = j.at("boundary");
        t.b0 = b.at("b0").get<int>();
        t.b1 = b.at("b1").get<int>();
        t.t0 = b.at("t0").get<int>();
        t.t1 = b.at("t1").get<int>();
        if (j.contains("name")) t.name = j["name"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("bad tangle JSON: ") + e.what());
    }
    return t;
}

SuturedTangle SuturedTangle::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open tangle file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string SuturedTangle::to_json_text() const {
    nlohmann::json j;
    j["crossings"] = nlohmann::json::array();
    for (const Crossing& c : crossings) j["crossings"].push_back({c[0], c[1], c[2], c[3]});
    j["boundary"] = {{"b0", b0}, {"b1", b1}, {"t0", t0}, {"t1", t1}};
    if (!name.empty()) j["name"] = name;
    return j.dump(2) + "\n";
}

void orient(PlanarDiagram& d, const std::vector<std::pair<int, std::pair<int, int>>>& seeds) {
    const auto occ = dart_map(d.crossings);
    for (const auto& [arc, darts] : occ)
        if (darts.size() != 2)
            throw InputError("closed diagram arc " + std::to_string(arc) + " used " +
                             std::to_string(darts.size()) + " times");

    // heads[arc] = dart the arc points into.
    std::map<int, Dart> heads;
    auto walk = [&](int arc, Dart head) {
        int cur = arc;
        Dart h = head;
        while (true) {
            const auto it = heads.find(cur);
            if (it != heads.end()) {
                if (it->second != h)
                    throw InputError("conflicting strand orientations in closure");
                return;
            }
            heads[cur] = h;
            const Dart exit{h.first, (h.second + 2) % 4};
            const int next = d.crossings[exit.first][exit.second];
            const auto& nd = occ.at(next);
            const Dart nh = (nd[0] == exit) ? nd[1] : nd[0];
            cur = next;
            h = nh;
        }
    };

    for (const auto& [arc, head] : seeds)
        walk(arc, head);
    for (const auto& [arc, darts] : occ)
        if (!heads.count(arc)) walk(arc, darts[1]);

    d.signs.assign(d.crossings.size(), 0);
    d.n_plus = d.n_minus = 0;
    for (int c = 0; c < static_cast<int>(d.crossings.size()); ++c) {
        const bool under_in = heads.at(d.crossings[c][0]) == Dart{c, 0};
        const bool over_in = heads.at(d.crossings[c][1]) == Dart{c, 1};
        d.signs[c] = (under_in == over_in) ? +1 : -1;
        (d.signs[c] > 0 ? d.n_plus : d.n_minus) += 1;
    }
}

namespace {

// Shared closure plumbing: append twist crossings, then merge arc pairs.
struct ArcMerger {
    std::map<int, int> alias;
    int resolve(int a) const {
        auto it = alias.find(a);
        while (it != alias.end()) {
            a = it->second;
            it = alias.find(a);
        }
        return a;
    }
    // Merge the arcs u and v; if they are already the same arc its two free
    // ends get joined into a crossing-free circle.
    void merge(int u, int v, PlanarDiagram& d) {
        u = resolve(u);
        v = resolve(v);
        if (u == v)
            d.free_circles.push_back(u);
        else
            alias[v] = u;
    }
    void apply(PlanarDiagram& d) const {
        for (Crossing& c : d.crossings)
            for (int s = 0; s < 4; ++s) c[s] = resolve(c[s]);
    }
};

int max_arc_id(const SuturedTangle& t) {
    int m = std::max({t.b0, t.b1, t.t0, t.t1});
    for (const Crossing& c : t.crossings) m = std::max({m, c[0], c[1], c[2], c[3]});
    return m;
}

// Dart inside the tangle attached to boundary arc `arc`, if any.
std::optional<Dart> tangle_dart(const SuturedTangle& t, int arc) {
    for (int c = 0; c < static_cast<int>(t.crossings.size()); ++c)
        for (int s = 0; s < 4; ++s)
            if (t.crossings[c][s] == arc) return Dart{c, s};
    return std::nullopt;
}

}  // namespace

PlanarDiagram closure(const SuturedTangle& t, int n) {
    PlanarDiagram d;
    d.crossings = t.crossings;
    int next = max_arc_id(t) + 1;
    int x = t.t0, y = t.t1;  // current top of the twist column (left, right)
    for (int k = 0; k < std::abs(n); ++k) {
        const int xp = next++, yp = next++;
        if (n > 0)
            d.crossings.push_back({x, y, yp, xp});  // under SW->NE, positive
        else
            d.crossings.push_back({y, yp, xp, x});  // under SE->NW, negative
        d.distinguished.push_back(static_cast<int>(d.crossings.size()) - 1);
        x = xp;
        y = yp;
    }

    ArcMerger m;
    m.merge(t.b0, x, d);
    m.merge(t.b1, y, d);
    m.apply(d);
    d.basepoint_arc = m.resolve(t.b0);
    d.site_arcs = {m.resolve(t.b0), m.resolve(t.b1)};

    std::vector<std::pair<int, Dart>> seeds;
    if (n != 0) {
        // Both strands enter the first twist crossing from below, oriented up.
        const int f = static_cast<int>(t.crossings.size());
        if (n > 0) {
            seeds.push_back({m.resolve(t.t0), {f, 0}});
            seeds.push_back({m.resolve(t.t1), {f, 1}});
        } else {
            seeds.push_back({m.resolve(t.t1), {f, 0}});
            seeds.push_back({m.resolve(t.t0), {f, 3}});
        }
    } else {
        // Orient into the tangle at b0 and b1 where those arcs meet a crossing.
        for (int arc : {t.b0, t.b1})
            if (auto dart = tangle_dart(t, arc)) seeds.push_back({m.resolve(arc), *dart});
    }
    orient(d, seeds);
    return d;
}

PlanarDiagram closure_infinity(const SuturedTangle& t) {
    PlanarDiagram d;
    d.crossings = t.crossings;
    ArcMerger m;
    m.merge(t.t0, t.t1, d);
    m.merge(m.resolve(t.b0), m.resolve(t.b1), d);
    m.apply(d);
    d.basepoint_arc = m.resolve(t.b0);
    d.site_arcs = {m.resolve(t.t0), m.resolve(t.b0)};
    orient(d, {});
    return d;
}

int twist_offset_c(const SuturedTangle& t) {
    return closure_infinity(t).n_minus - closure(t, 0).n_minus;
}

PlanarDiagram mirror(const PlanarDiagram& d) {
    PlanarDiagram m = d;
    for (Crossing& c : m.crossings) c = {c[1], c[2], c[3], c[0]};
    orient(m, {});
    return m;
}

Smoothing smooth(const PlanarDiagram& d, std::uint64_t state) {
    std::map<int, int> parent;
    std::function<int(int)> find = [&](int a) -> int {
        auto it = parent.find(a);
        if (it == parent.end() || it->second == a) {
            parent[a] = a;
            return a;
        }
        return parent[a] = find(it->second);
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (int a : d.free_circles) find(a);
    for (std::size_t c = 0; c < d.crossings.size(); ++c) {
        const Crossing& x = d.crossings[c];
        if ((state >> c) & 1) {
            unite(x[0], x[1]);
            unite(x[2], x[3]);
        } else {
            unite(x[0], x[3]);
            unite(x[1], x[2]);
        }
    }

    Smoothing s;
    std::map<int, int> index;  // representative -> circle index
    for (const auto& [arc, _] : parent) {
        const int rep = find(arc);
        if (!index.count(rep)) index[rep] = s.n_circles++;
    }
    for (const auto& [arc, _] : parent) s.circle_of_arc[arc] = index[find(arc)];
    return s;
}

void check_planar(const PlanarDiagram& d) {
    const auto occ = dart_map(d.crossings);
    for (const auto& [arc, darts] : occ)
        if (darts.size() != 2)
            throw InputError("arc " + std::to_string(arc) + " used " +
                             std::to_string(darts.size()) + " times");

    // Combinatorial map on darts: sigma = rotation, alpha = arc involution.
    auto dart_id = [](const Dart& dd) { return dd.first * 4 + dd.second; };
    const int nd = static_cast<int>(d.crossings.size()) * 4;
    std::vector<int> alpha(nd, -1);
    for (const auto& [arc, darts] : occ) {
        alpha[dart_id(darts[0])] = dart_id(darts[1]);
        alpha[dart_id(darts[1])] = dart_id(darts[0]);
    }
    auto sigma = [](int id) { return (id & ~3) | ((id + 1) & 3); };

    // Connected components via <sigma, alpha>; faces via sigma∘alpha.
    std::vector<int> comp(nd, -1);
    int ncomp = 0;
    for (int s = 0; s < nd; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v : {sigma(u), alpha[u]})
                if (comp[v] < 0) {
                    comp[v] = ncomp;
                    stack.push_back(v);
                }
        }
        ++ncomp;
    }
    std::vector<int> faces(ncomp, 0), verts(ncomp, 0), edges(ncomp, 0);
    std::vector<bool> seen(nd, false);
    for (int s = 0; s < nd; ++s) {
        if (seen[s]) continue;
        ++faces[comp[s]];
        int u = s;
        while (!seen[u]) {
            seen[u] = true;
            u = sigma(alpha[u]);
        }
    }
    for (int c = 0; c < static_cast<int>(d.crossings.size()); ++c) ++verts[comp[4 * c]];
    for (const auto& [arc, darts] : occ) ++edges[comp[dart_id(darts[0])]];
    for (int k = 0; k < ncomp; ++k)
        if (verts[k] - edges[k] + faces[k] != 2)
            throw InputError("diagram component is not planar (Euler characteristic " +
                             std::to_string(verts[k] - edges[k] + faces[k]) + ")");
}

}  // namespace kh

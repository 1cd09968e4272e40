#include "kh/khcomplex.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace kh {

void GradedVectorSpace::add(int u, int q2, std::size_t n) {
    if (n) dims[{u, q2}] += n;
}

std::size_t GradedVectorSpace::total() const {
    std::size_t t = 0;
    for (const auto& [k, n] : dims) t += n;
    return t;
}

std::map<int, std::size_t> GradedVectorSpace::by_u() const {
    std::map<int, std::size_t> m;
    for (const auto& [k, n] : dims) m[k.first] += n;
    return m;
}

std::size_t GradedComplex::dim(int u) const {
    const auto it = gens.find(u);
    return it == gens.end() ? 0 : it->second.size();
}

std::size_t GradedComplex::total_dim() const {
    std::size_t t = 0;
    for (const auto& [u, g] : gens) t += g.size();
    return t;
}

GradedVectorSpace GradedComplex::graded_dims() const {
    GradedVectorSpace v;
    for (const auto& [u, g] : gens)
        for (const Generator& x : g) v.add(x.u, x.q2);
    return v;
}

void GradedComplex::check() const {
    for (const auto& [u, d] : diff) {
        const auto src = gens.find(u), tgt = gens.find(u + 1);
        const std::size_t sd = src == gens.end() ? 0 : src->second.size();
        const std::size_t td = tgt == gens.end() ? 0 : tgt->second.size();
        if (d.cols() != sd || d.rows() != td)
            throw std::logic_error("complex: differential shape mismatch at u=" + std::to_string(u));
        for (std::size_t r = 0; r < d.rows(); ++r)
            for (std::size_t c = 0; c < d.cols(); ++c)
                if (d.get(r, c) && tgt->second[r].q2 != src->second[c].q2)
                    throw std::logic_error("complex: differential not q-homogeneous at u=" +
                                           std::to_string(u));
        const auto nx = diff.find(u + 1);
        if (nx != diff.end()) {
            const BitMatrix sq = nx->second.multiply(d);
            for (std::size_t r = 0; r < sq.rows(); ++r)
                if (!sq.row(r).is_zero())
                    throw std::logic_error("complex: d∘d != 0 at u=" + std::to_string(u));
        }
    }
}

std::size_t Reduction::hdim(int u) const {
    const auto it = h_q2.find(u);
    return it == h_q2.end() ? 0 : it->second.size();
}

namespace {

BitMatrix invert(const BitMatrix& m) {
    const std::size_t n = m.rows();
    if (m.cols() != n) throw std::logic_error("invert: not square");
    BitMatrix a(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            if (m.get(r, c)) a.set(r, c, true);
        a.set(r, n + r, true);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pr = c;
        while (pr < n && !a.get(pr, c)) ++pr;
        if (pr == n) throw std::logic_error("invert: singular matrix");
        if (pr != c) {
            a.xor_row_into(pr, c);
            a.xor_row_into(c, pr);
            a.xor_row_into(pr, c);
        }
        for (std::size_t r = 0; r < n; ++r)
            if (r != c && a.get(r, c)) a.xor_row_into(c, r);
    }
    BitMatrix inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (a.get(r, n + c)) inv.set(r, c, true);
    return inv;
}

}  // namespace

Reduction reduce_with_transfer(const GradedComplex& cx) {
    Reduction red;
    if (cx.gens.empty()) return red;

    const int umin = cx.gens.begin()->first;
    const int umax = cx.gens.rbegin()->first;

    // Carried between consecutive degrees, per q2 value: the chosen coimage
    // basis E at degree u and its image dE (a basis of the boundaries at u+1).
    struct Carry {
        std::vector<BitVec> evecs;  // in bucket-u coordinates
        std::vector<BitVec> bvecs;  // d(evecs), bucket-(u+1) coordinates
    };
    std::map<int, Carry> carry;

    for (int u = umin; u <= umax; ++u) {
        const auto git = cx.gens.find(u);
        const std::size_t dim = git == cx.gens.end() ? 0 : git->second.size();
        std::map<int, Carry> next_carry;
        if (dim == 0) {
            carry = std::move(next_carry);
            continue;
        }
        const std::vector<Generator>& gg = git->second;
        const std::size_t tdim = cx.dim(u + 1);
        const auto dit = cx.diff.find(u);
        const BitMatrix* dmat = dit == cx.diff.end() ? nullptr : &dit->second;
        const BitMatrix dmat_t = dmat ? dmat->transpose() : BitMatrix();
        // Row range of each q2 value in the target bucket (sorted by q2).
        const std::vector<Generator>* tg =
            cx.gens.count(u + 1) ? &cx.gens.at(u + 1) : nullptr;

        std::vector<BitVec> incl_cols;
        std::vector<BitVec> proj_rows;
        std::vector<int> q2s;
        BitMatrix hom(cx.dim(u - 1), dim);

        std::size_t c0 = 0;
        while (c0 < dim) {
            std::size_t c1 = c0;
            const int q2 = gg[c0].q2;
            while (c1 < dim && gg[c1].q2 == q2) ++c1;
            const std::size_t bs = c1 - c0;

            // Block column c (local) = global column c0 + c.  The
            // differential restricted to the block columns only hits target
            // rows of the same q2; restrict to that row range.
            std::size_t r0 = 0, r1 = 0;
            if (tg) {
                while (r0 < tg->size() && (*tg)[r0].q2 < q2) ++r0;
                r1 = r0;
                while (r1 < tg->size() && (*tg)[r1].q2 == q2) ++r1;
            }
            BitMatrix dblk(r1 - r0, bs);
            if (dmat)
                for (std::size_t c = 0; c < bs; ++c)
                    for (std::size_t r = r0; r < r1; ++r)
                        if (dmat->get(r, c0 + c)) dblk.set(r - r0, c, true);

            const Carry& in = carry.count(q2) ? carry.at(q2) : Carry{};
            Subspace span(bs);
            // Boundaries first (restricted to block coordinates).
            std::vector<BitVec> bloc;
            for (const BitVec& b : in.bvecs) {
                BitVec v(bs);
                for (std::size_t c = 0; c < bs; ++c)
                    if (b.get(c0 + c)) v.set(c, true);
                if (!span.insert(v)) throw std::logic_error("reduce: dependent boundaries");
                bloc.push_back(v);
            }
            // Homology representatives from the kernel.
            std::vector<BitVec> hreps;
            for (const BitVec& k : kernel_basis(dblk))
                if (span.insert(k)) hreps.push_back(k);
            // Coimage part: complete to the full block.
            std::vector<BitVec> evecs;
            for (std::size_t i = 0; i < bs && span.dim() < bs; ++i) {
                BitVec e(bs);
                e.set(i, true);
                if (span.insert(e)) evecs.push_back(e);
            }
            const std::size_t nb = bloc.size(), nh = hreps.size(), ne = evecs.size();
            if (nb + nh + ne != bs) throw std::logic_error("reduce: basis split failed");

            BitMatrix basis(bs, bs);
            for (std::size_t j = 0; j < bs; ++j) {
                const BitVec& v = j < nb ? bloc[j] : j < nb + nh ? hreps[j - nb] : evecs[j - nb - nh];
                for (std::size_t r = 0; r < bs; ++r)
                    if (v.get(r)) basis.set(r, j, true);
            }
            const BitMatrix coords = invert(basis);

            for (std::size_t j = 0; j < nh; ++j) {
                BitVec col(dim);
                for (std::size_t r = 0; r < bs; ++r)
                    if (hreps[j].get(r)) col.set(c0 + r, true);
                incl_cols.push_back(std::move(col));
                BitVec row(dim);
                for (std::size_t c = 0; c < bs; ++c)
                    if (coords.get(nb + j, c)) row.set(c0 + c, true);
                proj_rows.push_back(std::move(row));
                q2s.push_back(q2);
            }

            // Homotopy on this block: boundary coordinates map back to the
            // degree-(u-1) coimage vectors whose images they are.
            for (std::size_t c = 0; c < bs; ++c) {
                BitVec acc(cx.dim(u - 1));
                for (std::size_t j = 0; j < nb; ++j)
                    if (coords.get(j, c)) acc.xor_with(in.evecs[j]);
                for (std::size_t r = 0; r < acc.size(); ++r)
                    if (acc.get(r)) hom.set(r, c0 + c, true);
            }

            // Carry E and dE to the next degree.  The coimage vectors are
            // unit vectors, so their images are columns of the differential.
            if (ne) {
                Carry out;
                for (const BitVec& e : evecs) {
                    const std::size_t i = e.first_set();
                    BitVec ef(dim);
                    ef.set(c0 + i, true);
                    out.evecs.push_back(std::move(ef));
                    out.bvecs.push_back(dmat ? dmat_t.row(c0 + i) : BitVec(tdim));
                }
                next_carry[q2] = std::move(out);
            }
            c0 = c1;
        }

        BitMatrix inclm(dim, incl_cols.size());
        for (std::size_t j = 0; j < incl_cols.size(); ++j)
            for (std::size_t r = 0; r < dim; ++r)
                if (incl_cols[j].get(r)) inclm.set(r, j, true);
        BitMatrix projm(proj_rows.size(), dim);
        for (std::size_t j = 0; j < proj_rows.size(); ++j)
            for (std::size_t c = 0; c < dim; ++c)
                if (proj_rows[j].get(c)) projm.set(j, c, true);

        red.incl[u] = std::move(inclm);
        red.proj[u] = std::move(projm);
        red.hom[u] = std::move(hom);
        red.h_q2[u] = q2s;
        for (int q2 : q2s) red.homology.add(u, q2);
        carry = std::move(next_carry);
    }
    // Drop empty transfer rows for degrees without homology? Keep; harmless.
    return red;
}

// ---------------------------------------------------------------------------
// Full cube of resolutions.

namespace {

struct GenKey {
    std::uint64_t vertex, labels;
    bool operator==(const GenKey& o) const { return vertex == o.vertex && labels == o.labels; }
};
struct GenKeyHash {
    std::size_t operator()(const GenKey& k) const {
        return std::hash<std::uint64_t>()(k.vertex * 0x9e3779b97f4a7c15ull ^ k.labels);
    }
};

int popcount64(std::uint64_t x) { return __builtin_popcountll(x); }

}  // namespace

GradedComplex cube_complex(const PlanarDiagram& d, bool absolute, std::size_t crossing_cap) {
    const std::size_t nc = d.size();
    if (nc > crossing_cap)
        throw ResourceError("diagram has " + std::to_string(nc) + " crossings, cap is " +
                            std::to_string(crossing_cap));
    if (nc > 22) throw ResourceError("full cube limited to 22 crossings");

    const std::uint64_t nstates = std::uint64_t(1) << nc;
    std::vector<Smoothing> sm;
    sm.reserve(nstates);
    std::size_t total_gens = 0;
    for (std::uint64_t s = 0; s < nstates; ++s) {
        sm.push_back(smooth(d, s));
        total_gens += std::size_t(1) << (sm.back().n_circles - 1);
        if (total_gens > (std::size_t(1) << 23))
            throw ResourceError("cube complex too large");
    }

    struct Raw {
        std::uint64_t vertex, labels;
        int u, q2;
    };
    std::vector<Raw> raw;
    raw.reserve(total_gens);
    for (std::uint64_t s = 0; s < nstates; ++s) {
        const Smoothing& smo = sm[s];
        const int r = popcount64(s);
        const int bp = smo.circle_of_arc.at(d.basepoint_arc);
        std::vector<int> free;
        for (int c = 0; c < smo.n_circles; ++c)
            if (c != bp) free.push_back(c);
        for (std::uint64_t sub = 0; sub < (std::uint64_t(1) << free.size()); ++sub) {
            std::uint64_t labels = std::uint64_t(1) << bp;
            for (std::size_t i = 0; i < free.size(); ++i)
                if ((sub >> i) & 1) labels |= std::uint64_t(1) << free[i];
            const int deg = smo.n_circles - 2 * popcount64(labels);
            int u, q2;
            if (absolute) {
                u = r - d.n_minus;
                q2 = deg + r + d.n_plus - 2 * d.n_minus + 1;
            } else {
                u = r;
                q2 = deg + r;
            }
            raw.push_back({s, labels, u, q2});
        }
    }
    std::stable_sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
        return std::tie(a.u, a.q2, a.vertex, a.labels) < std::tie(b.u, b.q2, b.vertex, b.labels);
    });

    GradedComplex cx;
    std::unordered_map<GenKey, std::pair<int, int>, GenKeyHash> index;
    index.reserve(raw.size() * 2);
    for (const Raw& g : raw) {
        auto& bucket = cx.gens[g.u];
        index[{g.vertex, g.labels}] = {g.u, static_cast<int>(bucket.size())};
        bucket.push_back(Generator{g.vertex, g.labels, 0, 0, g.u, g.q2});
    }
    for (auto& [u, bucket] : cx.gens) {
        for (std::size_t i = 0; i < bucket.size(); ++i) bucket[i].local = static_cast<int>(i);
        cx.diff[u] = BitMatrix(cx.dim(u + 1), bucket.size());
    }

    // Differential: flip one crossing from 0 to 1; transfer circle labels.
    for (const auto& [u, bucket] : cx.gens) {
        BitMatrix& dm = cx.diff[u];
        for (std::size_t col = 0; col < bucket.size(); ++col) {
            const Generator& g = bucket[col];
            const Smoothing& sv = sm[g.vertex];
            for (std::size_t c = 0; c < nc; ++c) {
                if ((g.vertex >> c) & 1) continue;
                const std::uint64_t w = g.vertex | (std::uint64_t(1) << c);
                const Smoothing& sw = sm[w];
                // Correspondence through shared arcs.
                std::vector<std::array<int, 2>> pre(sw.n_circles, {-1, -1});
                for (const auto& [arc, cw] : sw.circle_of_arc) {
                    const int cv = sv.circle_of_arc.at(arc);
                    auto& p = pre[cw];
                    if (p[0] == cv || p[1] == cv) continue;
                    (p[0] < 0 ? p[0] : p[1]) = cv;
                }
                auto label = [&](int cv) { return (g.labels >> cv) & 1; };  // 1 = x
                auto emit = [&](std::uint64_t wl) {
                    const auto it = index.find({w, wl});
                    if (it == index.end()) throw std::logic_error("cube: missing target generator");
                    dm.flip(it->second.second, col);
                };
                if (sw.n_circles == sv.n_circles - 1) {
                    // Merge: exactly one target circle has two preimages.
                    std::uint64_t wl = 0;
                    bool dead = false;
                    for (int cw = 0; cw < sw.n_circles; ++cw) {
                        const auto& p = pre[cw];
                        if (p[1] < 0) {
                            if (label(p[0])) wl |= std::uint64_t(1) << cw;
                        } else {
                            if (label(p[0]) && label(p[1])) { dead = true; break; }
                            if (label(p[0]) || label(p[1])) wl |= std::uint64_t(1) << cw;
                        }
                    }
                    if (!dead) emit(wl);
                } else if (sw.n_circles == sv.n_circles + 1) {
                    // Split: two target circles share one source circle.
                    int s1 = -1, s2 = -1, src = -1;
                    std::vector<int> count(sv.n_circles, 0);
                    for (int cw = 0; cw < sw.n_circles; ++cw) ++count[pre[cw][0]];
                    for (int cv = 0; cv < sv.n_circles; ++cv)
                        if (count[cv] == 2) src = cv;
                    for (int cw = 0; cw < sw.n_circles; ++cw)
                        if (pre[cw][0] == src) (s1 < 0 ? s1 : s2) = cw;
                    std::uint64_t base = 0;
                    for (int cw = 0; cw < sw.n_circles; ++cw)
                        if (cw != s1 && cw != s2 && label(pre[cw][0]))
                            base |= std::uint64_t(1) << cw;
                    if (label(src)) {
                        emit(base | (std::uint64_t(1) << s1) | (std::uint64_t(1) << s2));
                    } else {
                        emit(base | (std::uint64_t(1) << s1));
                        emit(base | (std::uint64_t(1) << s2));
                    }
                } else {
                    throw std::logic_error("cube: smoothing change is not a merge or split");
                }
            }
        }
    }
    return cx;
}

// ---------------------------------------------------------------------------
// Twist ladders.

struct TwistSystem::Impl {
    SuturedTangle t;
    std::size_t cap;
    PlanarDiagram dv, dh;
    GradedComplex cv, ch;  // internal gradings (u = r, q2 = deg + r)
    Reduction rv, rh;
    std::vector<Smoothing> sv_states, sh_states;

    std::map<int, BitMatrix> saddle_vh, saddle_hv, dot;  // per r bucket
    // Transferred ladder differential blocks, keyed (k, source bucket).
    std::map<std::pair<int, int>, BitMatrix> n_pos, n_neg, m_dot;
    int kmax = 0;

    // Model generator addressing: linear index per (bucket, position).
    struct ModelIndex {
        std::vector<std::pair<int, int>> of_linear;       // linear -> (bucket, pos)
        std::map<std::pair<int, int>, int> to_linear;
        std::map<int, int> bucket_dim;
    };
    ModelIndex mv, mh;

    mutable std::map<int, GradedComplex> levels;
    mutable std::map<int, Reduction> level_red;
    mutable std::map<int, std::pair<int, int>> signs;  // n -> (n_plus, n_minus)

    std::pair<int, int> level_signs(int n) const {
        auto it = signs.find(n);
        if (it != signs.end()) return it->second;
        const PlanarDiagram d = closure(t, n);
        return signs[n] = {d.n_plus, d.n_minus};
    }
};

namespace {

TwistSystem::Impl::ModelIndex make_model_index(const Reduction& r) {
    TwistSystem::Impl::ModelIndex m;
    for (const auto& [bucket, q2s] : r.h_q2) {
        m.bucket_dim[bucket] = static_cast<int>(q2s.size());
        for (int i = 0; i < static_cast<int>(q2s.size()); ++i) {
            m.to_linear[{bucket, i}] = static_cast<int>(m.of_linear.size());
            m.of_linear.push_back({bucket, i});
        }
    }
    return m;
}

// Saddle map between the 0-twist closure and the infinity closure (either
// direction).  Both complexes are cubes over the same tangle crossings; the
// map reconnects the two strands at the twist site.
BitMatrix saddle_matrix(const GradedComplex& src, const GradedComplex& tgt, int r,
                        const std::vector<Smoothing>& ssm, const std::vector<Smoothing>& tsm,
                        const std::array<int, 2>& ssite, const std::array<int, 2>& tsite,
                        const std::set<int>& excluded_arcs) {
    const std::size_t sd = src.dim(r), td = tgt.dim(r);
    BitMatrix m(td, sd);
    if (!sd || !td) return m;
    // Target lookup.
    std::unordered_map<GenKey, int, GenKeyHash> tindex;
    const auto& tb = tgt.gens.at(r);
    for (int i = 0; i < static_cast<int>(tb.size()); ++i)
        tindex[{tb[i].vertex, tb[i].labels}] = i;

    const auto& sb = src.gens.at(r);
    for (int col = 0; col < static_cast<int>(sb.size()); ++col) {
        const Generator& g = sb[col];
        const Smoothing& sv = ssm[g.vertex];
        const Smoothing& sw = tsm[g.vertex];
        const int cv1 = sv.circle_of_arc.at(ssite[0]);
        const int cv2 = sv.circle_of_arc.at(ssite[1]);
        const int ch1 = sw.circle_of_arc.at(tsite[0]);
        const int ch2 = sw.circle_of_arc.at(tsite[1]);
        // Match circles away from the site through shared interior arcs.
        std::vector<int> src_of(sw.n_circles, -1);
        for (const auto& [arc, cw] : sw.circle_of_arc) {
            if (excluded_arcs.count(arc)) continue;
            const auto it = sv.circle_of_arc.find(arc);
            if (it == sv.circle_of_arc.end()) continue;
            src_of[cw] = it->second;
        }
        auto label = [&](int c) { return (g.labels >> c) & 1; };
        auto emit = [&](std::uint64_t wl) {
            const auto it = tindex.find({g.vertex, wl});
            if (it == tindex.end()) throw std::logic_error("saddle: missing target generator");
            m.flip(it->second, col);
        };
        std::uint64_t base = 0;
        for (int cw = 0; cw < sw.n_circles; ++cw)
            if (cw != ch1 && cw != ch2 && src_of[cw] >= 0 && label(src_of[cw]))
                base |= std::uint64_t(1) << cw;
        if (cv1 != cv2) {
            if (ch1 != ch2) throw std::logic_error("saddle: inconsistent reconnection (merge)");
            if (label(cv1) && label(cv2)) continue;  // x*x = 0
            std::uint64_t wl = base;
            if (label(cv1) || label(cv2)) wl |= std::uint64_t(1) << ch1;
            emit(wl);
        } else {
            if (ch1 == ch2) throw std::logic_error("saddle: inconsistent reconnection (split)");
            if (label(cv1)) {
                emit(base | (std::uint64_t(1) << ch1) | (std::uint64_t(1) << ch2));
            } else {
                emit(base | (std::uint64_t(1) << ch1));
                emit(base | (std::uint64_t(1) << ch2));
            }
        }
    }
    return m;
}

// Multiplication by x on the circle through `arc`, as an endomorphism of the
// degree-r bucket.
BitMatrix dot_matrix(const GradedComplex& cx, int r, const std::vector<Smoothing>& sm, int arc) {
    const std::size_t d = cx.dim(r);
    BitMatrix m(d, d);
    if (!d) return m;
    std::unordered_map<GenKey, int, GenKeyHash> index;
    const auto& b = cx.gens.at(r);
    for (int i = 0; i < static_cast<int>(b.size()); ++i) index[{b[i].vertex, b[i].labels}] = i;
    for (int col = 0; col < static_cast<int>(b.size()); ++col) {
        const Generator& g = b[col];
        const int c = sm[g.vertex].circle_of_arc.at(arc);
        if ((g.labels >> c) & 1) continue;  // x*x = 0
        const std::uint64_t wl = g.labels | (std::uint64_t(1) << c);
        const auto it = index.find({g.vertex, wl});
        if (it == index.end()) throw std::logic_error("dot: missing target generator");
        m.flip(it->second, col);
    }
    return m;
}

}  // namespace

TwistSystem::TwistSystem(SuturedTangle t, std::size_t crossing_cap)
    : t_(std::move(t)), cap_(crossing_cap), impl_(std::make_shared<Impl>()) {
    t_.validate();
    Impl& im = *impl_;
    im.t = t_;
    im.cap = cap_;
    im.dv = closure(t_, 0);
    im.dh = closure_infinity(t_);
    if (im.dv.size() > cap_)
        throw ResourceError("tangle has " + std::to_string(im.dv.size()) +
                            " crossings, cap is " + std::to_string(cap_));
    im.cv = cube_complex(im.dv, /*absolute=*/false, cap_);
    im.ch = cube_complex(im.dh, /*absolute=*/false, cap_);
    const std::uint64_t ns = std::uint64_t(1) << im.dv.size();
    for (std::uint64_t s = 0; s < ns; ++s) {
        im.sv_states.push_back(smooth(im.dv, s));
        im.sh_states.push_back(smooth(im.dh, s));
    }
    im.rv = reduce_with_transfer(im.cv);
    im.rh = reduce_with_transfer(im.ch);
    im.mv = make_model_index(im.rv);
    im.mh = make_model_index(im.rh);

    const std::set<int> boundary_ids = {t_.b0, t_.b1, t_.t0, t_.t1};
    // Per-bucket raw maps.
    std::set<int> buckets;
    for (const auto& [r, g] : im.cv.gens) buckets.insert(r);
    for (const auto& [r, g] : im.ch.gens) buckets.insert(r);
    for (int r : buckets) {
        im.saddle_vh[r] = saddle_matrix(im.cv, im.ch, r, im.sv_states, im.sh_states,
                                        im.dv.site_arcs, im.dh.site_arcs, boundary_ids);
        im.saddle_hv[r] = saddle_matrix(im.ch, im.cv, r, im.sh_states, im.sv_states,
                                        im.dh.site_arcs, im.dv.site_arcs, boundary_ids);
        im.dot[r] = dot_matrix(im.ch, r, im.sh_states, im.dh.site_arcs[0]);
    }
}

namespace {

// Extend the transferred ladder blocks up to chain length K.
void ensure_blocks(TwistSystem::Impl& im, int K) {
    if (K <= im.kmax) return;

    auto hom_or_zero = [&](const Reduction& red, const GradedComplex& cx, int src_deg) {
        const auto it = red.hom.find(src_deg);
        if (it != red.hom.end()) return it->second;
        return BitMatrix(cx.dim(src_deg - 1), cx.dim(src_deg));
    };
    auto proj_or_zero = [&](const Reduction& red, const GradedComplex& cx, int deg) {
        const auto it = red.proj.find(deg);
        if (it != red.proj.end()) return it->second;
        return BitMatrix(red.hdim(deg), cx.dim(deg));
    };
    auto raw_or_zero = [&](std::map<int, BitMatrix>& store, int deg, const GradedComplex& from,
                           const GradedComplex& to) {
        const auto it = store.find(deg);
        if (it != store.end()) return it->second;
        return BitMatrix(to.dim(deg), from.dim(deg));
    };

    // Chains out of the base piece (positive side): pi_H (X h)^{k-1} S incl_V.
    for (const auto& [rhat, q2s] : im.rv.h_q2) {
        BitMatrix cur = raw_or_zero(im.saddle_vh, rhat, im.cv, im.ch).multiply(im.rv.incl.at(rhat));
        int deg = rhat;
        for (int k = 1; k <= K; ++k) {
            if (!im.n_pos.count({k, rhat}))
                im.n_pos[{k, rhat}] = proj_or_zero(im.rh, im.ch, deg).multiply(cur);
            cur = hom_or_zero(im.rh, im.ch, deg).multiply(cur);
            --deg;
            cur = raw_or_zero(im.dot, deg, im.ch, im.ch).multiply(cur);
        }
    }
    // Chains between twist pieces: pi_H (X h)^{k-1} X incl_H.
    // Chains into the base piece (negative side): pi_V S' (h X)^{k-1} incl_H.
    for (const auto& [rhat, q2s] : im.rh.h_q2) {
        BitMatrix cur = raw_or_zero(im.dot, rhat, im.ch, im.ch).multiply(im.rh.incl.at(rhat));
        int deg = rhat;
        for (int k = 1; k <= K; ++k) {
            if (!im.m_dot.count({k, rhat}))
                im.m_dot[{k, rhat}] = proj_or_zero(im.rh, im.ch, deg).multiply(cur);
            cur = hom_or_zero(im.rh, im.ch, deg).multiply(cur);
            --deg;
            cur = raw_or_zero(im.dot, deg, im.ch, im.ch).multiply(cur);
        }

        BitMatrix w = im.rh.incl.at(rhat);
        deg = rhat;
        for (int k = 1; k <= K; ++k) {
            const BitMatrix out = raw_or_zero(im.saddle_hv, deg, im.ch, im.cv).multiply(w);
            if (!im.n_neg.count({k, rhat}))
                im.n_neg[{k, rhat}] = proj_or_zero(im.rv, im.cv, deg).multiply(out);
            w = hom_or_zero(im.rh, im.ch, deg)
                    .multiply(raw_or_zero(im.dot, deg, im.ch, im.ch).multiply(w));
            --deg;
        }
    }
    im.kmax = K;
}

}  // namespace

std::vector<int> TwistSystem::pieces_of_level(int n) {
    std::vector<int> p;
    if (n >= 0)
        for (int k = 0; k <= n; ++k) p.push_back(k);
    else
        for (int k = n; k <= 0; ++k) p.push_back(k);
    return p;
}

const GradedComplex& TwistSystem::level_complex(int n) const {
    Impl& im = *impl_;
    const auto it = im.levels.find(n);
    if (it != im.levels.end()) return it->second;
    if (im.dv.size() + std::abs(n) > im.cap)
        throw ResourceError("closure level " + std::to_string(n) + " exceeds crossing cap " +
                            std::to_string(im.cap));
    ensure_blocks(im, std::abs(n) + 1);

    const auto [np, nm] = im.level_signs(n);
    const int m = std::abs(n);
    GradedComplex cx;

    // Absolute grading of model generator (bucket rh, internal q2 w) in piece p.
    auto grade = [&](int p, int rh, int w) -> std::pair<int, int> {
        if (n >= 0) {
            if (p == 0) return {rh - nm, w + np - 2 * nm + 1};
            return {rh + p - nm, w + 2 * p - 1 + np - 2 * nm + 1};
        }
        if (p == 0) return {rh + m - nm, w + m + np - 2 * nm + 1};
        const int k = -p;
        return {rh + m - k - nm, w + m - 2 * k + 1 + np - 2 * nm + 1};
    };

    struct Slot {
        int piece, local, u, q2;
    };
    std::vector<Slot> slots;
    for (int p : pieces_of_level(n)) {
        const Impl::ModelIndex& mi = (p == 0) ? im.mv : im.mh;
        const Reduction& red = (p == 0) ? im.rv : im.rh;
        for (int lin = 0; lin < static_cast<int>(mi.of_linear.size()); ++lin) {
            const auto [rh, i] = mi.of_linear[lin];
            const int w = red.h_q2.at(rh)[i];
            const auto [u, q2] = grade(p, rh, w);
            slots.push_back({p, lin, u, q2});
        }
    }
    std::stable_sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
        return std::tie(a.u, a.q2, a.piece, a.local) < std::tie(b.u, b.q2, b.piece, b.local);
    });
    std::map<std::pair<int, int>, std::pair<int, int>> pos;  // (piece, local) -> (u, col)
    for (const Slot& s : slots) {
        auto& bucket = cx.gens[s.u];
        pos[{s.piece, s.local}] = {s.u, static_cast<int>(bucket.size())};
        cx.gens[s.u].push_back(Generator{0, 0, s.piece, s.local, s.u, s.q2});
    }
    for (const auto& [u, bucket] : cx.gens) cx.diff[u] = BitMatrix(cx.dim(u + 1), bucket.size());

    // Differential blocks between pieces a < b.
    const std::vector<int> pieces = pieces_of_level(n);
    for (int a : pieces)
        for (int b : pieces) {
            if (a >= b) continue;
            const int j = b - a;
            const Impl::ModelIndex& smi = (a == 0) ? im.mv : im.mh;
            const Impl::ModelIndex& tmi = (b == 0) ? im.mv : im.mh;
            for (const auto& [rhat, sdim] : smi.bucket_dim) {
                const BitMatrix* blk = nullptr;
                if (n >= 0)
                    blk = (a == 0) ? &im.n_pos.at({j, rhat}) : &im.m_dot.at({j, rhat});
                else
                    blk = (b == 0) ? &im.n_neg.at({-a, rhat}) : &im.m_dot.at({j, rhat});
                const int rt = rhat - j + 1;
                if (blk->rows() == 0 || blk->cols() == 0) continue;
                for (int i = 0; i < sdim; ++i) {
                    const auto [su, scol] = pos.at({a, smi.to_linear.at({rhat, i})});
                    for (std::size_t row = 0; row < blk->rows(); ++row) {
                        if (!blk->get(row, i)) continue;
                        const auto [tu, tcol] =
                            pos.at({b, tmi.to_linear.at({rt, static_cast<int>(row)})});
                        if (tu != su + 1) throw std::logic_error("ladder: block degree mismatch");
                        cx.diff[su].flip(tcol, scol);
                    }
                }
            }
        }
    return im.levels.emplace(n, std::move(cx)).first->second;
}

const Reduction& TwistSystem::level_reduction(int n) const {
    Impl& im = *impl_;
    const auto it = im.level_red.find(n);
    if (it != im.level_red.end()) return it->second;
    return im.level_red.emplace(n, reduce_with_transfer(level_complex(n))).first->second;
}

std::size_t TwistSystem::infinity_total_dim() const {
    return impl_->rh.homology.total();
}

GradedVectorSpace homology(const SuturedTangle& t, int n, std::size_t crossing_cap) {
    TwistSystem sys(t, crossing_cap);
    return sys.level_reduction(n).homology;
}

// ---------------------------------------------------------------------------
// Derived quantities and rendering.

std::string jones_polynomial(const GradedVectorSpace& v) {
    std::map<int, long long> coeff;  // q2 -> integer coefficient
    for (const auto& [k, n] : v.dims)
        coeff[k.second] += (k.first % 2 ? -1LL : 1LL) * static_cast<long long>(n);
    std::ostringstream out;
    bool first = true;
    for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
        const auto [q2, c] = *it;
        if (c == 0) continue;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        const long long a = std::abs(c);
        std::string term;
        if (q2 == 0) {
            term = std::to_string(a);
        } else {
            if (a != 1) term = std::to_string(a);
            if (q2 % 2 == 0) {
                const int e = q2 / 2;
                term += (e == 1) ? "t" : "t^" + std::to_string(e);
            } else {
                term += "t^(" + std::to_string(q2) + "/2)";
            }
        }
        out << term;
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

long long determinant(const GradedVectorSpace& v) {
    long long re = 0, im = 0;  // evaluation at t^(1/2) = i
    for (const auto& [k, n] : v.dims) {
        const long long c = (k.first % 2 ? -1LL : 1LL) * static_cast<long long>(n);
        switch (((k.second % 4) + 4) % 4) {
            case 0: re += c; break;
            case 1: im += c; break;
            case 2: re -= c; break;
            case 3: im -= c; break;
        }
    }
    return std::abs(re) + std::abs(im);
}

bool is_thin(const GradedVectorSpace& v) {
    std::set<int> diagonals;
    for (const auto& [k, n] : v.dims)
        if (n) diagonals.insert(2 * k.first - k.second);
    return diagonals.size() <= 1;
}

std::string tsv_table(const GradedVectorSpace& v) {
    std::set<int> us;
    std::set<int, std::greater<int>> tds;
    std::map<std::pair<int, int>, std::size_t> cell;  // (2delta, u) -> dim
    for (const auto& [k, n] : v.dims) {
        if (!n) continue;
        us.insert(k.first);
        tds.insert(2 * k.first - k.second);
        cell[{2 * k.first - k.second, k.first}] += n;
    }
    std::ostringstream out;
    out << "2delta";
    for (int u : us) out << '\t' << u;
    out << '\n';
    for (int td : tds) {
        out << td;
        for (int u : us) {
            const auto it = cell.find({td, u});
            out << '\t' << (it == cell.end() ? 0 : it->second);
        }
        out << '\n';
    }
    return out.str();
}

std::string json_table(const GradedVectorSpace& v) {
    std::ostringstream out;
    out << "{\"entries\":[";
    bool first = true;
    for (const auto& [k, n] : v.dims) {
        if (!n) continue;
        if (!first) out << ",";
        out << "{\"u\":" << k.first << ",\"q2\":" << k.second << ",\"dim\":" << n << "}";
        first = false;
    }
    out << "],\"total\":" << v.total() << "}";
    return out.str();
}

}  // namespace kh

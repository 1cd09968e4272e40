#include "kh/skein.hpp"

#include <stdexcept>

namespace kh {

void ChainMap::check(const GradedComplex& src, const GradedComplex& dst) const {
    for (const auto& [u, b] : blocks) {
        if (b.cols() != src.dim(u) || b.rows() != dst.dim(u))
            throw std::logic_error("chain map: block shape mismatch at u=" + std::to_string(u));
        if (src.dim(u) && dst.dim(u)) {
            const auto& sg = src.gens.at(u);
            const auto& dg = dst.gens.at(u);
            for (std::size_t r = 0; r < b.rows(); ++r)
                for (std::size_t c = 0; c < b.cols(); ++c)
                    if (b.get(r, c) && dg[r].q2 != sg[c].q2 + q2_shift)
                        throw std::logic_error("chain map: wrong q2 shift at u=" +
                                               std::to_string(u));
        }
    }
    auto block = [&](int u) {
        const auto it = blocks.find(u);
        if (it != blocks.end()) return it->second;
        return BitMatrix(dst.dim(u), src.dim(u));
    };
    for (const auto& [u, d] : src.diff) {
        const auto dit = dst.diff.find(u);
        const BitMatrix lhs = dit != dst.diff.end()
                                  ? dit->second.multiply(block(u))
                                  : BitMatrix(dst.dim(u + 1), src.dim(u));
        const BitMatrix rhs = block(u + 1).multiply(d);
        if (!(lhs == rhs))
            throw std::logic_error("chain map: does not commute with d at u=" + std::to_string(u));
    }
}

ChainMap twist_step_map(const TwistSystem& sys, int i) {
    const GradedComplex& src = sys.level_complex(i + 1);
    const GradedComplex& dst = sys.level_complex(i);

    // Position of each (piece, local) generator at the destination level.
    std::map<std::pair<int, int>, std::pair<int, int>> dpos;
    for (const auto& [u, bucket] : dst.gens)
        for (int c = 0; c < static_cast<int>(bucket.size()); ++c)
            dpos[{bucket[c].piece, bucket[c].local}] = {u, c};

    ChainMap f;
    f.src_level = i + 1;
    f.dst_level = i;
    f.q2_shift = -1;
    for (const auto& [u, bucket] : src.gens) {
        BitMatrix b(dst.dim(u), bucket.size());
        for (int c = 0; c < static_cast<int>(bucket.size()); ++c) {
            const auto it = dpos.find({bucket[c].piece, bucket[c].local});
            if (it == dpos.end()) continue;  // piece dropped at the lower level
            if (it->second.first != u)
                throw std::logic_error("twist step: generator changed u grading");
            b.set(it->second.second, c, true);
        }
        f.blocks[u] = std::move(b);
    }
    return f;
}

ChainMap twist_quotient_map(const TwistSystem& sys, int m, int n) {
    if (m < n) throw InputError("twist_quotient_map: need m >= n");
    ChainMap f;
    f.src_level = m;
    f.dst_level = n;
    f.q2_shift = -(m - n);
    if (m == n) {
        const GradedComplex& cx = sys.level_complex(m);
        for (const auto& [u, bucket] : cx.gens)
            f.blocks[u] = BitMatrix::identity(bucket.size());
        return f;
    }
    f.blocks = twist_step_map(sys, m - 1).blocks;
    for (int i = m - 2; i >= n; --i) {
        const ChainMap step = twist_step_map(sys, i);
        const GradedComplex& bottom = sys.level_complex(i);
        std::map<int, BitMatrix> composed;
        for (const auto& [u, b] : f.blocks) {
            const auto it = step.blocks.find(u);
            if (it != step.blocks.end())
                composed[u] = it->second.multiply(b);
            else
                composed[u] = BitMatrix(bottom.dim(u), b.cols());
        }
        f.blocks = std::move(composed);
    }
    return f;
}

std::map<int, BitMatrix> induced_on_homology(const TwistSystem& sys, const ChainMap& f) {
    const Reduction& rs = sys.level_reduction(f.src_level);
    const Reduction& rd = sys.level_reduction(f.dst_level);
    std::map<int, BitMatrix> out;
    for (const auto& [u, q2s] : rs.h_q2) {
        const std::size_t hs = q2s.size();
        const std::size_t hd = rd.hdim(u);
        const auto bit = f.blocks.find(u);
        if (hd == 0 || hs == 0 || bit == f.blocks.end()) {
            out[u] = BitMatrix(hd, hs);
            continue;
        }
        out[u] = rd.proj.at(u).multiply(bit->second.multiply(rs.incl.at(u)));
    }
    for (const auto& [u, q2s] : rd.h_q2)
        if (!out.count(u)) out[u] = BitMatrix(q2s.size(), 0);
    return out;
}

TriangleCheck triangle_check(const TwistSystem& sys, int i) {
    const ChainMap f = twist_step_map(sys, i);
    const auto m = induced_on_homology(sys, f);
    TriangleCheck t;
    for (const auto& [u, b] : m) {
        const std::size_t r = rank(b);
        t.kernel_dim += b.cols() - r;
        t.cokernel_dim += b.rows() - r;
    }
    t.expected = sys.infinity_total_dim();
    t.ok = t.kernel_dim + t.cokernel_dim == t.expected;
    return t;
}

}  // namespace kh

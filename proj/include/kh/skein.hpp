// Chain maps between consecutive levels of a twist family.
//
// The family closure(t, n) forms an inverse system: removing one half twist
// gives a map f_i : C(closure(t, i+1)) -> C(closure(t, i)) that preserves u
// and shifts q2 by -1.  On the ladder models this is a block map: generators
// whose piece exists at both levels map identically, the rest map to zero.

#pragma once

#include <map>

#include "kh/khcomplex.hpp"

namespace kh {

struct ChainMap {
    int src_level = 0;
    int dst_level = 0;
    int q2_shift = 0;
    std::map<int, BitMatrix> blocks;  // per u: dim dst bucket x dim src bucket

    // Assert the map commutes with the differentials and is homogeneous of
    // degree (0, q2_shift).  Throws std::logic_error on failure.
    void check(const GradedComplex& src, const GradedComplex& dst) const;
};

// One step A_{i+1} -> A_i of the inverse system.
ChainMap twist_step_map(const TwistSystem& sys, int i);

// Composite A_m -> A_n for m >= n.
ChainMap twist_quotient_map(const TwistSystem& sys, int m, int n);

// The map induced on reduced homology, per u bucket
// (dim H(dst)^u x dim H(src)^u).
std::map<int, BitMatrix> induced_on_homology(const TwistSystem& sys, const ChainMap& f);

// Exactness check for one step of the system: the kernel and cokernel of the
// induced map on homology together have the dimension of the homology of the
// infinity closure.
struct TriangleCheck {
    std::size_t kernel_dim = 0;
    std::size_t cokernel_dim = 0;
    std::size_t expected = 0;
    bool ok = false;
};
TriangleCheck triangle_check(const TwistSystem& sys, int i);

}  // namespace kh

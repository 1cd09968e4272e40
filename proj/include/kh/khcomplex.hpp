// Reduced chain complexes over GF(2) from planar diagrams.
//
// Gradings: u is the homological grading, q2 is TWICE the quantum grading
// (kept doubled so that two-component closures, whose quantum gradings are
// half-integers, stay integral).  The diagonal grading is 2*delta = 2u - q2.
//
// Closed diagrams with few crossings are expanded as the full cube of
// resolutions.  Twist families closure(t, n) are built as a "twist ladder":
// one base piece for the 0-twist closure, one small piece per half twist,
// with differentials transferred through the piece reductions (homological
// perturbation).  This keeps the complex size linear in |n|.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kh/diagram.hpp"
#include "kh/f2la.hpp"

namespace kh {

inline constexpr std::size_t kDefaultCrossingCap = 24;

// Graded dimensions keyed by (u, q2).
struct GradedVectorSpace {
    std::map<std::pair<int, int>, std::size_t> dims;

    std::size_t total() const;
    std::map<int, std::size_t> by_u() const;
    void add(int u, int q2, std::size_t n = 1);
    bool operator==(const GradedVectorSpace& o) const { return dims == o.dims; }
};

struct Generator {
    std::uint64_t vertex = 0;  // resolution state (cube pieces)
    std::uint64_t labels = 0;  // bit i set = circle i carries the x label
    int piece = 0;             // ladder piece id; 0 = base piece
    int local = 0;             // index inside the piece model
    int u = 0;
    int q2 = 0;
};

// Chain complex bucketed by u; diff[u] : C^u -> C^{u+1} acting on column
// vectors in the bucket order of gens.
struct GradedComplex {
    std::map<int, std::vector<Generator>> gens;
    std::map<int, BitMatrix> diff;

    std::size_t dim(int u) const;
    std::size_t total_dim() const;
    GradedVectorSpace graded_dims() const;
    // Assert d∘d = 0 and q2-homogeneity of every differential entry.
    void check() const;
};

// Transfer data of a deformation retract onto homology: per degree u an
// inclusion H^u -> C^u, a projection C^u -> H^u and a homotopy
// hom[u] : C^u -> C^{u-1} with d∘hom + hom∘d = id - incl∘proj,
// hom∘incl = 0, proj∘hom = 0, hom∘hom = 0.
struct Reduction {
    std::map<int, BitMatrix> incl;          // dim C^u x dim H^u
    std::map<int, BitMatrix> proj;          // dim H^u x dim C^u
    std::map<int, BitMatrix> hom;           // dim C^{u-1} x dim C^u
    std::map<int, std::vector<int>> h_q2;   // q2 of each homology generator
    GradedVectorSpace homology;

    std::size_t hdim(int u) const;
};

Reduction reduce_with_transfer(const GradedComplex& c);

// Full reduced cube of resolutions of a closed diagram.
// absolute = true grades by (u = r - n_minus, q2 = deg + r + n_plus - 2 n_minus + 1);
// otherwise by the internal pair (u = r, q2 = deg + r) used for ladder pieces.
GradedComplex cube_complex(const PlanarDiagram& d, bool absolute, std::size_t crossing_cap);

// The closure family of one sutured tangle: complexes of closure(t, n) for
// every level n, sharing reduced piece models across levels.
class TwistSystem {
public:
    TwistSystem(SuturedTangle t, std::size_t crossing_cap = kDefaultCrossingCap);

    const SuturedTangle& tangle() const { return t_; }
    std::size_t crossing_cap() const { return cap_; }

    // Homotopy-reduced model of the complex of closure(t, n), absolute gradings.
    const GradedComplex& level_complex(int n) const;
    const Reduction& level_reduction(int n) const;

    // Total homology dimension of closure_infinity(t).
    std::size_t infinity_total_dim() const;

    // Pieces present in the level-n ladder (0 plus 1..n or -1..n).
    static std::vector<int> pieces_of_level(int n);

    struct Impl;
    const Impl& impl() const { return *impl_; }

private:
    SuturedTangle t_;
    std::size_t cap_;
    std::shared_ptr<Impl> impl_;
};

GradedVectorSpace homology(const SuturedTangle& t, int n,
                           std::size_t crossing_cap = kDefaultCrossingCap);

// Graded Euler characteristic sum_u (-1)^u dim t^{q2/2}, rendered with
// descending exponents, e.g. "t^-4 + t^-6 - t^-10".
std::string jones_polynomial(const GradedVectorSpace& v);

// |evaluation of the graded Euler characteristic at t^(1/2) = i|.
long long determinant(const GradedVectorSpace& v);

// True when every generator sits on a single 2*delta diagonal.
bool is_thin(const GradedVectorSpace& v);

// Grid of dimensions, rows 2*delta descending, columns u ascending.
std::string tsv_table(const GradedVectorSpace& v);
std::string json_table(const GradedVectorSpace& v);

}  // namespace kh

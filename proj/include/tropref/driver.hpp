#pragma once

#include "tropref/laurent.hpp"
#include "tropref/menelaus.hpp"
#include "tropref/tropcurve.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace tropref {

// A grafting set: pairwise disjoint nonempty proper subsets of the degree's
// element indices with nonzero sum and a proper union.
struct GraftSet {
    std::vector<std::vector<int>> subsets;

    bool empty() const { return subsets.empty(); }
};

std::vector<GraftSet> enumerate_H(const DegreeSpec& degree);

// One item of the cyclic data: a grafted sum vector with its completing line
// (sign -1), or a plain degree element with its own line (sign +1).
struct WalkItem {
    LatticeVector vector;
    OrientedLine line;
    int sign = 1;
    int subset = -1;   // index into GraftSet::subsets, or -1
    int element = -1;  // degree element index for ungrafted items
};

std::vector<WalkItem> walk_items(const GraftSet& H, const DegreeSpec& degree,
                                 const std::vector<OrientedLine>& lines);

CycleData assemble_O(const std::vector<WalkItem>& items, const std::vector<int>& order,
                     const LatticeVector& b, const RatPoint& x0);

// Depth-first scan over all orderings of the items and all b in vset, pruned
// by the walk's stop rules.  `on_state` sees every reached walk state
// (x_k, b_k); `on_success` sees every cyclic datum together with its curve.
// Either callback may be null.
void scan_couples(
    const std::vector<WalkItem>& items, const std::vector<LatticeVector>& vset, const RatPoint& x0,
    const std::function<void(const std::vector<int>&, const LatticeVector&,
                             const ParamTropicalCurve&)>& on_success,
    const std::function<void(const RatPoint&, const LatticeVector&)>& on_state);

struct G1Options {
    InitialDataOptions initial;
    bool collect_curves = false;
};

struct G1Result {
    LaurentPoly value;
    bool empty_vset = false;
    InitialData data;                       // the certified scene that was used
    std::vector<ParamTropicalCurve> curves; // filled when collect_curves is set
    std::vector<LaurentPoly> curve_factors; // product of G0(hat) per curve
};

G1Result g1_full(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                 const G1Options& opts = {});

inline LaurentPoly g1(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                      const G1Options& opts = {}) {
    return g1_full(degree, parity, seed, opts).value;
}

// Replaces grafted ends of a cycle-procedure curve by rational fragments; the
// fragment for subset k must have its end of direction -c(subset k) passing
// through the corresponding cycle vertex.
ParamTropicalCurve graft(const ParamTropicalCurve& T_O, const std::vector<WalkItem>& items,
                         const std::vector<int>& order,
                         const std::vector<std::pair<int, ParamTropicalCurve>>& fragments);

}  // namespace tropref

#pragma once

#include "tropref/laurent.hpp"
#include "tropref/menelaus.hpp"
#include "tropref/tropcurve.hpp"

#include <cstdint>
#include <vector>

namespace tropref {

// Brute-force enumeration of simple rational curves of the given degree whose
// labeled ends lie on the given lines (one line per degree element, aligned).
// Exhausts labeled trivalent trees and solves the exact linear system per
// combinatorial type.
std::vector<ParamTropicalCurve> enumerate_rational_curves(
    const std::vector<LatticeVector>& degree_vectors, const std::vector<OrientedLine>& lines);

// Refined rational invariant via seeded generic constraints.
LaurentPoly g0(const DegreeSpec& degree, std::uint64_t seed);

// All simple elliptic curves of the degree and parity matching the extended
// constraint (lines, x0); genus-1 combinatorial types are exhausted.
std::vector<ParamTropicalCurve> enumerate_elliptic_curves(const DegreeSpec& degree, Parity parity,
                                                          const std::vector<OrientedLine>& lines,
                                                          const RatPoint& x0);

// Independent computation of the refined elliptic invariant.
LaurentPoly g1_oracle(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                      const InitialDataOptions& opts = {});

// Seeded Menelaus constraint used by g0; exposed for tests.
std::vector<OrientedLine> seeded_menelaus_lines(const std::vector<LatticeVector>& degree_vectors,
                                                std::uint64_t seed);

}  // namespace tropref

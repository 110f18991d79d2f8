#pragma once

#include "tropref/lattice.hpp"
#include "tropref/numeric.hpp"
#include "tropref/tropcurve.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace tropref {

// Affine line directed by `direction`; lambda_a(x) = a.y*x1 - a.x*x2 is
// constant on it and equals `value`.
struct OrientedLine {
    LatticeVector direction;
    Rat value;

    Rat lambda_at(const RatPoint& p) const {
        return Rat(direction.y) * p.x - Rat(direction.x) * p.y;
    }
    bool contains(const RatPoint& p) const { return lambda_at(p) == value; }
};

std::pair<std::vector<Rat>, Rat> lambda_and_menelaus(const std::vector<OrientedLine>& lines);

// The unique line directed by sum(vectors of the subset) completing the
// subset's lines to a Menelaus family.
OrientedLine completing_line(const std::vector<LatticeVector>& subset_vectors,
                             const std::vector<OrientedLine>& subset_lines);

// ---------------------------------------------------------------------------

struct HalfPlane {
    LatticeVector gradient;  // constraint: <gradient, x> > 0 and <gradient,x>^2 >= |gradient|^2
};

struct InitialData {
    DegreeSpec degree;
    Parity parity{0, 1};
    Rat rho0;
    std::vector<OrientedLine> lines;  // one per degree element, same order
    // K: the closed convex sector component, described by half-planes carved
    // from the unit-size tubular neighborhoods of the direction family.
    LatticeVector k_ray1, k_ray2;  // bounding ray primitives, counter-clockwise
    std::vector<HalfPlane> k_halfplanes;
    int k_component = 0;       // index among the angular sectors
    int k_component_count = 0;
    std::vector<LatticeVector> vset;  // admissible cycle-edge vectors through x0
    RatPoint x0;
    std::uint64_t seed = 0;
    bool admissibility_overridden = false;

    bool k_contains(const RatPoint& p) const;
};

struct InitialDataResult {
    std::optional<InitialData> data;
    bool empty_vset = false;  // no candidate b of the required parity at all
};

struct InitialDataOptions {
    bool allow_non_admissible = false;
    // Sector override for the invariance tests; -1 picks from the seed.
    int k_component = -1;
};

InitialDataResult build_initial_data(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                                     const InitialDataOptions& opts = {});

// ---------------------------------------------------------------------------

struct CycleData {
    std::vector<LatticeVector> vectors;
    std::vector<OrientedLine> lines;
    std::vector<int> signs;  // +-1
    RatPoint x0;
    LatticeVector b;
};

struct Stopped {
    int step = 0;  // 1-based step at which the walk stopped
    enum class Reason { RayMiss, SignViolation, NoClosure } reason = Reason::RayMiss;
};

using CycleOutcome = std::variant<ParamTropicalCurve, Stopped>;

// Runs the cycle walk.  Throws DegenerateWedge when a required wedge
// vanishes and GeneralPositionFailure on degenerate incidences.
CycleOutcome cycle_procedure(const CycleData& data);

// One step of the walk, shared with the certification scan: intersects
// R(x, b_cur) with `line` and applies the stop rules.
struct StepResult {
    bool stopped = false;
    Stopped::Reason reason = Stopped::Reason::RayMiss;
    RatPoint next;
};

StepResult cycle_step(const RatPoint& x, const LatticeVector& b_cur, const LatticeVector& a_next,
                      int sign_next, const OrientedLine& line);

}  // namespace tropref

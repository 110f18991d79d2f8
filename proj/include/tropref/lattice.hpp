#pragma once

#include "tropref/errors.hpp"
#include "tropref/numeric.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace tropref {

// Integer vector of the plane lattice.
struct LatticeVector {
    Int x;
    Int y;

    bool is_zero() const { return x == 0 && y == 0; }
    LatticeVector operator+(const LatticeVector& o) const { return {x + o.x, y + o.y}; }
    LatticeVector operator-(const LatticeVector& o) const { return {x - o.x, y - o.y}; }
    LatticeVector operator-() const { return {-x, -y}; }
    LatticeVector operator*(const Int& s) const { return {x * s, y * s}; }
    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

    // Total order used for canonical forms.
    friend bool operator<(const LatticeVector& a, const LatticeVector& b) {
        if (a.x != b.x) return a.x < b.x;
        return a.y < b.y;
    }
};

using Parity = std::pair<int, int>;  // coordinates mod 2

// a.x*b.y - a.y*b.x
Int wedge(const LatticeVector& a, const LatticeVector& b);

// Counter-clockwise rotation by pi/2: (x,y) -> (-y,x).
inline LatticeVector rotate_ccw(const LatticeVector& a) { return {-a.y, a.x}; }
// Clockwise rotation by pi/2: (x,y) -> (y,-x).
inline LatticeVector rotate_cw(const LatticeVector& a) { return {a.y, -a.x}; }

// gcd(|x|,|y|) of a nonzero vector.
Int lattice_length(const LatticeVector& a);

// a = lattice_length(a) * primitive; parity is the primitive's coordinates mod 2.
std::pair<LatticeVector, Parity> primitive_and_parity(const LatticeVector& a);

inline Parity parity_of(const LatticeVector& a) {
    return {static_cast<int>(a.x & 1), static_cast<int>(a.y & 1)};
}

// Convex lattice polygon, counter-clockwise, no three collinear consecutive
// vertices.  Metrics are derived on construction; areas are stored doubled so
// that everything stays integral.
struct LatticePolygon {
    std::vector<LatticeVector> vertices;
    Int doubled_area = 0;      // 2 * Euclidean area
    Int lattice_perimeter = 0; // sum of lattice lengths of the sides
    Int interior_count = 0;    // interior lattice points
    Int boundary_count = 0;    // boundary lattice points

    static LatticePolygon from_vertices(std::vector<LatticeVector> vs);
};

// Interior lattice points of p whose coordinate parity equals `par`.
Int interior_points_with_parity(const LatticePolygon& p, Parity par);

// All lattice points of p (interior and boundary).
std::vector<LatticeVector> lattice_points(const LatticePolygon& p);

// Newton polygon of a balanced non-degenerate multiset: its edges are the
// vectors rotated counter-clockwise by pi/2, concatenated in angular order,
// translated so the lexicographically minimal vertex is the origin.
LatticePolygon newton_polygon(const std::vector<LatticeVector>& vectors);

// Validated toric degree.  The multiset order is preserved: element i keeps
// its own constraint line downstream.
struct DegreeSpec {
    std::vector<LatticeVector> vectors;
    LatticePolygon polygon;
    bool is_even = false;
    Int half_interior_count = 0;  // I(1/2 Delta); meaningful for even degrees

    Int doubled_area() const { return polygon.doubled_area; }
    // Euclidean area A(Delta); integral for even degrees.
    Int area() const { return polygon.doubled_area / 2; }
};

DegreeSpec validate_degree(const std::vector<LatticeVector>& vectors, bool require_even);

// Number of sides of the Newton polygon whose primitive outer normal has the
// given parity (the admissibility count).
int sides_with_normal_parity(const DegreeSpec& d, Parity par);

}  // namespace tropref

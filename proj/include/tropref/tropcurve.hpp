#pragma once

#include "tropref/lattice.hpp"
#include "tropref/numeric.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tropref {

struct CurveVertex {
    RatPoint pos;
};

// Bounded edge, oriented v1 -> v2 for bookkeeping only.  The weighted
// direction vector is weight * primitive.
struct CurveEdge {
    int v1 = -1;
    int v2 = -1;
    Int weight = 1;
    LatticeVector primitive;

    LatticeVector dirvec() const { return primitive * weight; }
};

// Unbounded end attached to a vertex; `vector` is its degree vector, so the
// weight is its lattice length and the direction its primitive.
struct CurveEnd {
    int vertex = -1;
    LatticeVector vector;
};

struct MarkedPoint {
    int edge = -1;
    Rat t;  // position on the edge: pos(v1) + t * (pos(v2) - pos(v1)), 0 < t < 1
};

struct ParamTropicalCurve {
    std::vector<CurveVertex> vertices;
    std::vector<CurveEdge> edges;
    std::vector<CurveEnd> ends;
    std::optional<MarkedPoint> marked;

    RatPoint marked_pos() const;
    std::vector<LatticeVector> degree() const;
    // Exact canonical serialization; equal strings <=> equal curves.
    std::string canonical_key() const;
};

// Checks that indices are in range, weights positive, primitives primitive,
// edge geometry consistent with the stored direction, and the marked point in
// the open edge.  Throws on violation.
void validate_curve_structure(const ParamTropicalCurve& T);

struct BalanceReport {
    bool ok = true;
    int bad_vertex = -1;
    std::string message;
};

BalanceReport check_balancing(const ParamTropicalCurve& T);

struct GenusSimplicity {
    int genus = 0;
    bool simple = false;
    std::string why_not_simple;
};

GenusSimplicity genus_and_simplicity(const ParamTropicalCurve& T);

enum class ParityStatus { HasParity, NoOddEdges, Mixed };

struct CurveParity {
    ParityStatus status = ParityStatus::NoOddEdges;
    Parity parity{0, 0};
};

CurveParity curve_parity(const ParamTropicalCurve& T);

// ---------------------------------------------------------------------------
// Dual subdivision

enum class CellKind { Triangle, Parallelogram };

struct DualCell {
    CellKind kind = CellKind::Triangle;
    LatticePolygon poly;
    int owner = -1;  // vertex index for triangles, crossing index for parallelograms
};

struct ImageCrossing {
    // Pieces are indexed 0..E-1 for bounded edges, then E..E+#ends-1 for ends.
    int piece1 = -1;
    int piece2 = -1;
    RatPoint point;
};

// Lattice segment of the subdivision dual to one arrangement sub-edge of a
// curve piece.
struct DualSegment {
    int piece = -1;
    LatticeVector from;
    LatticeVector to;
};

struct DualSubdivision {
    LatticePolygon newton;
    std::vector<DualCell> cells;  // triangles in vertex order, then parallelograms
    std::vector<ImageCrossing> crossings;
    std::vector<DualSegment> segments;

    const DualCell& triangle_of(int vertex) const;
};

DualSubdivision dual_subdivision(const ParamTropicalCurve& T);

// ---------------------------------------------------------------------------
// Cycle / tree decomposition (genus 1)

struct TreeOfVertex {
    int root = -1;                // cycle vertex
    std::vector<int> vertices;    // tree vertices, root excluded
    std::vector<int> tree_edges;  // bounded edges off the cycle
    std::vector<int> tree_ends;   // ends hanging on the tree (root's own end included)
};

struct CycleDecomposition {
    std::vector<int> cycle_vertices;  // in cyclic order
    std::vector<int> cycle_edges;     // cycle_edges[k] joins cycle_vertices[k] and [k+1]
    bool cycle_odd = false;           // all cycle edges odd (parity curve) vs all even
    std::vector<TreeOfVertex> trees;  // one per cycle vertex, aligned with cycle_vertices

    int tree_index_of_vertex(int v) const;  // which tree a vertex belongs to, root included
};

CycleDecomposition decompose_cycle_and_trees(const ParamTropicalCurve& T);

// ---------------------------------------------------------------------------
// Triangle classification

enum class TriangleKind { Even, OddMobile, OddNonMobile };

struct TriangleClass {
    TriangleKind kind = TriangleKind::Even;
    Parity theta{0, 0};  // common parity of the distinguished cell vertices
};

struct CellClassification {
    std::vector<std::optional<TriangleClass>> triangle_class;  // by curve vertex index
    std::vector<int> parallelogram_all_odd;                    // crossing indices, all sides odd
    Parity curve_par{0, 0};
};

CellClassification classify_cells(const ParamTropicalCurve& T, const CycleDecomposition& dec,
                                  const DualSubdivision& dual);

}  // namespace tropref

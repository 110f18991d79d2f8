#pragma once

#include "tropref/laurent.hpp"
#include "tropref/tropcurve.hpp"

#include <vector>

namespace tropref {

// Cycle orientation plus one orientation per triangle; +1 means the canonical
// (counter-clockwise) orientation.  Orientations of non-mobile odd triangles
// are forced by the cycle orientation.
struct OrientationKit {
    int cycle_orientation = 1;
    std::vector<int> tri_sign;  // indexed by curve vertex
};

struct KitStatistics {
    Int kappa_doubled = 0;       // 2 * kappa(R)
    Int area_minus_kappa_quarter = 0;  // (A(Delta) - kappa)/4
    Int half_interior = 0;       // I(1/2 Delta)
    Int pi_T = 0;                // all-odd parallelograms
    Int zeta_even_com = 0;
    Int zeta_even_ncom = 0;
    Int zeta_odd_nmob = 0;
    Int zeta_odd_com = 0;
    Int zeta_odd_ncom = 0;
    Int tau_bound = 0;
    Int tau_ends = 0;
    Int negative_vertices = 0;   // N_T(R)
    Int a_T_doubled = 0;         // 2 * signed area of non-mobile odd triangles
    Int n_nonmobile_negative = 0;
    Int s_value = 0;             // s(R)
};

// Precomputed data for kit enumeration over one simple elliptic curve of
// parity (alpha, beta).
class KitContext {
  public:
    static KitContext build(const ParamTropicalCurve& T);

    const ParamTropicalCurve& curve() const { return *T_; }
    const CycleDecomposition& decomposition() const { return dec_; }
    const DualSubdivision& dual() const { return dual_; }
    const CellClassification& classification() const { return cls_; }
    Parity parity() const { return cls_.curve_par; }
    const DegreeSpec& degree() const { return degree_; }

    std::vector<OrientationKit> enumerate_kits() const;

    // kappa(R) as a doubled integer (it is in fact an integer for these curves).
    Int quantum_index(const OrientationKit& kit) const;

    // Both sign computations; throws InternalInconsistency if they disagree.
    std::pair<int, int> welschinger_sign(const OrientationKit& kit, KitStatistics* stats = nullptr) const;

    LaurentPoly refined_multiplicity_sum() const;
    LaurentPoly refined_multiplicity_closed() const;

    // Sign of the local orientation induced at cycle vertex v by the cycle
    // orientation `o` (+1 for the stored cyclic order).
    int induced_sign(int vertex, int o) const;

    bool is_cycle_vertex(int v) const { return cycle_pos_[v] >= 0; }
    TriangleKind kind_of(int v) const { return cls_.triangle_class[v]->kind; }

  private:
    const ParamTropicalCurve* T_ = nullptr;
    CycleDecomposition dec_;
    DualSubdivision dual_;
    CellClassification cls_;
    DegreeSpec degree_;
    std::vector<int> cycle_pos_;      // vertex -> position in cycle, -1 off cycle
    std::vector<int> induced_plus_;   // vertex -> induced sign for o = +1 (cycle vertices)
    std::vector<Int> tri_area2_;      // vertex -> doubled triangle area
    std::vector<int> free_vertices_;  // even + mobile odd, enumeration order
};

// Convenience wrappers matching the operation surface.
std::vector<OrientationKit> enumerate_kits(const ParamTropicalCurve& T);
LaurentPoly refined_multiplicity_sum(const ParamTropicalCurve& T);
LaurentPoly refined_multiplicity_closed(const ParamTropicalCurve& T);

}  // namespace tropref

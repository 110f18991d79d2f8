#include "tropref/orientkit.hpp"

#include <algorithm>

namespace tropref {

namespace {

// True iff q lies strictly counter-clockwise between p and r (all nonzero,
// p and r not parallel).
bool ccw_between(const LatticeVector& p, const LatticeVector& q, const LatticeVector& r) {
    Int pr = wedge(p, r);
    if (pr == 0) fail(Err::InternalInconsistency, "degenerate ray pair in orientation rule");
    if (pr > 0) return wedge(p, q) > 0 && wedge(q, r) > 0;
    return wedge(p, q) > 0 || wedge(q, r) > 0;
}

}  // namespace

KitContext KitContext::build(const ParamTropicalCurve& T) {
    KitContext ctx;
    ctx.T_ = &T;
    CurveParity cp = curve_parity(T);
    if (cp.status != ParityStatus::HasParity)
        fail(Err::NoParity, "orientation kits need a curve of parity");
    ctx.dec_ = decompose_cycle_and_trees(T);
    if (!ctx.dec_.cycle_odd) fail(Err::NoParity, "cycle of even weights has no parity");
    ctx.dual_ = dual_subdivision(T);
    ctx.cls_ = classify_cells(T, ctx.dec_, ctx.dual_);
    ctx.degree_ = validate_degree(T.degree(), /*require_even=*/false);

    int V = static_cast<int>(T.vertices.size());
    ctx.cycle_pos_.assign(V, -1);
    int m = static_cast<int>(ctx.dec_.cycle_vertices.size());
    for (int k = 0; k < m; ++k) ctx.cycle_pos_[ctx.dec_.cycle_vertices[k]] = k;

    ctx.tri_area2_.assign(V, Int(0));
    for (const auto& cell : ctx.dual_.cells)
        if (cell.kind == CellKind::Triangle) ctx.tri_area2_[cell.owner] = cell.poly.doubled_area;

    // Induced sign at each cycle vertex for cycle orientation +1.
    ctx.induced_plus_.assign(V, 0);
    auto oriented_dir = [&](int edge, int from) {
        const CurveEdge& e = T.edges[edge];
        return e.v1 == from ? e.dirvec() : -e.dirvec();
    };
    for (int k = 0; k < m; ++k) {
        int v = ctx.dec_.cycle_vertices[k];
        int e_in = ctx.dec_.cycle_edges[(k + m - 1) % m];
        int e_out = ctx.dec_.cycle_edges[k];
        LatticeVector d_in = -oriented_dir(e_in, v);   // direction of travel into v
        LatticeVector d_out = oriented_dir(e_out, v);  // direction of travel out of v
        // Outward direction of the even branch at v (tree edge or end).
        LatticeVector stem{0, 0};
        bool found = false;
        for (size_t e = 0; e < T.edges.size(); ++e) {
            if (static_cast<int>(e) == e_in || static_cast<int>(e) == e_out) continue;
            if (T.edges[e].v1 == v || T.edges[e].v2 == v) {
                stem = oriented_dir(static_cast<int>(e), v);
                found = true;
            }
        }
        if (!found)
            for (const auto& end : T.ends)
                if (end.vertex == v) {
                    stem = end.vector;
                    found = true;
                }
        if (!found) fail(Err::InternalInconsistency, "cycle vertex without a third branch");
        // Local orientation from the cyclic order (incoming edge, stem,
        // outgoing edge) of the rays at v; the incoming edge's ray points
        // backwards.
        ctx.induced_plus_[v] = ccw_between(-d_in, stem, d_out) ? 1 : -1;
    }

    for (int v = 0; v < V; ++v) {
        const auto& tc = ctx.cls_.triangle_class[v];
        if (!tc) fail(Err::InternalInconsistency, "vertex without a triangle class");
        if (tc->kind != TriangleKind::OddNonMobile) ctx.free_vertices_.push_back(v);
    }
    if (ctx.free_vertices_.size() > 24)
        fail(Err::InternalInconsistency, "kit enumeration too large");
    return ctx;
}

int KitContext::induced_sign(int vertex, int o) const {
    int s = induced_plus_[vertex];
    if (s == 0) fail(Err::InternalInconsistency, "induced sign of a non-cycle vertex");
    return o > 0 ? s : -s;
}

std::vector<OrientationKit> KitContext::enumerate_kits() const {
    int V = static_cast<int>(T_->vertices.size());
    std::vector<OrientationKit> kits;
    size_t free_n = free_vertices_.size();
    kits.reserve(2u << free_n);
    for (int o : {1, -1}) {
        for (size_t mask = 0; mask < (1u << free_n); ++mask) {
            OrientationKit kit;
            kit.cycle_orientation = o;
            kit.tri_sign.assign(V, 0);
            for (int v = 0; v < V; ++v)
                if (cls_.triangle_class[v]->kind == TriangleKind::OddNonMobile)
                    kit.tri_sign[v] = induced_sign(v, o);
            for (size_t i = 0; i < free_n; ++i)
                kit.tri_sign[free_vertices_[i]] = (mask >> i) & 1 ? -1 : 1;
            kits.push_back(std::move(kit));
        }
    }
    return kits;
}

Int KitContext::quantum_index(const OrientationKit& kit) const {
    Int k2 = 0;
    for (size_t v = 0; v < tri_area2_.size(); ++v) k2 += Int(kit.tri_sign[v]) * tri_area2_[v];
    return k2;
}

std::pair<int, int> KitContext::welschinger_sign(const OrientationKit& kit,
                                                 KitStatistics* stats_out) const {
    const ParamTropicalCurve& T = *T_;
    KitStatistics st;
    st.kappa_doubled = quantum_index(kit);
    st.half_interior = degree_.half_interior_count;
    Int diff = degree_.doubled_area() - st.kappa_doubled;  // 2(A - kappa)
    if (diff % 8 != 0)
        fail(Err::InternalInconsistency, "A(Delta) - kappa(R) is not divisible by 4");
    st.area_minus_kappa_quarter = diff / 8;
    st.pi_T = Int(cls_.parallelogram_all_odd.size());

    Parity ab = cls_.curve_par;
    auto harnack = [&](int v, bool twisted) -> Int {
        const DualCell& cell = dual_.triangle_of(v);
        Parity theta = cls_.triangle_class[v]->theta;
        Parity want = theta;
        if (twisted) want = {(theta.first + ab.second) % 2, (theta.second + ab.first) % 2};
        return interior_points_with_parity(cell.poly, want);
    };

    // Compatibility: a mobile odd vertex is compatible when the kit agrees with
    // the orientation induced by the cycle orientation; an even vertex inherits
    // the compatibility of the mobile root of its tree (and is compatible in
    // every other case).
    auto mobile_compatible = [&](int v) {
        return kit.tri_sign[v] == induced_sign(v, kit.cycle_orientation);
    };
    auto even_compatible = [&](int v) {
        int ti = dec_.tree_index_of_vertex(v);
        if (ti < 0) fail(Err::InternalInconsistency, "even vertex outside all trees");
        int root = dec_.trees[ti].root;
        if (cls_.triangle_class[root]->kind == TriangleKind::OddMobile && !mobile_compatible(root))
            return false;
        return true;
    };

    int V = static_cast<int>(T.vertices.size());
    for (int v = 0; v < V; ++v) {
        switch (cls_.triangle_class[v]->kind) {
            case TriangleKind::Even:
                if (even_compatible(v))
                    st.zeta_even_com += harnack(v, false);
                else
                    st.zeta_even_ncom += harnack(v, true);
                break;
            case TriangleKind::OddNonMobile:
                st.zeta_odd_nmob += harnack(v, false);
                break;
            case TriangleKind::OddMobile:
                if (mobile_compatible(v))
                    st.zeta_odd_com += harnack(v, false);
                else
                    st.zeta_odd_ncom += harnack(v, true);
                break;
        }
        if (kit.tri_sign[v] < 0) ++st.negative_vertices;
        if (cls_.triangle_class[v]->kind == TriangleKind::OddNonMobile) {
            st.a_T_doubled += Int(kit.tri_sign[v]) * tri_area2_[v];
            if (kit.tri_sign[v] < 0) ++st.n_nonmobile_negative;
        }
    }

    auto content = [](const Int& weight) { return (weight - 1) / 2; };
    for (const auto& e : T.edges)
        if (kit.tri_sign[e.v1] == kit.tri_sign[e.v2]) st.tau_bound += content(e.weight);
    for (const auto& e : T.ends)
        if (kit.tri_sign[e.vertex] < 0) st.tau_ends += content(lattice_length(e.vector));

    st.s_value = st.half_interior + st.area_minus_kappa_quarter + st.pi_T + st.zeta_even_com +
                 st.zeta_even_ncom + st.zeta_odd_nmob + st.zeta_odd_com + st.zeta_odd_ncom +
                 st.tau_bound + st.tau_ends;

    int sign_formula = (st.s_value % 2 == 0) ? 1 : -1;
    int sign_vertexcount = (st.negative_vertices % 2 == 0) ? 1 : -1;
    if (sign_formula != sign_vertexcount)
        fail(Err::InternalInconsistency,
             "Welschinger sign formula disagrees with the negative-vertex count");
    if (stats_out) *stats_out = st;
    return {sign_formula, sign_vertexcount};
}

LaurentPoly KitContext::refined_multiplicity_sum() const {
    LaurentPoly acc;
    for (const auto& kit : enumerate_kits()) {
        auto [sf, sv] = welschinger_sign(kit);
        acc += LaurentPoly::monomial(sf, static_cast<std::int64_t>(quantum_index(kit)));
    }
    return acc;
}

LaurentPoly KitContext::refined_multiplicity_closed() const {
    // First factor: the two cycle orientations with all even and mobile odd
    // triangles positive.
    LaurentPoly head;
    for (int o : {1, -1}) {
        Int a2 = 0;
        Int n_neg = 0;
        for (int v : dec_.cycle_vertices) {
            if (cls_.triangle_class[v]->kind != TriangleKind::OddNonMobile) continue;
            int s = induced_sign(v, o);
            a2 += Int(s) * tri_area2_[v];
            if (s < 0) ++n_neg;
        }
        int sign = (n_neg % 2 == 0) ? 1 : -1;
        head += LaurentPoly::monomial(sign, static_cast<std::int64_t>(a2));
    }
    LaurentPoly acc = head;
    for (int v : free_vertices_) acc *= LaurentPoly::area_factor(tri_area2_[v]);
    return acc;
}

std::vector<OrientationKit> enumerate_kits(const ParamTropicalCurve& T) {
    return KitContext::build(T).enumerate_kits();
}

LaurentPoly refined_multiplicity_sum(const ParamTropicalCurve& T) {
    return KitContext::build(T).refined_multiplicity_sum();
}

LaurentPoly refined_multiplicity_closed(const ParamTropicalCurve& T) {
    return KitContext::build(T).refined_multiplicity_closed();
}

}  // namespace tropref

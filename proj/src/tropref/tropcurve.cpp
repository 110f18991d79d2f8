#include "tropref/tropcurve.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace tropref {

namespace {

Rat wedge_r(const RatPoint& a, const RatPoint& b) { return a.x * b.y - a.y * b.x; }

RatPoint to_rat(const LatticeVector& v) { return {Rat(v.x), Rat(v.y)}; }

}  // namespace

RatPoint ParamTropicalCurve::marked_pos() const {
    if (!marked) fail(Err::InvalidVector, "curve has no marked point");
    const CurveEdge& e = edges.at(marked->edge);
    RatPoint a = vertices.at(e.v1).pos;
    RatPoint b = vertices.at(e.v2).pos;
    return a + marked->t * (b - a);
}

std::vector<LatticeVector> ParamTropicalCurve::degree() const {
    std::vector<LatticeVector> d;
    d.reserve(ends.size());
    for (const auto& e : ends) d.push_back(e.vector);
    return d;
}

std::string ParamTropicalCurve::canonical_key() const {
    // Sort vertices by position; relabel everything accordingly.
    std::vector<int> order(vertices.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return lex_less(vertices[a].pos, vertices[b].pos);
    });
    std::vector<int> rank(vertices.size());
    for (size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    std::ostringstream out;
    out << "V";
    for (int i : order)
        out << "(" << rat_to_string(vertices[i].pos.x) << "," << rat_to_string(vertices[i].pos.y)
            << ")";
    std::vector<std::string> edge_keys;
    for (const auto& e : edges) {
        int a = rank[e.v1], b = rank[e.v2];
        LatticeVector p = e.primitive;
        if (a > b) {
            std::swap(a, b);
            p = -p;
        }
        std::ostringstream k;
        k << a << "-" << b << "w" << e.weight << "d" << p.x << "," << p.y;
        edge_keys.push_back(k.str());
    }
    std::sort(edge_keys.begin(), edge_keys.end());
    out << "E";
    for (const auto& k : edge_keys) out << "[" << k << "]";
    std::vector<std::string> end_keys;
    for (const auto& e : ends) {
        std::ostringstream k;
        k << rank[e.vertex] << "a" << e.vector.x << "," << e.vector.y;
        end_keys.push_back(k.str());
    }
    std::sort(end_keys.begin(), end_keys.end());
    out << "L";
    for (const auto& k : end_keys) out << "[" << k << "]";
    if (marked) {
        RatPoint m = marked_pos();
        out << "M(" << rat_to_string(m.x) << "," << rat_to_string(m.y) << ")";
    }
    return out.str();
}

void validate_curve_structure(const ParamTropicalCurve& T) {
    int V = static_cast<int>(T.vertices.size());
    if (V == 0) fail(Err::InvalidVector, "curve without vertices");
    for (const auto& e : T.edges) {
        if (e.v1 < 0 || e.v1 >= V || e.v2 < 0 || e.v2 >= V || e.v1 == e.v2)
            fail(Err::InvalidVector, "edge endpoints out of range");
        if (e.weight <= 0) fail(Err::InvalidVector, "edge weight must be positive");
        if (e.primitive.is_zero() || lattice_length(e.primitive) != 1)
            fail(Err::InvalidVector, "edge direction must be primitive");
        RatPoint d = T.vertices[e.v2].pos - T.vertices[e.v1].pos;
        RatPoint p = to_rat(e.primitive);
        if (wedge_r(d, p) != 0) fail(Err::InvalidVector, "edge segment not parallel to direction");
        Rat along = (p.x != 0) ? d.x / p.x : d.y / p.y;
        if (along <= 0) fail(Err::InvalidVector, "edge segment runs against its direction");
    }
    for (const auto& e : T.ends) {
        if (e.vertex < 0 || e.vertex >= V) fail(Err::InvalidVector, "end vertex out of range");
        if (e.vector.is_zero()) fail(Err::InvalidVector, "end with zero degree vector");
    }
    if (T.marked) {
        if (T.marked->edge < 0 || T.marked->edge >= static_cast<int>(T.edges.size()))
            fail(Err::InvalidVector, "marked edge out of range");
        if (!(T.marked->t > 0 && T.marked->t < 1))
            fail(Err::InvalidVector, "marked point not in the open edge");
    }
}

BalanceReport check_balancing(const ParamTropicalCurve& T) {
    if (T.vertices.empty()) return {false, -1, "curve without vertices"};
    std::vector<LatticeVector> sum(T.vertices.size(), LatticeVector{0, 0});
    for (const auto& e : T.edges) {
        sum[e.v1] = sum[e.v1] + e.dirvec();
        sum[e.v2] = sum[e.v2] - e.dirvec();
    }
    for (const auto& e : T.ends) sum[e.vertex] = sum[e.vertex] + e.vector;
    for (size_t v = 0; v < sum.size(); ++v)
        if (!sum[v].is_zero())
            return {false, static_cast<int>(v), "balancing violated at vertex"};
    return {};
}

namespace {

// Arrangement piece: bounded edges first, then ends.
struct Piece {
    RatPoint base;
    RatPoint full;        // segment: displacement to the far endpoint; ray: direction
    bool is_ray = false;
    int va = -1, vb = -1; // incident vertices (vb = -1 for rays)
    LatticeVector dirvec; // weighted integer direction, along `full`
    Int weight;
};

std::vector<Piece> make_pieces(const ParamTropicalCurve& T) {
    std::vector<Piece> ps;
    for (const auto& e : T.edges) {
        Piece p;
        p.base = T.vertices[e.v1].pos;
        p.full = T.vertices[e.v2].pos - T.vertices[e.v1].pos;
        p.is_ray = false;
        p.va = e.v1;
        p.vb = e.v2;
        p.dirvec = e.dirvec();
        p.weight = e.weight;
        ps.push_back(std::move(p));
    }
    for (const auto& e : T.ends) {
        Piece p;
        p.base = T.vertices[e.vertex].pos;
        p.full = to_rat(e.vector);
        p.is_ray = true;
        p.va = e.vertex;
        p.dirvec = e.vector;
        p.weight = lattice_length(e.vector);
        ps.push_back(std::move(p));
    }
    return ps;
}

bool param_valid(const Piece& p, const Rat& t, bool strict) {
    if (strict) return t > 0 && (p.is_ray || t < 1);
    return t >= 0 && (p.is_ray || t <= 1);
}

struct PairHit {
    bool crossing = false;  // proper interior crossing
    RatPoint point;
    Rat t1, t2;
};

// Exact intersection analysis of two pieces; throws NotSimple on overlaps and
// on endpoint contacts that are not a shared vertex.
std::optional<PairHit> intersect_pieces(const std::vector<Piece>& ps, int i, int j) {
    const Piece& a = ps[i];
    const Piece& b = ps[j];
    bool share_vertex = (a.va == b.va) || (a.va == b.vb && b.vb >= 0) ||
                        (a.vb >= 0 && a.vb == b.va) || (a.vb >= 0 && a.vb >= 0 && a.vb == b.vb);
    Rat den = wedge_r(a.full, b.full);
    if (den == 0) {
        // Parallel; check for collinear overlap.
        if (wedge_r(b.base - a.base, a.full) != 0) return std::nullopt;
        // Collinear: parameterize b's endpoints on a.
        auto param_on_a = [&](const RatPoint& q) -> Rat {
            RatPoint d = q - a.base;
            return (a.full.x != 0) ? d.x / a.full.x : d.y / a.full.y;
        };
        Rat lo = param_on_a(b.base);
        bool same_dir = (a.full.x != 0) ? (b.full.x / a.full.x > 0) : (b.full.y / a.full.y > 0);
        Rat a_lo(0), a_hi(1);
        bool a_unb = a.is_ray, b_unb = b.is_ray;
        // Intervals on a's parameter axis: a covers [0, 1] or [0, inf);
        // b covers [lo, lo+len] or a half line.
        // Overlap of positive length => not simple.
        Rat b_lo = lo, b_hi = lo;
        if (!b.is_ray) {
            Rat other = param_on_a(b.base + b.full);
            b_lo = std::min(lo, other);
            b_hi = std::max(lo, other);
        }
        bool overlap;
        if (!a_unb && !b_unb)
            overlap = std::max(a_lo, b_lo) < std::min(a_hi, b_hi);
        else if (a_unb && !b_unb)
            overlap = b_hi > 0;
        else if (!a_unb && b_unb)
            overlap = same_dir ? (b_lo < 1) : (b_lo > 0);
        else
            overlap = same_dir ? true : (b_lo > 0);
        if (overlap) fail(Err::NotSimple, "overlapping collinear pieces");
        return std::nullopt;
    }
    RatPoint q = b.base - a.base;
    Rat t1 = wedge_r(q, b.full) / den;
    Rat t2 = wedge_r(q, a.full) / den;
    if (!param_valid(a, t1, false) || !param_valid(b, t2, false)) return std::nullopt;
    bool interior1 = param_valid(a, t1, true);
    bool interior2 = param_valid(b, t2, true);
    if (interior1 && interior2) {
        PairHit hit;
        hit.crossing = true;
        hit.point = a.base + t1 * a.full;
        hit.t1 = t1;
        hit.t2 = t2;
        return hit;
    }
    // Endpoint contact.  Fine only when it is the common vertex of adjacent
    // pieces; anything else makes a vertex land on the image of another point.
    if (share_vertex && !interior1 && !interior2) return std::nullopt;
    fail(Err::NotSimple, "vertex lies on the image of another piece");
}

}  // namespace

GenusSimplicity genus_and_simplicity(const ParamTropicalCurve& T) {
    validate_curve_structure(T);
    GenusSimplicity res;

    // Connectivity and first Betti number of the bounded graph.
    int V = static_cast<int>(T.vertices.size());
    std::vector<std::vector<int>> adj(V);
    for (const auto& e : T.edges) {
        adj[e.v1].push_back(e.v2);
        adj[e.v2].push_back(e.v1);
    }
    std::vector<char> seen(V, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        ++reached;
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                q.push(w);
            }
    }
    if (reached != V) {
        res.simple = false;
        res.why_not_simple = "disconnected graph";
        res.genus = static_cast<int>(T.edges.size()) - reached + 1;
        return res;
    }
    res.genus = static_cast<int>(T.edges.size()) - V + 1;

    // Trivalence.
    std::vector<int> valence(V, 0);
    for (const auto& e : T.edges) {
        ++valence[e.v1];
        ++valence[e.v2];
    }
    for (const auto& e : T.ends) ++valence[e.vertex];
    for (int v = 0; v < V; ++v)
        if (valence[v] != 3) {
            res.why_not_simple = "vertex of valence != 3";
            return res;
        }

    // Distinct vertex images.
    for (int i = 0; i < V; ++i)
        for (int j = i + 1; j < V; ++j)
            if (T.vertices[i].pos == T.vertices[j].pos) {
                res.why_not_simple = "two vertices share an image point";
                return res;
            }

    // Image intersections: only simple double points allowed.
    auto ps = make_pieces(T);
    std::vector<RatPoint> crossing_points;
    try {
        for (size_t i = 0; i < ps.size(); ++i)
            for (size_t j = i + 1; j < ps.size(); ++j) {
                auto hit = intersect_pieces(ps, static_cast<int>(i), static_cast<int>(j));
                if (hit && hit->crossing) crossing_points.push_back(hit->point);
            }
    } catch (const Error& err) {
        if (err.code() != Err::NotSimple) throw;
        res.why_not_simple = err.what();
        return res;
    }
    for (size_t i = 0; i < crossing_points.size(); ++i)
        for (size_t j = i + 1; j < crossing_points.size(); ++j)
            if (crossing_points[i] == crossing_points[j]) {
                res.why_not_simple = "point with more than two preimages";
                return res;
            }
    res.simple = true;
    return res;
}

CurveParity curve_parity(const ParamTropicalCurve& T) {
    CurveParity result;
    bool have = false;
    Parity par{0, 0};
    auto feed = [&](const Int& weight, const LatticeVector& primitive) {
        if (weight % 2 == 0) return;
        Parity p = parity_of(primitive);
        if (!have) {
            have = true;
            par = p;
        } else if (par != p) {
            result.status = ParityStatus::Mixed;
        }
    };
    for (const auto& e : T.edges) feed(e.weight, e.primitive);
    for (const auto& e : T.ends) {
        auto [u, p] = primitive_and_parity(e.vector);
        feed(lattice_length(e.vector), u);
    }
    if (result.status == ParityStatus::Mixed) return result;
    if (!have) {
        result.status = ParityStatus::NoOddEdges;
        return result;
    }
    result.status = ParityStatus::HasParity;
    result.parity = par;
    return result;
}

// ---------------------------------------------------------------------------
// Dual subdivision construction.
//
// The subdivision is assembled cell by cell: each curve vertex contributes a
// triangle, each image crossing a parallelogram.  Cell corners are produced in
// local coordinates from the angular sectors around the vertex/crossing, and
// glued by translating across shared arrangement sub-edges.  The resulting
// tiling is normalized so its lexicographically minimal lattice point is the
// origin, which matches the normalized Newton polygon.

namespace {

struct Stub {
    int subedge = -1;
    LatticeVector out;  // outward weighted direction
};

struct SubEdge {
    int ent_a = -1;
    int ent_b = -1;  // -1 for the unbounded tail of an end
    int piece = -1;
    LatticeVector dirvec;  // along the piece, a -> b
};

struct Entity {
    bool is_vertex = false;
    int index = -1;  // vertex or crossing index
    std::vector<Stub> stubs;
    std::vector<LatticeVector> corners;  // local; corner[i] = sector after stub i
    bool placed = false;
    LatticeVector shift{0, 0};
};

}  // namespace

const DualCell& DualSubdivision::triangle_of(int vertex) const {
    for (const auto& c : cells)
        if (c.kind == CellKind::Triangle && c.owner == vertex) return c;
    fail(Err::InternalInconsistency, "no triangle for vertex");
}

DualSubdivision dual_subdivision(const ParamTropicalCurve& T) {
    auto gs = genus_and_simplicity(T);
    if (!gs.simple) fail(Err::NotSimple, "dual subdivision requires a simple curve: " + gs.why_not_simple);

    auto ps = make_pieces(T);
    int V = static_cast<int>(T.vertices.size());

    // Crossings, ordered by image point.
    std::vector<ImageCrossing> crossings;
    std::vector<std::vector<std::pair<Rat, int>>> cuts(ps.size());  // param -> crossing id
    for (size_t i = 0; i < ps.size(); ++i)
        for (size_t j = i + 1; j < ps.size(); ++j) {
            auto hit = intersect_pieces(ps, static_cast<int>(i), static_cast<int>(j));
            if (hit && hit->crossing) {
                ImageCrossing c;
                c.piece1 = static_cast<int>(i);
                c.piece2 = static_cast<int>(j);
                c.point = hit->point;
                crossings.push_back(c);
            }
        }
    std::sort(crossings.begin(), crossings.end(),
              [](const ImageCrossing& a, const ImageCrossing& b) { return lex_less(a.point, b.point); });
    auto param_of = [&](const Piece& p, const RatPoint& q) -> Rat {
        RatPoint d = q - p.base;
        return (p.full.x != 0) ? d.x / p.full.x : d.y / p.full.y;
    };
    for (size_t c = 0; c < crossings.size(); ++c) {
        cuts[crossings[c].piece1].push_back({param_of(ps[crossings[c].piece1], crossings[c].point),
                                             static_cast<int>(c)});
        cuts[crossings[c].piece2].push_back({param_of(ps[crossings[c].piece2], crossings[c].point),
                                             static_cast<int>(c)});
    }

    // Entities: vertices then crossings.
    std::vector<Entity> ents(V + crossings.size());
    for (int v = 0; v < V; ++v) {
        ents[v].is_vertex = true;
        ents[v].index = v;
    }
    for (size_t c = 0; c < crossings.size(); ++c) {
        ents[V + c].is_vertex = false;
        ents[V + c].index = static_cast<int>(c);
    }

    // Sub-edges along each piece.
    std::vector<SubEdge> subs;
    for (size_t i = 0; i < ps.size(); ++i) {
        auto& cut = cuts[i];
        std::sort(cut.begin(), cut.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        int prev_ent = ps[i].va;
        for (const auto& [t, cid] : cut) {
            subs.push_back({prev_ent, V + cid, static_cast<int>(i), ps[i].dirvec});
            prev_ent = V + cid;
        }
        int last = ps[i].is_ray ? -1 : ps[i].vb;
        subs.push_back({prev_ent, last, static_cast<int>(i), ps[i].dirvec});
    }
    for (size_t s = 0; s < subs.size(); ++s) {
        ents[subs[s].ent_a].stubs.push_back({static_cast<int>(s), subs[s].dirvec});
        if (subs[s].ent_b >= 0) ents[subs[s].ent_b].stubs.push_back({static_cast<int>(s), -subs[s].dirvec});
    }

    // Local corners per entity.
    for (auto& ent : ents) {
        std::sort(ent.stubs.begin(), ent.stubs.end(), [](const Stub& a, const Stub& b) {
            auto half = [](const LatticeVector& v) {
                return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1;
            };
            int ha = half(a.out), hb = half(b.out);
            if (ha != hb) return ha < hb;
            return wedge(a.out, b.out) > 0;
        });
        size_t k = ent.stubs.size();
        for (size_t i = 0; i < k; ++i) {
            const auto& u = ent.stubs[i].out;
            const auto& w = ent.stubs[(i + 1) % k].out;
            if (wedge(u, w) == 0 && u.x * w.x + u.y * w.y > 0)
                fail(Err::NotSimple, "parallel branches at a vertex");
        }
        ent.corners.resize(k);
        LatticeVector cur{0, 0};
        for (size_t i = 1; i < k; ++i) {
            cur = cur + rotate_ccw(ent.stubs[i].out);
            ent.corners[i] = cur;
        }
        LatticeVector closure = cur + rotate_ccw(ent.stubs[0].out);
        if (!closure.is_zero())
            fail(Err::NotBalanced, "cell corners do not close up (balancing violated)");
        // corners[i] is the corner of the sector after stub i; shift so that
        // corner after stub 0 is corners[0] = rotate_ccw(stub 1)+... pattern:
        // we built corner[i] = sum_{1<=j<=i} rot(stub j); the sector after
        // stub 0 (between stub 0 and stub 1) carries corner (0,0) = corners[0].
    }

    auto stub_pos_in = [&](const Entity& ent, int subedge) -> int {
        for (size_t i = 0; i < ent.stubs.size(); ++i)
            if (ent.stubs[i].subedge == subedge) return static_cast<int>(i);
        fail(Err::InternalInconsistency, "stub lookup failed");
    };
    // Dual side of the stub at position i runs corner[i-1] -> corner[i]
    // (right-of-direction corner to left-of-direction corner).
    auto side_of = [&](const Entity& ent, int pos) -> std::pair<LatticeVector, LatticeVector> {
        size_t k = ent.stubs.size();
        LatticeVector cw = ent.corners[(pos + k - 1) % k];
        LatticeVector ccw = ent.corners[pos];
        return {cw + ent.shift, ccw + ent.shift};
    };

    // Glue by BFS.
    ents[0].placed = true;
    std::queue<int> bfs;
    bfs.push(0);
    while (!bfs.empty()) {
        int ei = bfs.front();
        bfs.pop();
        for (const auto& stub : ents[ei].stubs) {
            const SubEdge& s = subs[stub.subedge];
            int other = (s.ent_a == ei) ? s.ent_b : s.ent_a;
            if (other < 0) continue;
            auto [cw_here, ccw_here] = side_of(ents[ei], stub_pos_in(ents[ei], stub.subedge));
            int opos = stub_pos_in(ents[other], stub.subedge);
            size_t k = ents[other].stubs.size();
            LatticeVector o_cw_local = ents[other].corners[(opos + k - 1) % k];
            LatticeVector o_ccw_local = ents[other].corners[opos];
            LatticeVector want_shift = cw_here - o_ccw_local;
            if (!ents[other].placed) {
                ents[other].shift = want_shift;
                ents[other].placed = true;
                bfs.push(other);
            }
            if (ents[other].shift != want_shift ||
                o_cw_local + ents[other].shift != ccw_here)
                fail(Err::InternalInconsistency, "dual subdivision gluing mismatch");
        }
    }
    for (const auto& ent : ents)
        if (!ent.placed) fail(Err::InternalInconsistency, "dual subdivision not connected");

    // Normalize: lexicographically minimal corner to the origin.
    LatticeVector mn = ents[0].corners[0] + ents[0].shift;
    for (const auto& ent : ents)
        for (const auto& c : ent.corners) mn = std::min(mn, c + ent.shift);
    DualSubdivision dual;
    dual.newton = newton_polygon(T.degree());
    dual.crossings = crossings;

    Int area_sum = 0;
    for (const auto& ent : ents) {
        std::vector<LatticeVector> vs;
        vs.reserve(ent.corners.size());
        for (const auto& c : ent.corners) vs.push_back(c + ent.shift - mn);
        DualCell cell;
        cell.kind = ent.is_vertex ? CellKind::Triangle : CellKind::Parallelogram;
        cell.owner = ent.index;
        cell.poly = LatticePolygon::from_vertices(std::move(vs));
        area_sum += cell.poly.doubled_area;
        dual.cells.push_back(std::move(cell));
    }
    std::sort(dual.cells.begin(), dual.cells.end(), [](const DualCell& a, const DualCell& b) {
        if (a.kind != b.kind) return a.kind == CellKind::Triangle;
        return a.owner < b.owner;
    });
    if (area_sum != dual.newton.doubled_area)
        fail(Err::InternalInconsistency, "cells do not tile the Newton polygon (area mismatch)");
    for (const auto& cell : dual.cells)
        for (const auto& v : cell.poly.vertices) {
            size_t n = dual.newton.vertices.size();
            for (size_t i = 0; i < n; ++i) {
                const auto& a = dual.newton.vertices[i];
                const auto& b = dual.newton.vertices[(i + 1) % n];
                if (wedge(b - a, v - a) < 0)
                    fail(Err::InternalInconsistency, "cell escapes the Newton polygon");
            }
        }

    // Dual segments per sub-edge, for the weight/duality law.
    for (size_t s = 0; s < subs.size(); ++s) {
        const Entity& ent = ents[subs[s].ent_a];
        auto [cw, ccw] = side_of(ent, stub_pos_in(ent, static_cast<int>(s)));
        // side_of gives the side of the stub *into* the sub-edge direction at
        // ent_a, already including the shift.
        dual.segments.push_back({subs[s].piece, cw - mn, ccw - mn});
    }
    return dual;
}

// ---------------------------------------------------------------------------

int CycleDecomposition::tree_index_of_vertex(int v) const {
    for (size_t i = 0; i < trees.size(); ++i) {
        if (trees[i].root == v) return static_cast<int>(i);
        for (int w : trees[i].vertices)
            if (w == v) return static_cast<int>(i);
    }
    return -1;
}

CycleDecomposition decompose_cycle_and_trees(const ParamTropicalCurve& T) {
    auto gs = genus_and_simplicity(T);
    if (gs.genus != 1) fail(Err::NotElliptic, "cycle decomposition requires genus 1");
    if (!gs.simple) fail(Err::NotSimple, gs.why_not_simple);

    int V = static_cast<int>(T.vertices.size());
    std::vector<std::vector<std::pair<int, int>>> adj(V);  // (neighbor, edge index)
    for (size_t e = 0; e < T.edges.size(); ++e) {
        adj[T.edges[e].v1].push_back({T.edges[e].v2, static_cast<int>(e)});
        adj[T.edges[e].v2].push_back({T.edges[e].v1, static_cast<int>(e)});
    }

    // Peel leaves; what remains is the unique cycle.
    std::vector<int> deg(V, 0);
    for (int v = 0; v < V; ++v) deg[v] = static_cast<int>(adj[v].size());
    std::vector<char> removed(V, 0);
    std::queue<int> leaves;
    for (int v = 0; v < V; ++v)
        if (deg[v] <= 1) leaves.push(v);
    while (!leaves.empty()) {
        int v = leaves.front();
        leaves.pop();
        removed[v] = 1;
        for (auto [w, e] : adj[v])
            if (!removed[w] && --deg[w] == 1) leaves.push(w);
    }

    CycleDecomposition dec;
    int start = -1;
    for (int v = 0; v < V; ++v)
        if (!removed[v]) {
            start = v;
            break;
        }
    if (start < 0) fail(Err::NotElliptic, "no cycle found");
    // Walk the cycle.
    int prev = -1, cur = start;
    do {
        dec.cycle_vertices.push_back(cur);
        int next = -1, via = -1;
        for (auto [w, e] : adj[cur])
            if (!removed[w] && w != prev) {
                next = w;
                via = e;
                break;
            }
        if (next == -1) fail(Err::NotElliptic, "cycle walk failed");
        dec.cycle_edges.push_back(via);
        prev = cur;
        cur = next;
    } while (cur != start);

    std::vector<char> on_cycle_edge(T.edges.size(), 0);
    for (int e : dec.cycle_edges) on_cycle_edge[e] = 1;
    std::vector<char> on_cycle_vertex(V, 0);
    for (int v : dec.cycle_vertices) on_cycle_vertex[v] = 1;

    // Lemma: off-cycle edges are even; cycle edges all odd or all even, and if
    // odd their primitive directions share one parity.
    for (size_t e = 0; e < T.edges.size(); ++e)
        if (!on_cycle_edge[e] && T.edges[e].weight % 2 != 0)
            fail(Err::NoParity, "odd-weight edge off the cycle");
    int odd = 0, even = 0;
    std::optional<Parity> cycle_par;
    for (int e : dec.cycle_edges) {
        if (T.edges[e].weight % 2 == 0) {
            ++even;
        } else {
            ++odd;
            Parity p = parity_of(T.edges[e].primitive);
            if (!cycle_par)
                cycle_par = p;
            else if (*cycle_par != p)
                fail(Err::NoParity, "odd cycle edges with different parities");
        }
    }
    if (odd > 0 && even > 0) fail(Err::NoParity, "cycle mixes odd and even weights");
    dec.cycle_odd = odd > 0;

    // Trees hanging from each cycle vertex.
    std::vector<std::vector<int>> ends_at(V);
    for (size_t i = 0; i < T.ends.size(); ++i) ends_at[T.ends[i].vertex].push_back(static_cast<int>(i));
    for (int root : dec.cycle_vertices) {
        TreeOfVertex tree;
        tree.root = root;
        for (int e : ends_at[root]) tree.tree_ends.push_back(e);
        std::queue<int> q;
        std::set<int> seen{root};
        for (auto [w, e] : adj[root])
            if (!on_cycle_edge[e]) {
                q.push(w);
                seen.insert(w);
                tree.tree_edges.push_back(e);
            }
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            tree.vertices.push_back(v);
            for (int e : ends_at[v]) tree.tree_ends.push_back(e);
            for (auto [w, e] : adj[v])
                if (!seen.count(w)) {
                    seen.insert(w);
                    q.push(w);
                    tree.tree_edges.push_back(e);
                }
        }
        dec.trees.push_back(std::move(tree));
    }
    return dec;
}

CellClassification classify_cells(const ParamTropicalCurve& T, const CycleDecomposition& dec,
                                  const DualSubdivision& dual) {
    CurveParity cp = curve_parity(T);
    if (cp.status != ParityStatus::HasParity)
        fail(Err::NoParity, "classification requires a curve of parity");
    CellClassification cls;
    cls.curve_par = cp.parity;
    cls.triangle_class.resize(T.vertices.size());

    std::vector<char> mobile_root(T.vertices.size(), 0);
    std::vector<char> is_cycle_vertex(T.vertices.size(), 0);
    for (const auto& tree : dec.trees) {
        is_cycle_vertex[tree.root] = 1;
        bool mob = true;
        for (int e : tree.tree_ends) {
            auto [u, p] = primitive_and_parity(T.ends[e].vector);
            if (p != cp.parity) mob = false;
        }
        mobile_root[tree.root] = mob ? 1 : 0;
    }

    for (const auto& cell : dual.cells) {
        if (cell.kind == CellKind::Parallelogram) {
            bool all_odd = true;
            size_t n = cell.poly.vertices.size();
            for (size_t i = 0; i < n; ++i) {
                LatticeVector side = cell.poly.vertices[(i + 1) % n] - cell.poly.vertices[i];
                if (lattice_length(side) % 2 == 0) all_odd = false;
            }
            if (all_odd) cls.parallelogram_all_odd.push_back(cell.owner);
            continue;
        }
        int v = cell.owner;
        const auto& vs = cell.poly.vertices;
        std::vector<int> even_sides;
        for (int i = 0; i < 3; ++i) {
            LatticeVector side = vs[(i + 1) % 3] - vs[i];
            if (lattice_length(side) % 2 == 0) even_sides.push_back(i);
        }
        TriangleClass tc;
        if (even_sides.size() == 3) {
            tc.kind = TriangleKind::Even;
            Parity p0 = parity_of(vs[0]);
            if (parity_of(vs[1]) != p0 || parity_of(vs[2]) != p0)
                fail(Err::InternalInconsistency, "even triangle with mixed vertex parities");
            tc.theta = p0;
            if (is_cycle_vertex[v] && dec.cycle_odd)
                fail(Err::InternalInconsistency, "cycle vertex with an even triangle");
        } else {
            if (even_sides.size() != 1)
                fail(Err::InternalInconsistency, "odd triangle without a unique even side");
            int s = even_sides[0];
            Parity p1 = parity_of(vs[s]);
            Parity p2 = parity_of(vs[(s + 1) % 3]);
            if (p1 != p2) fail(Err::InternalInconsistency, "even side endpoints of mixed parity");
            tc.theta = p1;
            if (!is_cycle_vertex[v])
                fail(Err::InternalInconsistency, "tree vertex with an odd triangle");
            tc.kind = mobile_root[v] ? TriangleKind::OddMobile : TriangleKind::OddNonMobile;
        }
        cls.triangle_class[v] = tc;
    }
    return cls;
}

}  // namespace tropref

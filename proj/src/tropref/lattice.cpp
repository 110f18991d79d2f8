#include "tropref/lattice.hpp"

#include <algorithm>
#include <map>

namespace tropref {

Int wedge(const LatticeVector& a, const LatticeVector& b) { return a.x * b.y - a.y * b.x; }

Int lattice_length(const LatticeVector& a) {
    if (a.is_zero()) fail(Err::InvalidVector, "lattice length of the zero vector");
    return gcd(abs(a.x), abs(a.y));
}

std::pair<LatticeVector, Parity> primitive_and_parity(const LatticeVector& a) {
    Int g = lattice_length(a);
    LatticeVector u{a.x / g, a.y / g};
    return {u, parity_of(u)};
}

namespace {

// Angular comparator over nonzero vectors: angles in [0, 2*pi), starting at
// the positive x-axis, counter-clockwise.
int half_of(const LatticeVector& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

bool angle_less(const LatticeVector& a, const LatticeVector& b) {
    int ha = half_of(a), hb = half_of(b);
    if (ha != hb) return ha < hb;
    return wedge(a, b) > 0;
}

bool strictly_inside(const LatticePolygon& p, const LatticeVector& q) {
    size_t n = p.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& v = p.vertices[i];
        const auto& w = p.vertices[(i + 1) % n];
        if (wedge(w - v, q - v) <= 0) return false;
    }
    return true;
}

bool inside_or_boundary(const LatticePolygon& p, const LatticeVector& q) {
    size_t n = p.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& v = p.vertices[i];
        const auto& w = p.vertices[(i + 1) % n];
        if (wedge(w - v, q - v) < 0) return false;
    }
    return true;
}

template <typename Pred>
Int scan_count(const LatticePolygon& p, Pred&& pred) {
    Int xmin = p.vertices[0].x, xmax = xmin, ymin = p.vertices[0].y, ymax = ymin;
    for (const auto& v : p.vertices) {
        xmin = std::min(xmin, v.x);
        xmax = std::max(xmax, v.x);
        ymin = std::min(ymin, v.y);
        ymax = std::max(ymax, v.y);
    }
    Int count = 0;
    for (Int x = xmin; x <= xmax; ++x)
        for (Int y = ymin; y <= ymax; ++y)
            if (pred(LatticeVector{x, y})) ++count;
    return count;
}

}  // namespace

LatticePolygon LatticePolygon::from_vertices(std::vector<LatticeVector> vs) {
    if (vs.size() < 3) fail(Err::NotConvex, "polygon needs at least 3 vertices");
    LatticePolygon p;
    p.vertices = std::move(vs);
    size_t n = p.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const auto& a = p.vertices[i];
        const auto& b = p.vertices[(i + 1) % n];
        const auto& c = p.vertices[(i + 2) % n];
        if (wedge(b - a, c - b) <= 0)
            fail(Err::NotConvex, "vertices not strictly convex counter-clockwise");
        p.doubled_area += wedge(a, b);
        Int len = lattice_length(b - a);
        p.lattice_perimeter += len;
        p.boundary_count += len;  // lattice points on side [a,b), summed over sides
    }
    if (p.doubled_area <= 0) fail(Err::NotConvex, "non-positive area");
    p.interior_count = scan_count(p, [&](const LatticeVector& q) { return strictly_inside(p, q); });
    return p;
}

Int interior_points_with_parity(const LatticePolygon& p, Parity par) {
    return scan_count(p, [&](const LatticeVector& q) {
        return parity_of(q) == par && strictly_inside(p, q);
    });
}

std::vector<LatticeVector> lattice_points(const LatticePolygon& p) {
    std::vector<LatticeVector> pts;
    scan_count(p, [&](const LatticeVector& q) {
        if (inside_or_boundary(p, q)) pts.push_back(q);
        return false;
    });
    return pts;
}

LatticePolygon newton_polygon(const std::vector<LatticeVector>& vectors) {
    if (vectors.empty()) fail(Err::Degenerate, "empty degree");
    LatticeVector sum{0, 0};
    for (const auto& a : vectors) {
        if (a.is_zero()) fail(Err::InvalidVector, "zero vector in degree");
        sum = sum + a;
    }
    if (!sum.is_zero()) fail(Err::NotBalanced, "degree vectors do not sum to zero");
    bool rank2 = false;
    for (size_t i = 1; i < vectors.size() && !rank2; ++i)
        rank2 = wedge(vectors[0], vectors[i]) != 0;
    if (!rank2) fail(Err::Degenerate, "degree vectors span a line");

    // Merge parallel same-direction vectors, then attach the rotated edges in
    // angular order.
    std::map<std::pair<Int, Int>, LatticeVector> merged;  // primitive -> summed vector
    for (const auto& a : vectors) {
        auto [u, par] = primitive_and_parity(a);
        auto key = std::make_pair(u.x, u.y);
        auto it = merged.find(key);
        if (it == merged.end())
            merged.emplace(key, a);
        else
            it->second = it->second + a;
    }
    std::vector<LatticeVector> edges;
    edges.reserve(merged.size());
    for (auto& [key, v] : merged) edges.push_back(rotate_ccw(v));
    std::sort(edges.begin(), edges.end(), angle_less);

    std::vector<LatticeVector> verts;
    LatticeVector cur{0, 0};
    for (const auto& e : edges) {
        verts.push_back(cur);
        cur = cur + e;
    }
    LatticeVector shift = *std::min_element(verts.begin(), verts.end());
    for (auto& v : verts) v = v - shift;
    return LatticePolygon::from_vertices(std::move(verts));
}

DegreeSpec validate_degree(const std::vector<LatticeVector>& vectors, bool require_even) {
    DegreeSpec d;
    d.vectors = vectors;
    d.polygon = newton_polygon(vectors);  // checks balanced / non-degenerate / nonzero
    d.is_even = true;
    for (const auto& a : vectors)
        if (parity_of(a) != Parity{0, 0}) d.is_even = false;
    if (require_even && !d.is_even) fail(Err::NotEven, "degree has a vector outside (2Z)^2");

    if (d.is_even) {
        std::vector<LatticeVector> half;
        half.reserve(vectors.size());
        for (const auto& a : vectors) half.push_back({a.x / 2, a.y / 2});
        LatticePolygon hp = newton_polygon(half);
        d.half_interior_count = hp.interior_count;
        // I(1/2 Delta) = A(Delta)/4 - P(Delta)/4 + 1, a Pick identity.
        Rat lhs(d.half_interior_count);
        Rat rhs = Rat(d.polygon.doubled_area, 8) - Rat(d.polygon.lattice_perimeter, 4) + 1;
        if (lhs != rhs)
            fail(Err::InternalInconsistency, "half-degree interior count violates Pick identity");
    }
    return d;
}

int sides_with_normal_parity(const DegreeSpec& d, Parity par) {
    int count = 0;
    size_t n = d.polygon.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        LatticeVector side = d.polygon.vertices[(i + 1) % n] - d.polygon.vertices[i];
        auto [u, p] = primitive_and_parity(rotate_cw(side));
        if (p == par) ++count;
    }
    return count;
}

}  // namespace tropref

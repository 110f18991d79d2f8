#include "tropref/oracle.hpp"

#include "tropref/linsolve.hpp"
#include "tropref/orientkit.hpp"
#include "tropref/parallel.hpp"
#include "tropref/rng.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace tropref {

namespace {

// ---------------------------------------------------------------------------
// Rooted binary trees over label lists, pool-based.

struct RNode {
    int label = -1;  // >= 0 for leaves
    int left = -1, right = -1;
};

using RPool = std::vector<RNode>;

std::vector<int> enumerate_rooted(RPool& pool, const std::vector<int>& labels) {
    std::vector<int> roots;
    if (labels.size() == 1) {
        pool.push_back({labels[0], -1, -1});
        roots.push_back(static_cast<int>(pool.size()) - 1);
        return roots;
    }
    size_t rest = labels.size() - 1;
    for (unsigned mask = 0; mask + 1 < (1u << rest); ++mask) {
        std::vector<int> left{labels[0]}, right;
        for (size_t i = 0; i < rest; ++i)
            (mask >> i & 1 ? left : right).push_back(labels[i + 1]);
        auto lroots = enumerate_rooted(pool, left);
        auto rroots = enumerate_rooted(pool, right);
        for (int lr : lroots)
            for (int rr : rroots) {
                pool.push_back({-1, lr, rr});
                roots.push_back(static_cast<int>(pool.size()) - 1);
            }
    }
    return roots;
}

// ---------------------------------------------------------------------------
// Combinatorial graphs under construction.

struct BuildGraph {
    int nvertices = 0;
    struct BEdge {
        int u, v;
        LatticeVector dir;  // weighted direction, oriented u -> v
    };
    std::vector<BEdge> edges;
    std::vector<std::pair<int, int>> ends;  // (vertex, degree element)
};

LatticeVector subtree_sum(const RPool& pool, int node, const std::vector<LatticeVector>& deg) {
    const RNode& n = pool[node];
    if (n.label >= 0) return deg[n.label];
    return subtree_sum(pool, n.left, deg) + subtree_sum(pool, n.right, deg);
}

// Attaches the rooted tree below `parent`; returns false when the type is
// degenerate (zero direction or parallel branches at a vertex).
bool emit_subtree(const RPool& pool, int node, int parent, BuildGraph& g,
                  const std::vector<LatticeVector>& deg) {
    const RNode& n = pool[node];
    if (n.label >= 0) {
        g.ends.push_back({parent, n.label});
        return true;
    }
    LatticeVector sl = subtree_sum(pool, n.left, deg);
    LatticeVector sr = subtree_sum(pool, n.right, deg);
    if (sl.is_zero() || sr.is_zero() || wedge(sl, sr) == 0) return false;
    int v = g.nvertices++;
    g.edges.push_back({parent, v, sl + sr});
    return emit_subtree(pool, n.left, v, g, deg) && emit_subtree(pool, n.right, v, g, deg);
}

// ---------------------------------------------------------------------------
// Exact realization: positions are affine in (p.x, p.y, t_0, ..., t_{E-1}).

struct AffinePoint {
    std::vector<Rat> cx, cy;  // coefficient rows, length = unknowns
    Rat kx, ky;               // constants
};

struct Realization {
    std::vector<std::vector<Rat>> rows;
    std::vector<Rat> rhs;
    std::vector<AffinePoint> pos;  // per vertex
    int unknowns = 0;
};

Realization build_positions(const BuildGraph& g, int skip_edge) {
    Realization re;
    re.unknowns = 2 + static_cast<int>(g.edges.size());
    re.pos.assign(g.nvertices, {});
    std::vector<char> placed(g.nvertices, 0);
    AffinePoint base;
    base.cx.assign(re.unknowns, Rat(0));
    base.cy.assign(re.unknowns, Rat(0));
    base.cx[0] = 1;
    base.cy[1] = 1;
    re.pos[0] = base;
    placed[0] = 1;
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (static_cast<int>(e) == skip_edge) continue;
            const auto& be = g.edges[e];
            int from = -1, to = -1, sign = 1;
            if (placed[be.u] && !placed[be.v]) {
                from = be.u;
                to = be.v;
                sign = 1;
            } else if (placed[be.v] && !placed[be.u]) {
                from = be.v;
                to = be.u;
                sign = -1;
            } else {
                continue;
            }
            AffinePoint p = re.pos[from];
            p.cx[2 + e] += Rat(sign) * Rat(be.dir.x);
            p.cy[2 + e] += Rat(sign) * Rat(be.dir.y);
            re.pos[to] = std::move(p);
            placed[to] = 1;
            progress = true;
        }
    }
    for (char c : placed)
        if (!c) fail(Err::InternalInconsistency, "combinatorial type graph is disconnected");
    return re;
}

void add_end_equation(Realization& re, const AffinePoint& p, const LatticeVector& a,
                      const Rat& value) {
    // lambda_a(p) = a.y * x - a.x * y = value
    std::vector<Rat> row(re.unknowns, Rat(0));
    for (int c = 0; c < re.unknowns; ++c) row[c] = Rat(a.y) * p.cx[c] - Rat(a.x) * p.cy[c];
    re.rows.push_back(std::move(row));
    re.rhs.push_back(value - (Rat(a.y) * p.kx - Rat(a.x) * p.ky));
}

RatPoint eval_point(const AffinePoint& p, const std::vector<Rat>& z) {
    Rat x = p.kx, y = p.ky;
    for (size_t c = 0; c < z.size(); ++c) {
        x += p.cx[c] * z[c];
        y += p.cy[c] * z[c];
    }
    return {x, y};
}

ParamTropicalCurve assemble_curve(const BuildGraph& g, const Realization& re,
                                  const std::vector<Rat>& z,
                                  const std::vector<LatticeVector>& deg) {
    ParamTropicalCurve T;
    T.vertices.resize(g.nvertices);
    for (int v = 0; v < g.nvertices; ++v) T.vertices[v].pos = eval_point(re.pos[v], z);
    for (const auto& be : g.edges) {
        CurveEdge e;
        e.v1 = be.u;
        e.v2 = be.v;
        e.weight = lattice_length(be.dir);
        e.primitive = {be.dir.x / e.weight, be.dir.y / e.weight};
        T.edges.push_back(e);
    }
    for (auto [v, label] : g.ends) T.ends.push_back({v, deg[label]});
    return T;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<ParamTropicalCurve> enumerate_rational_curves(
    const std::vector<LatticeVector>& degree_vectors, const std::vector<OrientedLine>& lines) {
    size_t r = degree_vectors.size();
    if (r < 3) fail(Err::InvalidVector, "rational enumeration needs at least 3 ends");
    if (lines.size() != r) fail(Err::InvalidVector, "one line per degree element required");
    for (size_t i = 0; i < r; ++i)
        if (lines[i].direction.is_zero() ||
            wedge(lines[i].direction, degree_vectors[i]) != 0)
            fail(Err::InvalidVector, "line direction must match its degree vector");

    std::vector<int> rest;
    for (size_t i = 1; i < r; ++i) rest.push_back(static_cast<int>(i));
    RPool pool;
    auto roots = enumerate_rooted(pool, rest);

    std::vector<ParamTropicalCurve> result;
    std::set<std::string> keys;
    for (int root : roots) {
        if (pool[root].label >= 0) continue;  // cannot happen for r >= 3
        BuildGraph g;
        int v0 = g.nvertices++;
        g.ends.push_back({v0, 0});
        // The two branches at v0 must not be parallel to each other.
        LatticeVector sl = subtree_sum(pool, pool[root].left, degree_vectors);
        LatticeVector sr = subtree_sum(pool, pool[root].right, degree_vectors);
        if (sl.is_zero() || sr.is_zero() || wedge(sl, sr) == 0) continue;
        if (!emit_subtree(pool, pool[root].left, v0, g, degree_vectors)) continue;
        if (!emit_subtree(pool, pool[root].right, v0, g, degree_vectors)) continue;

        Realization re = build_positions(g, -1);
        for (auto [v, label] : g.ends)
            add_end_equation(re, re.pos[v], degree_vectors[label], lines[label].value);
        LinearSolution sol = solve_linear(re.rows, re.rhs);
        if (!sol.consistent) continue;  // Menelaus violated or type unrealizable
        if (!sol.kernel.empty())
            fail(Err::GeneralPositionFailure, "underdetermined rational system");
        bool positive = true;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            const Rat& t = sol.particular[2 + e];
            if (t == 0) fail(Err::GeneralPositionFailure, "edge of exactly zero length");
            if (t < 0) positive = false;
        }
        if (!positive) continue;
        ParamTropicalCurve T = assemble_curve(g, re, sol.particular, degree_vectors);
        auto bal = check_balancing(T);
        if (!bal.ok) fail(Err::InternalInconsistency, "oracle curve unbalanced");
        auto gs = genus_and_simplicity(T);
        if (gs.genus != 0) fail(Err::InternalInconsistency, "oracle curve of wrong genus");
        if (!gs.simple)
            fail(Err::GeneralPositionFailure, "non-simple rational curve: " + gs.why_not_simple);
        if (!keys.insert(T.canonical_key()).second)
            fail(Err::GeneralPositionFailure, "duplicate rational curve");
        result.push_back(std::move(T));
    }
    return result;
}

std::vector<OrientedLine> seeded_menelaus_lines(const std::vector<LatticeVector>& degree_vectors,
                                                std::uint64_t seed) {
    size_t n = degree_vectors.size();
    Rng rng(mix_seed(seed, "menelaus-lines"));
    const long long B = 4096LL * static_cast<long long>(n * n);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<OrientedLine> lines(n);
        Int total = 0;
        for (size_t i = 0; i + 1 < n; ++i) {
            Int v = Int(rng.int_in(-B, B));
            lines[i] = {degree_vectors[i], Rat(v)};
            total += v;
        }
        lines[n - 1] = {degree_vectors[n - 1], Rat(-total)};
        // Distinct geometric lines for every pair of parallel elements.
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i)
            for (size_t j = i + 1; j < n && ok; ++j) {
                if (wedge(degree_vectors[i], degree_vectors[j]) != 0) continue;
                Rat vi = lines[i].value / Rat(lattice_length(degree_vectors[i]));
                Rat vj = lines[j].value / Rat(lattice_length(degree_vectors[j]));
                auto [ui, pi] = primitive_and_parity(degree_vectors[i]);
                auto [uj, pj] = primitive_and_parity(degree_vectors[j]);
                if (!(ui == uj)) vj = -vj;
                if (vi == vj) ok = false;
            }
        if (ok) return lines;
    }
    fail(Err::GeneralPositionFailure, "could not draw distinct Menelaus lines");
}

LaurentPoly g0(const DegreeSpec& degree, std::uint64_t seed) {
    if (!degree.is_even) fail(Err::NotEven, "g0 requires an even degree");
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto lines = seeded_menelaus_lines(degree.vectors,
                                           attempt == 0 ? seed : mix_seed(seed, "g0-retry" + std::to_string(attempt)));
        try {
            LaurentPoly acc;
            for (const auto& T : enumerate_rational_curves(degree.vectors, lines)) {
                LaurentPoly mu = LaurentPoly::constant(1);
                // One dual triangle per trivalent vertex; its doubled Euclidean
                // area is the wedge of two branch directions.
                std::vector<std::vector<LatticeVector>> dirs(T.vertices.size());
                for (const auto& e : T.edges) {
                    dirs[e.v1].push_back(e.dirvec());
                    dirs[e.v2].push_back(-e.dirvec());
                }
                for (const auto& e : T.ends) dirs[e.vertex].push_back(e.vector);
                for (const auto& d : dirs) {
                    Int a2 = abs(wedge(d[0], d[1]));
                    mu *= LaurentPoly::area_factor(a2);
                }
                acc += mu;
            }
            return acc;
        } catch (const Error& e) {
            if (e.code() != Err::GeneralPositionFailure) throw;
        }
    }
    fail(Err::GeneralPositionFailure, "g0 failed to find a generic constraint");
}

// ---------------------------------------------------------------------------

namespace {

struct EllipticTask {
    BuildGraph graph;
    int cycle_len = 0;  // cycle edges are graph.edges[0 .. cycle_len-1]
};

// All cyclic arrangements of the blocks of one set partition, block containing
// label 0 first, reflections quotiented out.
void arrangements(const std::vector<std::vector<int>>& blocks,
                  std::vector<std::vector<int>>& out) {
    int m = static_cast<int>(blocks.size());
    std::vector<int> idx;
    for (int i = 1; i < m; ++i) idx.push_back(i);
    std::sort(idx.begin(), idx.end());
    do {
        std::vector<int> order{0};
        for (int i : idx) order.push_back(i);
        std::vector<int> reflected{0};
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) reflected.push_back(*it);
        if (std::lexicographical_compare(reflected.begin(), reflected.end(), order.begin(),
                                         order.end()))
            continue;  // keep only the canonical representative
        out.push_back(order);
    } while (std::next_permutation(idx.begin(), idx.end()));
}

void set_partitions(int r, int m, std::vector<std::vector<std::vector<int>>>& out) {
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> rec = [&](int label) {
        if (label == r) {
            if (static_cast<int>(blocks.size()) == m) out.push_back(blocks);
            return;
        }
        int remaining = r - label;
        for (auto& b : blocks) {
            b.push_back(label);
            if (static_cast<int>(blocks.size()) + remaining - 1 >= m) rec(label + 1);
            b.pop_back();
        }
        if (static_cast<int>(blocks.size()) < m) {
            blocks.push_back({label});
            rec(label + 1);
            blocks.pop_back();
        }
    };
    rec(0);
}

}  // namespace

std::vector<ParamTropicalCurve> enumerate_elliptic_curves(const DegreeSpec& degree, Parity parity,
                                                          const std::vector<OrientedLine>& lines,
                                                          const RatPoint& x0) {
    if (parity == Parity{0, 0}) fail(Err::InvalidVector, "parity (0,0) is not allowed");
    int r = static_cast<int>(degree.vectors.size());
    if (static_cast<int>(lines.size()) != r)
        fail(Err::InvalidVector, "one line per degree element required");

    // Candidate weighted directions of the cycle edge at the marked point:
    // rotated differences of lattice points of the Newton polygon, filtered by
    // parity.
    std::vector<LatticeVector> c0_candidates;
    {
        std::set<std::pair<Int, Int>> cand;
        auto pts = lattice_points(degree.polygon);
        for (const auto& p1 : pts)
            for (const auto& p2 : pts) {
                LatticeVector d = p1 - p2;
                if (d.is_zero()) continue;
                for (const LatticeVector& b : {rotate_ccw(d), rotate_cw(d)})
                    if (parity_of(b) == parity) cand.insert({b.x, b.y});
            }
        for (const auto& [x, y] : cand) c0_candidates.push_back({x, y});
    }

    // Combinatorial types: cycle length m, set partition of the ends into m
    // blocks, cyclic arrangement up to rotation/reflection, rooted tree per
    // block, c0 candidate.
    std::vector<EllipticTask> tasks;
    for (int m = 3; m <= r; ++m) {
        std::vector<std::vector<std::vector<int>>> partitions;
        set_partitions(r, m, partitions);
        for (const auto& blocks : partitions) {
            bool zero_block = false;
            std::vector<LatticeVector> sums(blocks.size());
            for (size_t b = 0; b < blocks.size(); ++b) {
                LatticeVector s{0, 0};
                for (int i : blocks[b]) s = s + degree.vectors[i];
                sums[b] = s;
                if (s.is_zero()) zero_block = true;
            }
            if (zero_block) continue;
            std::vector<std::vector<int>> orders;
            arrangements(blocks, orders);
            RPool pool;
            std::vector<std::vector<int>> block_roots(blocks.size());
            for (size_t b = 0; b < blocks.size(); ++b)
                block_roots[b] = enumerate_rooted(pool, blocks[b]);
            for (const auto& order : orders) {
                for (const auto& c0 : c0_candidates) {
                    // Cycle directions: D[m-1] = c0, D[k] = D[k-1] - s[order[k]].
                    std::vector<LatticeVector> D(m);
                    D[m - 1] = c0;
                    bool bad = false;
                    for (int k = 0; k + 1 < m; ++k) {
                        D[k] = (k == 0 ? c0 : D[k - 1]) - sums[order[k]];
                        if (D[k].is_zero()) bad = true;
                    }
                    LatticeVector back = D[m - 2] - sums[order[m - 1]];
                    if (!(back == c0)) fail(Err::InternalInconsistency, "cycle direction closure");
                    for (int k = 0; k < m && !bad; ++k)
                        if (wedge(D[(k + m - 1) % m], D[k]) == 0) bad = true;
                    if (bad) continue;

                    // Tree choices per block (odometer over block_roots).
                    std::vector<size_t> pick(blocks.size(), 0);
                    while (true) {
                        BuildGraph g;
                        g.nvertices = m;
                        for (int k = 0; k < m; ++k) g.edges.push_back({k, (k + 1) % m, D[k]});
                        bool ok = true;
                        for (int k = 0; k < m && ok; ++k) {
                            int b = order[k];
                            int root = block_roots[b][pick[b]];
                            if (pool[root].label >= 0) {
                                g.ends.push_back({k, pool[root].label});
                            } else {
                                if (wedge(D[(k + m - 1) % m], sums[b]) == 0) ok = false;
                                if (ok) ok = emit_subtree(pool, root, k, g, degree.vectors);
                            }
                        }
                        if (ok) {
                            EllipticTask task;
                            task.graph = std::move(g);
                            task.cycle_len = m;
                            tasks.push_back(std::move(task));
                        }
                        // advance odometer
                        size_t b = 0;
                        while (b < pick.size() && ++pick[b] == block_roots[b].size()) {
                            pick[b] = 0;
                            ++b;
                        }
                        if (b == pick.size()) break;
                    }
                }
            }
        }
    }

    std::vector<std::vector<ParamTropicalCurve>> found(tasks.size());
    parallel_for(tasks.size(), [&](size_t ti) {
        const EllipticTask& task = tasks[ti];
        const BuildGraph& g = task.graph;
        int closing = task.cycle_len - 1;  // spanning tree skips this cycle edge
        Realization re = build_positions(g, closing);
        for (auto [v, label] : g.ends)
            add_end_equation(re, re.pos[v], degree.vectors[label], lines[label].value);
        // Cycle closure: pos(0) = pos(m-1) + t_closing * D.
        {
            const auto& be = g.edges[closing];
            for (int coord = 0; coord < 2; ++coord) {
                std::vector<Rat> row(re.unknowns, Rat(0));
                const auto& pu = re.pos[be.u];
                const auto& pv = re.pos[be.v];
                for (int c = 0; c < re.unknowns; ++c)
                    row[c] = (coord == 0 ? pu.cx[c] - pv.cx[c] : pu.cy[c] - pv.cy[c]);
                row[2 + closing] += Rat(coord == 0 ? be.dir.x : be.dir.y);
                re.rows.push_back(std::move(row));
                re.rhs.push_back(coord == 0 ? pv.kx - pu.kx : pv.ky - pu.ky);
            }
        }
        LinearSolution sol = solve_linear(re.rows, re.rhs);
        if (!sol.consistent) return;
        if (sol.kernel.size() > 1)
            fail(Err::GeneralPositionFailure, "elliptic system with a 2-dimensional family");
        std::vector<Rat> z0 = sol.particular;
        std::vector<Rat> z1(re.unknowns, Rat(0));
        if (sol.kernel.size() == 1) z1 = sol.kernel[0];

        // Marked point on each bounded edge in turn.
        for (size_t e = 0; e < g.edges.size(); ++e) {
            const auto& be = g.edges[e];
            AffinePoint head = re.pos[be.u];
            RatPoint a0 = eval_point(head, z0);
            RatPoint a1{0, 0};
            for (int c = 0; c < re.unknowns; ++c) {
                a1.x += head.cx[c] * z1[c];
                a1.y += head.cy[c] * z1[c];
            }
            // a0 + tau*a1 + mu*dir = x0
            Rat det = a1.x * Rat(be.dir.y) - Rat(be.dir.x) * a1.y;
            Rat bx = x0.x - a0.x, by = x0.y - a0.y;
            if (sol.kernel.empty() || det == 0) {
                // The supporting line of this edge does not move with tau;
                // x0 exactly on it is a non-generic incidence, anything else
                // cannot meet this edge.
                if (bx * Rat(be.dir.y) - Rat(be.dir.x) * by == 0)
                    fail(Err::GeneralPositionFailure, "x0 on a rigid edge line");
                continue;
            }
            Rat tau = (bx * Rat(be.dir.y) - Rat(be.dir.x) * by) / det;
            Rat mu = (a1.x * by - bx * a1.y) / det;
            std::vector<Rat> z(re.unknowns);
            for (int c = 0; c < re.unknowns; ++c) z[c] = z0[c] + tau * z1[c];
            bool positive = true;
            for (size_t e2 = 0; e2 < g.edges.size(); ++e2) {
                const Rat& t = z[2 + e2];
                if (t == 0) fail(Err::GeneralPositionFailure, "edge of exactly zero length");
                if (t < 0) positive = false;
            }
            if (!positive) continue;
            if (mu == 0 || mu == z[2 + e])
                fail(Err::GeneralPositionFailure, "x0 at a vertex of a solved curve");
            if (mu < 0 || mu > z[2 + e]) continue;

            ParamTropicalCurve T = assemble_curve(g, re, z, degree.vectors);
            T.marked = MarkedPoint{static_cast<int>(e), mu / z[2 + e]};
            auto bal = check_balancing(T);
            if (!bal.ok) fail(Err::InternalInconsistency, "oracle elliptic curve unbalanced");
            auto gs = genus_and_simplicity(T);
            if (gs.genus != 1) fail(Err::InternalInconsistency, "oracle curve of wrong genus");
            if (!gs.simple)
                fail(Err::GeneralPositionFailure,
                     "non-simple elliptic curve: " + gs.why_not_simple);
            auto cp = curve_parity(T);
            if (cp.status != ParityStatus::HasParity || cp.parity != parity)
                fail(Err::InternalInconsistency, "oracle curve of wrong parity");
            found[ti].push_back(std::move(T));
        }
    });

    std::vector<ParamTropicalCurve> result;
    std::set<std::string> keys;
    for (auto& bucket : found)
        for (auto& T : bucket)
            if (keys.insert(T.canonical_key()).second) result.push_back(std::move(T));
    return result;
}

LaurentPoly g1_oracle(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                      const InitialDataOptions& opts) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::uint64_t s = attempt == 0 ? seed : mix_seed(seed, "oracle-retry" + std::to_string(attempt));
        auto built = build_initial_data(degree, parity, s, opts);
        if (built.empty_vset) return LaurentPoly();  // no admissible cycle direction at all
        const InitialData& data = *built.data;
        try {
            LaurentPoly acc;
            for (const auto& T : enumerate_elliptic_curves(degree, parity, data.lines, data.x0))
                acc += refined_multiplicity_closed(T);
            return acc;
        } catch (const Error& e) {
            if (e.code() != Err::GeneralPositionFailure) throw;
        }
    }
    fail(Err::GeneralPositionFailure, "g1_oracle failed to find a generic constraint");
}

}  // namespace tropref

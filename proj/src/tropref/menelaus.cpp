#include "tropref/menelaus.hpp"

#include "tropref/driver.hpp"
#include "tropref/oracle.hpp"
#include "tropref/rng.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tropref {

std::pair<std::vector<Rat>, Rat> lambda_and_menelaus(const std::vector<OrientedLine>& lines) {
    std::vector<Rat> values;
    values.reserve(lines.size());
    Rat sum(0);
    for (const auto& l : lines) {
        values.push_back(l.value);
        sum += l.value;
    }
    return {values, sum};
}

OrientedLine completing_line(const std::vector<LatticeVector>& subset_vectors,
                             const std::vector<OrientedLine>& subset_lines) {
    LatticeVector c{0, 0};
    for (const auto& a : subset_vectors) c = c + a;
    if (c.is_zero()) fail(Err::ZeroSum, "completing line of a zero-sum subset");
    Rat value(0);
    for (const auto& l : subset_lines) value += l.value;
    return {c, value};
}

// ---------------------------------------------------------------------------

StepResult cycle_step(const RatPoint& x, const LatticeVector& b_cur, const LatticeVector& a_next,
                      int sign_next, const OrientedLine& line) {
    Int den = wedge(b_cur, a_next);  // = lambda_{a_next}(b_cur)
    if (den == 0) fail(Err::DegenerateWedge, "b_k parallel to a_{k+1}");
    StepResult res;
    if (Int(sign_next) * den < 0) {
        res.stopped = true;
        res.reason = Stopped::Reason::SignViolation;
        return res;
    }
    Rat t = (line.value - line.lambda_at(x)) / Rat(den);
    if (t == 0) fail(Err::GeneralPositionFailure, "walk point lies on the next line");
    if (t < 0) {
        res.stopped = true;
        res.reason = Stopped::Reason::RayMiss;
        return res;
    }
    res.next = {x.x + t * Rat(b_cur.x), x.y + t * Rat(b_cur.y)};
    return res;
}

CycleOutcome cycle_procedure(const CycleData& data) {
    size_t r = data.vectors.size();
    if (r < 3 || data.lines.size() != r || data.signs.size() != r)
        fail(Err::InvalidVector, "malformed cycle data");
    LatticeVector sum{0, 0};
    for (const auto& a : data.vectors) sum = sum + a;
    if (!sum.is_zero()) fail(Err::NotBalanced, "cycle data vectors do not sum to zero");
    if (data.b.is_zero()) fail(Err::InvalidVector, "zero b vector");
    {
        LatticeVector bk = data.b;
        for (size_t i = 0; i < r; ++i) {
            if (wedge(bk, data.vectors[i]) == 0)
                fail(Err::DegenerateWedge, "(b - sum a_j) parallel to a_{i+1}");
            bk = bk - data.vectors[i];
        }
    }

    std::vector<RatPoint> xs;  // xs[k] = x_{k+1}
    RatPoint x = data.x0;
    LatticeVector bk = data.b;
    std::vector<LatticeVector> bs;  // bs[k] = b_{k+1}
    for (size_t k = 0; k < r; ++k) {
        StepResult step = cycle_step(x, bk, data.vectors[k], data.signs[k], data.lines[k]);
        if (step.stopped) return Stopped{static_cast<int>(k + 1), step.reason};
        x = step.next;
        xs.push_back(x);
        bk = bk - data.vectors[k];
        bs.push_back(bk);
    }
    if (!(bk == data.b)) fail(Err::InternalInconsistency, "b_r != b after a full cycle");

    // Closure: x0 must sit strictly inside the segment [x_r, x_1] of the
    // closing b-line.
    const RatPoint& xr = xs.back();
    RatPoint d = data.x0 - xr;
    if (Rat(data.b.y) * d.x - Rat(data.b.x) * d.y != 0)
        return Stopped{static_cast<int>(r), Stopped::Reason::NoClosure};
    Rat s = (data.b.x != 0) ? d.x / Rat(data.b.x) : d.y / Rat(data.b.y);
    if (s == 0) fail(Err::GeneralPositionFailure, "x0 coincides with x_r");
    if (s < 0) return Stopped{static_cast<int>(r), Stopped::Reason::NoClosure};

    // Assemble the curve: vertices x_1..x_r, cycle edges directed by the b_k,
    // ends directed by the a_k, marked point x0 on the closing edge.
    ParamTropicalCurve T;
    T.vertices.resize(r);
    for (size_t k = 0; k < r; ++k) T.vertices[k].pos = xs[k];
    for (size_t k = 0; k + 1 < r; ++k) {
        CurveEdge e;
        e.v1 = static_cast<int>(k);
        e.v2 = static_cast<int>(k + 1);
        e.weight = lattice_length(bs[k]);
        e.primitive = {bs[k].x / e.weight, bs[k].y / e.weight};
        T.edges.push_back(e);
    }
    CurveEdge closing;
    closing.v1 = static_cast<int>(r - 1);
    closing.v2 = 0;
    closing.weight = lattice_length(data.b);
    closing.primitive = {data.b.x / closing.weight, data.b.y / closing.weight};
    T.edges.push_back(closing);
    for (size_t k = 0; k < r; ++k) T.ends.push_back({static_cast<int>(k), data.vectors[k]});

    // Parameter of x0 along x_r -> x_1.
    RatPoint span = xs.front() - xr;
    Rat span_s = (data.b.x != 0) ? span.x / Rat(data.b.x) : span.y / Rat(data.b.y);
    if (!(s < span_s))
        fail(Err::InternalInconsistency, "x0 beyond x_1 on the closing edge");
    T.marked = MarkedPoint{static_cast<int>(T.edges.size() - 1), s / span_s};

    auto bal = check_balancing(T);
    if (!bal.ok) fail(Err::InternalInconsistency, "cycle procedure produced unbalanced curve");
    auto gs = genus_and_simplicity(T);
    if (gs.genus != 1) fail(Err::InternalInconsistency, "cycle procedure produced genus != 1");
    if (!gs.simple)
        fail(Err::GeneralPositionFailure,
             "cycle procedure produced a non-simple curve: " + gs.why_not_simple);
    return T;
}

// ---------------------------------------------------------------------------

bool InitialData::k_contains(const RatPoint& p) const {
    for (const auto& hp : k_halfplanes) {
        Rat v = Rat(hp.gradient.x) * p.x + Rat(hp.gradient.y) * p.y;
        if (v <= 0) return false;
        if (v * v < Rat(hp.gradient.x * hp.gradient.x + hp.gradient.y * hp.gradient.y))
            return false;
    }
    return true;
}

namespace {

struct SubsetLine {
    LatticeVector c;
    Rat value;
    unsigned mask;
};

// Geometric identity key of the oriented line (c, value): the primitive
// direction lex-normalized together with the rescaled value.
std::pair<std::pair<Int, Int>, Rat> line_key(const LatticeVector& c, const Rat& value) {
    Int len = lattice_length(c);
    LatticeVector u{c.x / len, c.y / len};
    Rat v = value / Rat(len);
    if (u.x < 0 || (u.x == 0 && u.y < 0)) {
        u = -u;
        v = -v;
    }
    return {{u.x, u.y}, v};
}

int half_of(const LatticeVector& v) { return (v.y > 0 || (v.y == 0 && v.x > 0)) ? 0 : 1; }

bool angle_less(const LatticeVector& a, const LatticeVector& b) {
    int ha = half_of(a), hb = half_of(b);
    if (ha != hb) return ha < hb;
    return wedge(a, b) > 0;
}

}  // namespace

InitialDataResult build_initial_data(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                                     const InitialDataOptions& opts) {
    if (!degree.is_even) fail(Err::NotEven, "initial data requires an even degree");
    if (parity == Parity{0, 0}) fail(Err::InvalidVector, "parity (0,0) is not allowed");
    int admissible_sides = sides_with_normal_parity(degree, parity);
    bool overridden = false;
    if (admissible_sides > 1) {
        if (!opts.allow_non_admissible)
            fail(Err::NotAdmissible, "Newton polygon has more than one side of the given parity");
        overridden = true;
    }
    size_t n = degree.vectors.size();
    if (n < 3 || n > 16) fail(Err::InvalidVector, "degree size out of the supported range");

    Rng rng(mix_seed(seed, "initial-data"));
    const long long B = 1024LL * static_cast<long long>(n) * static_cast<long long>(n * n);

    for (int attempt = 0; attempt < 64; ++attempt) {
        // Perturbed Menelaus values, summing to zero.
        std::vector<Rat> lam(n);
        {
            Int total = 0;
            for (size_t i = 0; i + 1 < n; ++i) {
                Int v = Int(rng.int_in(-B, B));
                lam[i] = Rat(v);
                total += v;
            }
            lam[n - 1] = Rat(-total);
        }

        // All proper nonempty index subsets with nonzero sum.
        std::vector<SubsetLine> subs;
        bool bad = false;
        {
            std::set<std::pair<std::pair<Int, Int>, Rat>> seen;
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                LatticeVector c{0, 0};
                Rat value(0);
                for (size_t i = 0; i < n; ++i)
                    if (mask >> i & 1) {
                        c = c + degree.vectors[i];
                        value += lam[i];
                    }
                if (c.is_zero()) continue;
                subs.push_back({c, value, mask});
                if (!seen.insert(line_key(c, value)).second) {
                    bad = true;  // two subsets share a geometric line
                    break;
                }
            }
        }
        if (bad) continue;

        // (r2): vertices of the auxiliary rational curves, per subset.
        std::vector<RatPoint> witnesses;
        try {
            for (const auto& s : subs) {
                if (__builtin_popcount(s.mask) < 2) continue;
                std::vector<LatticeVector> hat_vecs{-s.c};
                std::vector<OrientedLine> hat_lines{{-s.c, -s.value}};
                for (size_t i = 0; i < n; ++i)
                    if (s.mask >> i & 1) {
                        hat_vecs.push_back(degree.vectors[i]);
                        hat_lines.push_back({degree.vectors[i], lam[i]});
                    }
                bool rank2 = false;
                for (size_t i = 1; i < hat_vecs.size() && !rank2; ++i)
                    rank2 = wedge(hat_vecs[0], hat_vecs[i]) != 0;
                if (!rank2) continue;
                for (const auto& T : enumerate_rational_curves(hat_vecs, hat_lines))
                    for (const auto& v : T.vertices) witnesses.push_back(v.pos);
            }
        } catch (const Error& e) {
            if (e.code() == Err::GeneralPositionFailure) continue;  // redraw
            throw;
        }

        // (r1): pairwise intersection points of non-parallel lines.
        {
            std::vector<OrientedLine> family;
            for (size_t i = 0; i < n; ++i) family.push_back({degree.vectors[i], lam[i]});
            for (const auto& s : subs) family.push_back({s.c, s.value});
            for (size_t i = 0; i < family.size(); ++i)
                for (size_t j = i + 1; j < family.size(); ++j) {
                    Int den = wedge(family[i].direction, family[j].direction);
                    if (den == 0) continue;
                    // grad_i = rotate_cw(dir_i); solve <grad_i,x>=v_i, <grad_j,x>=v_j.
                    const auto& di = family[i].direction;
                    const auto& dj = family[j].direction;
                    Rat vi = family[i].value, vj = family[j].value;
                    // x = (v_i * (-dj_x, -dj_y)... direct Cramer on the 2x2 system:
                    //   di.y x - di.x y = vi
                    //   dj.y x - dj.x y = vj
                    // determinant = -di.y dj.x + di.x dj.y = wedge(di,dj)... careful:
                    Rat det = Rat(di.x * dj.y - di.y * dj.x);  // wedge(di,dj)
                    Rat px = (vj * Rat(di.x) - vi * Rat(dj.x)) / det;
                    Rat py = (vj * Rat(di.y) - vi * Rat(dj.y)) / det;
                    witnesses.push_back({px, py});
                }
        }

        // Single scaling so every witness sits inside the unit disc and every
        // line stays within rho0 = 1/2 of its parallel through the origin.
        Rat bound(0);
        for (const auto& p : witnesses) bound = std::max(bound, norm2(p));
        for (size_t i = 0; i < n; ++i) {
            const auto& a = degree.vectors[i];
            Rat d2 = lam[i] * lam[i] / Rat(a.x * a.x + a.y * a.y);
            bound = std::max(bound, 4 * d2);
        }
        for (const auto& s : subs) {
            Rat d2 = s.value * s.value / Rat(s.c.x * s.c.x + s.c.y * s.c.y);
            bound = std::max(bound, 4 * d2);
        }
        Rat sigma(1);
        while (sigma * sigma * bound >= 1) sigma /= 2;
        sigma /= 2;  // strict margin
        for (auto& l : lam) l *= sigma;

        InitialData data;
        data.degree = degree;
        data.parity = parity;
        data.rho0 = Rat(1, 2);
        data.seed = seed;
        data.admissibility_overridden = overridden;
        for (size_t i = 0; i < n; ++i) data.lines.push_back({degree.vectors[i], lam[i]});

        // Direction family and its angular sectors.
        std::vector<LatticeVector> rays;
        {
            std::set<std::pair<Int, Int>> ray_set;
            auto add_dir = [&](const LatticeVector& c) {
                auto [u, p] = primitive_and_parity(c);
                ray_set.insert({u.x, u.y});
                ray_set.insert({-u.x, -u.y});
            };
            for (const auto& a : degree.vectors) add_dir(a);
            for (const auto& s : subs) add_dir(s.c);
            for (const auto& [x, y] : ray_set) rays.push_back({x, y});
            std::sort(rays.begin(), rays.end(), angle_less);
        }
        size_t nsec = rays.size();

        // Candidate b vectors: rotations of differences of lattice points of
        // the Newton polygon, of the requested parity.
        std::vector<LatticeVector> candidates;
        {
            std::set<std::pair<Int, Int>> cand_set;
            auto pts = lattice_points(degree.polygon);
            for (const auto& p1 : pts)
                for (const auto& p2 : pts) {
                    LatticeVector d = p1 - p2;
                    if (d.is_zero()) continue;
                    for (const LatticeVector& b : {rotate_ccw(d), rotate_cw(d)})
                        if (parity_of(b) == parity) cand_set.insert({b.x, b.y});
                }
            for (const auto& [x, y] : cand_set) candidates.push_back({x, y});
        }
        if (candidates.empty()) return {std::nullopt, true};

        // V per sector: b may not be parallel to any recession direction of K.
        std::vector<std::vector<LatticeVector>> vset_by_sector(nsec);
        std::vector<int> nonempty;
        for (size_t si = 0; si < nsec; ++si) {
            const auto& u1 = rays[si];
            const auto& u2 = rays[(si + 1) % nsec];
            auto in_cone = [&](const LatticeVector& v) {
                return wedge(u1, v) >= 0 && wedge(v, u2) >= 0;
            };
            for (const auto& b : candidates)
                if (!in_cone(b) && !in_cone(-b)) vset_by_sector[si].push_back(b);
            if (!vset_by_sector[si].empty()) nonempty.push_back(static_cast<int>(si));
        }
        if (nonempty.empty()) return {std::nullopt, true};

        int choice_index =
            (opts.k_component >= 0)
                ? opts.k_component % static_cast<int>(nonempty.size())
                : static_cast<int>(mix_seed(seed, "k-component") % nonempty.size());
        int sector = nonempty[choice_index];
        data.k_component = sector;
        data.k_component_count = static_cast<int>(nonempty.size());
        data.k_ray1 = rays[sector];
        data.k_ray2 = rays[(sector + 1) % nsec];
        data.vset = vset_by_sector[sector];
        std::sort(data.vset.begin(), data.vset.end());

        // K as an intersection of half-planes, one per family direction.
        LatticeVector interior = data.k_ray1 + data.k_ray2;
        {
            std::set<std::pair<Int, Int>> dirs;
            for (const auto& r : rays) {
                auto u = r;
                if (u.x < 0 || (u.x == 0 && u.y < 0)) u = -u;
                dirs.insert({u.x, u.y});
            }
            for (const auto& [x, y] : dirs) {
                LatticeVector grad = rotate_cw(LatticeVector{x, y});
                Int side = grad.x * interior.x + grad.y * interior.y;
                if (side == 0)
                    fail(Err::InternalInconsistency, "sector interior parallel to a family line");
                if (side < 0) grad = -grad;
                data.k_halfplanes.push_back({grad});
            }
        }

        // x0 = t * interior, doubling t until the full family of cycle
        // procedures certifies membership in Z(K, rho0, V).
        auto graft_sets = enumerate_H(degree);
        bool placed = false;
        Rat t(4);
        for (int grow = 0; grow < 64 && !placed; ++grow, t *= 2) {
            RatPoint x0{t * Rat(interior.x), t * Rat(interior.y)};
            if (!data.k_contains(x0)) continue;
            bool ok = true;
            for (const auto& b : data.vset) {
                Rat w = Rat(b.x) * x0.y - Rat(b.y) * x0.x;  // wedge(b, x0)
                if (w * w <= Rat(b.x * b.x + b.y * b.y)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            try {
                for (const auto& H : graft_sets) {
                    auto items = walk_items(H, degree, data.lines);
                    bool zero_factor = false;
                    for (const auto& sub : H.subsets) {
                        if (sub.size() < 2) continue;
                        LatticeVector c{0, 0};
                        bool rank2 = false;
                        for (int i : sub) c = c + degree.vectors[i];
                        for (int i : sub)
                            if (wedge(c, degree.vectors[i]) != 0) rank2 = true;
                        if (!rank2) zero_factor = true;
                    }
                    if (zero_factor) continue;  // contributes 0; never walked by g1
                    scan_couples(items, data.vset, x0, nullptr,
                                 [&](const RatPoint& xk, const LatticeVector& bk) {
                                     Rat w = Rat(bk.x) * xk.y - Rat(bk.y) * xk.x;
                                     if (w * w <= Rat(bk.x * bk.x + bk.y * bk.y))
                                         fail(Err::GeneralPositionFailure,
                                              "walk line meets the unit disc");
                                 });
                }
            } catch (const Error& e) {
                if (e.code() == Err::GeneralPositionFailure) continue;
                throw;
            }
            data.x0 = x0;
            placed = true;
        }
        if (!placed) continue;  // retry with fresh perturbations
        return {data, false};
    }
    fail(Err::GeneralPositionFailure, "could not certify initial data after 64 attempts");
}

}  // namespace tropref

#include "tropref/driver.hpp"

#include "tropref/oracle.hpp"
#include "tropref/orientkit.hpp"
#include "tropref/parallel.hpp"
#include "tropref/rng.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>

namespace tropref {

std::vector<GraftSet> enumerate_H(const DegreeSpec& degree) {
    int n = static_cast<int>(degree.vectors.size());
    if (n > 16) fail(Err::InvalidVector, "degree too large for graft enumeration");
    std::vector<GraftSet> out;
    std::vector<std::vector<int>> current;
    unsigned full = (1u << n) - 1;

    std::function<void(unsigned, unsigned)> rec = [&](unsigned decided, unsigned grafted) {
        if (decided == full) {
            if (grafted != full) out.push_back({current});
            return;
        }
        int i = 0;
        while (decided >> i & 1) ++i;
        // i stays ungrafted
        rec(decided | (1u << i), grafted);
        // or i becomes the minimum of a new subset
        std::vector<int> pool;
        for (int j = i + 1; j < n; ++j)
            if (!(decided >> j & 1)) pool.push_back(j);
        unsigned pn = static_cast<unsigned>(pool.size());
        for (unsigned mask = 0; mask < (1u << pn); ++mask) {
            std::vector<int> subset{i};
            unsigned bits = 1u << i;
            for (unsigned k = 0; k < pn; ++k)
                if (mask >> k & 1) {
                    subset.push_back(pool[k]);
                    bits |= 1u << pool[k];
                }
            LatticeVector c{0, 0};
            for (int j : subset) c = c + degree.vectors[j];
            if (c.is_zero()) continue;
            current.push_back(subset);
            rec(decided | bits, grafted | bits);
            current.pop_back();
        }
    };
    rec(0, 0);
    return out;
}

std::vector<WalkItem> walk_items(const GraftSet& H, const DegreeSpec& degree,
                                 const std::vector<OrientedLine>& lines) {
    if (lines.size() != degree.vectors.size())
        fail(Err::InvalidVector, "one line per degree element required");
    std::vector<WalkItem> items;
    std::vector<char> grafted(degree.vectors.size(), 0);
    for (size_t s = 0; s < H.subsets.size(); ++s) {
        std::vector<LatticeVector> vecs;
        std::vector<OrientedLine> ls;
        for (int i : H.subsets[s]) {
            grafted[i] = 1;
            vecs.push_back(degree.vectors[i]);
            ls.push_back(lines[i]);
        }
        WalkItem item;
        item.line = completing_line(vecs, ls);
        item.vector = item.line.direction;
        item.sign = -1;
        item.subset = static_cast<int>(s);
        items.push_back(std::move(item));
    }
    for (size_t i = 0; i < degree.vectors.size(); ++i) {
        if (grafted[i]) continue;
        WalkItem item;
        item.vector = degree.vectors[i];
        item.line = lines[i];
        item.sign = 1;
        item.element = static_cast<int>(i);
        items.push_back(std::move(item));
    }
    return items;
}

CycleData assemble_O(const std::vector<WalkItem>& items, const std::vector<int>& order,
                     const LatticeVector& b, const RatPoint& x0) {
    CycleData data;
    data.x0 = x0;
    data.b = b;
    for (int idx : order) {
        data.vectors.push_back(items[idx].vector);
        data.lines.push_back(items[idx].line);
        data.signs.push_back(items[idx].sign);
    }
    return data;
}

void scan_couples(
    const std::vector<WalkItem>& items, const std::vector<LatticeVector>& vset, const RatPoint& x0,
    const std::function<void(const std::vector<int>&, const LatticeVector&,
                             const ParamTropicalCurve&)>& on_success,
    const std::function<void(const RatPoint&, const LatticeVector&)>& on_state) {
    size_t r = items.size();
    if (r < 3) return;  // a simple cycle needs at least three vertices
    std::vector<int> order;
    std::vector<char> used(r, 0);

    std::function<void(const RatPoint&, const LatticeVector&, const LatticeVector&)> dfs =
        [&](const RatPoint& x, const LatticeVector& bk, const LatticeVector& b) {
            if (order.size() == r) {
                CycleData data = assemble_O(items, order, b, x0);
                CycleOutcome outcome = cycle_procedure(data);
                if (auto* T = std::get_if<ParamTropicalCurve>(&outcome))
                    if (on_success) on_success(order, b, *T);
                return;
            }
            for (size_t i = 0; i < r; ++i) {
                if (used[i]) continue;
                if (wedge(bk, items[i].vector) == 0) continue;  // degenerate wedge: skip
                StepResult step = cycle_step(x, bk, items[i].vector, items[i].sign, items[i].line);
                if (step.stopped) continue;
                LatticeVector bnext = bk - items[i].vector;
                if (on_state) on_state(step.next, bnext);
                used[i] = 1;
                order.push_back(static_cast<int>(i));
                dfs(step.next, bnext, b);
                order.pop_back();
                used[i] = 0;
            }
        };
    for (const auto& b : vset) dfs(x0, b, b);
}

namespace {

std::string hat_degree_key(std::vector<LatticeVector> vecs) {
    std::sort(vecs.begin(), vecs.end());
    std::ostringstream out;
    for (const auto& v : vecs) out << "(" << v.x << "," << v.y << ")";
    return out.str();
}

}  // namespace

G1Result g1_full(const DegreeSpec& degree, Parity parity, std::uint64_t seed,
                 const G1Options& opts) {
    std::map<std::string, LaurentPoly> g0_memo;
    std::mutex memo_mutex;

    for (int attempt = 0; attempt < 16; ++attempt) {
        std::uint64_t s =
            attempt == 0 ? seed : mix_seed(seed, "driver-retry" + std::to_string(attempt));
        auto built = build_initial_data(degree, parity, s, opts.initial);
        G1Result result;
        if (built.empty_vset) {
            result.empty_vset = true;
            return result;
        }
        result.data = *built.data;
        const InitialData& data = result.data;
        try {
            auto graft_sets = enumerate_H(degree);

            struct Hit {
                std::string key;
                LaurentPoly contribution;
                LaurentPoly factor;
                ParamTropicalCurve curve;
            };
            std::vector<std::vector<Hit>> hits(graft_sets.size());

            parallel_for(graft_sets.size(), [&](size_t hi) {
                const GraftSet& H = graft_sets[hi];
                // Product of rational invariants over the grafted subsets.
                LaurentPoly factor = LaurentPoly::constant(1);
                bool zero = false;
                for (const auto& subset : H.subsets) {
                    if (subset.size() == 1) continue;  // G0 of {-a, a} is 1
                    std::vector<LatticeVector> hat{LatticeVector{0, 0}};
                    LatticeVector c{0, 0};
                    for (int i : subset) c = c + degree.vectors[i];
                    hat[0] = -c;
                    bool rank2 = false;
                    for (int i : subset) {
                        hat.push_back(degree.vectors[i]);
                        if (wedge(c, degree.vectors[i]) != 0) rank2 = true;
                    }
                    if (!rank2) {
                        zero = true;  // no connected rational curve matches parallel constraints
                        break;
                    }
                    std::string key = hat_degree_key(hat);
                    LaurentPoly value;
                    bool have = false;
                    {
                        std::lock_guard<std::mutex> lock(memo_mutex);
                        auto it = g0_memo.find(key);
                        if (it != g0_memo.end()) {
                            value = it->second;
                            have = true;
                        }
                    }
                    if (!have) {
                        DegreeSpec hat_degree = validate_degree(hat, /*require_even=*/true);
                        value = g0(hat_degree, mix_seed(seed, "g0:" + key));
                        std::lock_guard<std::mutex> lock(memo_mutex);
                        g0_memo.emplace(key, value);
                    }
                    factor *= value;
                }
                if (zero) return;

                auto items = walk_items(H, degree, data.lines);
                scan_couples(items, data.vset, data.x0,
                             [&](const std::vector<int>& order, const LatticeVector& b,
                                 const ParamTropicalCurve& T) {
                                 Hit hit;
                                 hit.key = T.canonical_key();
                                 hit.factor = factor;
                                 hit.contribution = factor * refined_multiplicity_closed(T);
                                 hit.curve = T;
                                 hits[hi].push_back(std::move(hit));
                             },
                             nullptr);
            });

            std::set<std::string> keys;
            for (const auto& bucket : hits)
                for (const auto& hit : bucket)
                    if (!keys.insert(hit.key).second)
                        fail(Err::DuplicateCurve,
                             "two cyclic data produced the same elliptic curve");
            for (auto& bucket : hits)
                for (auto& hit : bucket) {
                    result.value += hit.contribution;
                    if (opts.collect_curves) {
                        result.curves.push_back(std::move(hit.curve));
                        result.curve_factors.push_back(std::move(hit.factor));
                    }
                }
            return result;
        } catch (const Error& e) {
            if (e.code() != Err::GeneralPositionFailure) throw;
        }
    }
    fail(Err::GeneralPositionFailure, "g1 failed to certify a generic scene");
}

ParamTropicalCurve graft(const ParamTropicalCurve& T_O, const std::vector<WalkItem>& items,
                         const std::vector<int>& order,
                         const std::vector<std::pair<int, ParamTropicalCurve>>& fragments) {
    ParamTropicalCurve T = T_O;
    for (const auto& [pos, F] : fragments) {
        if (pos < 0 || pos >= static_cast<int>(order.size()))
            fail(Err::FragmentMismatch, "fragment position out of range");
        const WalkItem& item = items[order[pos]];
        if (item.subset < 0) fail(Err::FragmentMismatch, "fragment attached to an ungrafted end");
        if (item.vector == LatticeVector{0, 0} || F.vertices.empty())
            fail(Err::FragmentMismatch, "degenerate fragment");
        const LatticeVector c = item.vector;

        // Locate the unique end of F directed by -c.
        int f_end = -1;
        for (size_t e = 0; e < F.ends.size(); ++e)
            if (F.ends[e].vector == -c) {
                if (f_end >= 0) fail(Err::FragmentMismatch, "fragment with two -c ends");
                f_end = static_cast<int>(e);
            }
        if (f_end < 0) fail(Err::FragmentMismatch, "fragment lacks the -c end");
        int f_vertex = F.ends[f_end].vertex;

        // The cycle vertex `pos` must lie strictly inside the ray R(v_F, -c).
        RatPoint xk = T_O.vertices[pos].pos;
        RatPoint vf = F.vertices[f_vertex].pos;
        RatPoint d = xk - vf;
        Rat cross = d.x * Rat(c.y) - Rat(c.x) * d.y;
        if (cross != 0) fail(Err::FragmentMismatch, "cycle vertex off the fragment end line");
        Rat tpar = (c.x != 0) ? d.x / Rat(-c.x) : d.y / Rat(-c.y);
        if (!(tpar > 0)) fail(Err::FragmentMismatch, "cycle vertex not on the open -c end");

        // Remove the grafted end of T at vertex `pos`.
        int removed = -1;
        for (size_t e = 0; e < T.ends.size(); ++e)
            if (T.ends[e].vertex == pos && T.ends[e].vector == c) {
                removed = static_cast<int>(e);
                break;
            }
        if (removed < 0) fail(Err::FragmentMismatch, "grafted end already replaced");
        T.ends.erase(T.ends.begin() + removed);

        int base = static_cast<int>(T.vertices.size());
        for (const auto& v : F.vertices) T.vertices.push_back(v);
        for (const auto& e : F.edges) {
            CurveEdge ne = e;
            ne.v1 += base;
            ne.v2 += base;
            T.edges.push_back(ne);
        }
        for (size_t e = 0; e < F.ends.size(); ++e) {
            if (static_cast<int>(e) == f_end) continue;
            CurveEnd ne = F.ends[e];
            ne.vertex += base;
            T.ends.push_back(ne);
        }
        CurveEdge bridge;
        bridge.v1 = pos;
        bridge.v2 = base + f_vertex;
        bridge.weight = lattice_length(c);
        bridge.primitive = {c.x / bridge.weight, c.y / bridge.weight};
        T.edges.push_back(bridge);
    }
    auto bal = check_balancing(T);
    if (!bal.ok) fail(Err::FragmentMismatch, "grafted curve unbalanced");
    auto gs = genus_and_simplicity(T);
    if (gs.genus != 1) fail(Err::FragmentMismatch, "grafted curve of wrong genus");
    if (!gs.simple) fail(Err::FragmentMismatch, "grafted curve not simple: " + gs.why_not_simple);
    return T;
}

}  // namespace tropref

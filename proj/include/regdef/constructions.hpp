#ifndef REGDEF_CONSTRUCTIONS_HPP
#define REGDEF_CONSTRUCTIONS_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regdef/coloring.hpp"
#include "regdef/errors.hpp"
#include "regdef/factorization.hpp"
#include "regdef/graph.hpp"
#include "regdef/labels.hpp"
#include "regdef/trace.hpp"

namespace regdef {

// ------------------------------------------------------------ feasibility ----

enum class FeasibilityReason {
    OK,
    RatioViolated,
    BothOdd,
    TEqualsKMinus2,
    TooFewVertices,
    ParamOutOfRange
};

inline const char* to_string(FeasibilityReason r) {
    switch (r) {
        case FeasibilityReason::OK:             return "OK";
        case FeasibilityReason::RatioViolated:  return "RatioViolated";
        case FeasibilityReason::BothOdd:        return "BothOdd";
        case FeasibilityReason::TEqualsKMinus2: return "TEqualsKMinus2";
        case FeasibilityReason::TooFewVertices: return "TooFewVertices";
        case FeasibilityReason::ParamOutOfRange: return "ParamOutOfRange";
    }
    return "?";
}

struct FeasibilityVerdict {
    bool feasible = false;
    FeasibilityReason reason = FeasibilityReason::ParamOutOfRange;
};

// Necessary conditions for an r-regular k-chromatic graph on n vertices with
// a defining set of size k-1, checked in a fixed order so the reported
// reason is deterministic.
inline FeasibilityVerdict feasibility(long long n, long long r, long long k) {
    if (n < 1 || r < 0 || k < 1) return {false, FeasibilityReason::ParamOutOfRange};
    if (r * k > n * (k - 1)) return {false, FeasibilityReason::RatioViolated};
    if (n % 2 == 1 && r % 2 == 1) return {false, FeasibilityReason::BothOdd};
    if (n == 3 * k - 1 && r - 2 * (k - 1) == k - 2)
        return {false, FeasibilityReason::TEqualsKMinus2};
    if (r >= 2 * (k - 1) && n < 2 * k) return {false, FeasibilityReason::TooFewVertices};
    return {true, FeasibilityReason::OK};
}

// --------------------------------------------------------- result + audit ----

struct ConstructionResult {
    Graph graph;
    ColorAssignment canonical_coloring;
    ColorAssignment defining_set;
    ConstructionTrace trace;
    int claimed_r = 0;
    int claimed_k = 0;
    std::vector<int> clique;  // ids of a K_k colored with all k colors
};

// ------------------------------------------------------------ trace replay ----

namespace detail {

// Mutable edge-set view used both by the builders and by trace replay, so a
// construction and its recorded trace cannot drift apart.
struct GraphBuilder {
    std::vector<VertexLabel> labels;
    std::map<std::string, int> index;
    std::set<IdEdge> edge_set;

    explicit GraphBuilder(const Graph& g) {
        for (const auto& l : g.labels()) add_vertex(l);
        for (auto [a, b] : g.edges()) edge_set.insert({a, b});
    }

    int id(const VertexLabel& l) const {
        auto it = index.find(render_label(l));
        if (it == index.end())
            throw UnknownEndpointError("no vertex labeled '" + render_label(l) + "'");
        return it->second;
    }

    void add_vertex(const VertexLabel& l) {
        auto [it, fresh] = index.emplace(render_label(l), static_cast<int>(labels.size()));
        (void)it;
        if (!fresh) throw DuplicateLabelError("duplicate vertex label '" + render_label(l) + "'");
        labels.push_back(l);
    }

    void add_edge(const VertexLabel& a, const VertexLabel& b) {
        int ia = id(a), ib = id(b);
        if (ia == ib) throw LoopEdgeError("loop at '" + render_label(a) + "'");
        if (!edge_set.insert(norm_edge(ia, ib)).second)
            throw DuplicateEdgeError("edge " + render_label(a) + "-" + render_label(b) +
                                     " already present");
    }

    void remove_edge(const VertexLabel& a, const VertexLabel& b) {
        int ia = id(a), ib = id(b);
        if (edge_set.erase(norm_edge(ia, ib)) == 0)
            throw EdgeNotInGraphError("edge " + render_label(a) + "-" + render_label(b) +
                                      " not in graph");
    }

    Graph to_graph() const {
        Graph g(labels);
        for (auto [a, b] : edge_set) g.add_edge(a, b);
        return g;
    }
};

inline void apply_step(GraphBuilder& gb, const TraceStep& st) {
    std::set<std::pair<std::string, std::string>> del;
    for (const auto& [a, b] : st.deleted_edges) {
        auto na = render_label(a), nb = render_label(b);
        del.insert(na < nb ? std::make_pair(na, nb) : std::make_pair(nb, na));
    }
    for (const auto& [a, b] : st.added_edges) {
        auto na = render_label(a), nb = render_label(b);
        auto key = na < nb ? std::make_pair(na, nb) : std::make_pair(nb, na);
        if (del.count(key))
            throw Error("trace step deletes and adds the same edge " + na + "-" + nb);
    }
    if (st.new_vertex) gb.add_vertex(*st.new_vertex);
    for (const auto& [a, b] : st.deleted_edges) gb.remove_edge(a, b);
    for (const auto& [a, b] : st.added_edges) gb.add_edge(a, b);
}

// Layered join base: every layer has k vertices, vertex j of a layer gets
// color j, consecutive layers are chromatically joined, and the listed
// complete layers are cliques.
inline Graph layered_graph(const std::vector<std::vector<VertexLabel>>& layers,
                           const std::set<int>& complete_layers) {
    std::vector<VertexLabel> all;
    for (const auto& layer : layers)
        for (const auto& l : layer) all.push_back(l);
    Graph g(std::move(all));
    int k = static_cast<int>(layers[0].size());
    int offset = 0;
    for (size_t li = 0; li < layers.size(); ++li) {
        if (complete_layers.count(static_cast<int>(li)))
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b) g.add_edge(offset + a, offset + b);
        if (li + 1 < layers.size())
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b)
                    if (a != b) g.add_edge(offset + a, offset + k + b);
        offset += k;
    }
    return g;
}

inline std::vector<VertexLabel> plain_layer(Family fam, int k) {
    std::vector<VertexLabel> out;
    for (int i = 1; i <= k; ++i) out.push_back({fam, i, false});
    return out;
}

// Theorem 2/3 layer naming: u_1..u_m, then primed u_1'..u_, then (odd k only)
// the unprimed u_k; absolute position in the layer is the canonical color.
inline std::vector<VertexLabel> primed_layer(Family fam, int k) {
    int m = k / 2;  // (k-1)/2 when k is odd
    std::vector<VertexLabel> out;
    for (int i = 1; i <= m; ++i) out.push_back({fam, i, false});
    for (int i = 1; i <= m; ++i) out.push_back({fam, i, true});
    if (k % 2 == 1) out.push_back({fam, k, false});
    return out;
}

inline Graph glk_base_graph(int l, int k) {
    static const Family fams[5] = {Family::U, Family::V, Family::W, Family::X, Family::Y};
    std::vector<std::vector<VertexLabel>> layers;
    for (int i = 0; i < l; ++i) layers.push_back(plain_layer(fams[i], k));
    return layered_graph(layers, {0, l - 1});
}

}  // namespace detail

inline Graph trace_base_graph(BaseFamily fam, const ConstructionParams& p) {
    switch (fam) {
        case BaseFamily::Glk:
            return detail::glk_base_graph(p.l.value(), p.k);
        case BaseFamily::T1: {
            Graph g3 = detail::glk_base_graph(3, p.k);
            return g3.without_vertex(g3.id_of(render_label(v_(p.k))));
        }
        case BaseFamily::T2:
        case BaseFamily::T3:
            return detail::layered_graph(
                {detail::primed_layer(Family::U, p.k), detail::primed_layer(Family::V, p.k)},
                {0, 1});
        case BaseFamily::T4:
            return detail::glk_base_graph(2, p.k);
    }
    throw Error("unknown base family");
}

inline Graph replay_trace(const ConstructionTrace& tr) {
    detail::GraphBuilder gb(trace_base_graph(tr.base_family, tr.params));
    for (const auto& st : tr.steps) detail::apply_step(gb, st);
    return gb.to_graph();
}

namespace detail {

// Shared post-construction audit. The clique certificate plus the proper
// canonical k-coloring pins the chromatic number exactly without any search;
// uniqueness of the extension is verified by the counting engine.
inline void audit_result(const ConstructionResult& r, const char* who) {
    auto fail = [&](const std::string& what) {
        throw InternalRecipeInconsistencyError(std::string(who) + ": " + what);
    };
    r.graph.check_consistent();
    if (!r.graph.is_regular(r.claimed_r)) {
        for (int v = 0; v < r.graph.order(); ++v)
            if (r.graph.degree(v) != r.claimed_r)
                fail("vertex " + render_label(r.graph.label(v)) + " has degree " +
                     std::to_string(r.graph.degree(v)) + ", wanted " +
                     std::to_string(r.claimed_r));
    }
    if (!r.canonical_coloring.is_total()) fail("canonical coloring is not total");
    if (!proper_on_assigned(r.graph, r.canonical_coloring))
        fail("canonical coloring is improper");
    if (static_cast<int>(r.clique.size()) != r.claimed_k)
        fail("claimed clique has wrong size");
    std::set<int> clique_colors;
    for (size_t i = 0; i < r.clique.size(); ++i) {
        clique_colors.insert(r.canonical_coloring.colors[r.clique[i]]);
        for (size_t j = i + 1; j < r.clique.size(); ++j)
            if (!r.graph.has_edge(r.clique[i], r.clique[j]))
                fail("claimed clique misses edge " +
                     render_label(r.graph.label(r.clique[i])) + "-" +
                     render_label(r.graph.label(r.clique[j])));
    }
    for (int c = 1; c <= r.claimed_k; ++c)
        if (!clique_colors.count(c)) fail("clique does not use color " + std::to_string(c));
    int assigned = 0;
    for (int v = 0; v < r.graph.order(); ++v) {
        int c = r.defining_set.colors[v];
        if (c == 0) continue;
        ++assigned;
        if (c != r.canonical_coloring.colors[v])
            fail("defining set disagrees with the canonical coloring at " +
                 render_label(r.graph.label(v)));
    }
    if (assigned != r.claimed_k - 1) fail("defining set size is not k-1");
    std::optional<ColorAssignment> witness;
    if (count_extensions(r.graph, r.defining_set, r.claimed_k, 2, {}, &witness) != 1)
        fail("claimed defining set does not extend uniquely");
    if (!witness || witness->colors != r.canonical_coloring.colors)
        fail("unique extension is not the canonical coloring");
    if (!(replay_trace(r.trace) == r.graph)) fail("trace replay mismatch");
}

// Absorbing step: the new vertex joins exactly the endpoints of the edges it
// deletes, which must form a matching.
inline TraceStep absorb_step(const GraphBuilder& gb, const VertexLabel& nv,
                             const std::vector<std::pair<VertexLabel, VertexLabel>>& deleted) {
    std::set<int> ends;
    for (const auto& [a, b] : deleted) {
        if (!ends.insert(gb.id(a)).second || !ends.insert(gb.id(b)).second)
            throw InternalRecipeInconsistencyError(
                "deleted edges around " + render_label(nv) + " are not a matching");
    }
    TraceStep st;
    st.new_vertex = nv;
    st.deleted_edges = deleted;
    for (int e : ends) st.added_edges.emplace_back(nv, gb.labels[e]);
    return st;
}

inline int rep1(int value, int mod) {  // representative in 1..mod
    int r = value % mod;
    if (r <= 0) r += mod;
    return r;
}

}  // namespace detail

// ---------------------------------------------------------- chromatic join ----

inline Graph chromatic_join(const Graph& g, const ColorAssignment& cg, const Graph& h,
                            const ColorAssignment& ch) {
    if (!cg.is_total() || !proper_on_assigned(g, cg))
        throw ImproperInputColoringError("left coloring is not a proper total coloring");
    if (!ch.is_total() || !proper_on_assigned(h, ch))
        throw ImproperInputColoringError("right coloring is not a proper total coloring");
    std::vector<VertexLabel> labels = g.labels();
    for (const auto& l : h.labels()) {
        if (g.has_label(render_label(l)))
            throw LabelCollisionError("label '" + render_label(l) + "' on both sides");
        labels.push_back(l);
    }
    Graph out(std::move(labels));
    for (auto [a, b] : g.edges()) out.add_edge(a, b);
    int off = g.order();
    for (auto [a, b] : h.edges()) out.add_edge(off + a, off + b);
    for (int a = 0; a < g.order(); ++a)
        for (int b = 0; b < h.order(); ++b)
            if (cg.colors[a] != ch.colors[b]) out.add_edge(a, off + b);
    return out;
}

// ------------------------------------------------------------------- G_l(k) ----

inline ConstructionResult build_glk(int l, int k) {
    if (k < 2)
        throw InfeasibleParamsError("layer chain needs k >= 2", ParamRejection::OutOfRange);
    if (l < 2)
        throw InfeasibleParamsError("layer chain needs l >= 2", ParamRejection::OutOfRange);
    if (l > 5)
        throw InfeasibleParamsError("layer chain naming supports at most 5 layers",
                                    ParamRejection::OutOfRange);
    ConstructionTrace trace;
    trace.base_family = BaseFamily::Glk;
    trace.params.k = k;
    trace.params.l = l;
    Graph g = replay_trace(trace);
    int n = l * k;
    ColorAssignment canonical = ColorAssignment::empty(n, k);
    for (int v = 0; v < n; ++v) canonical.colors[v] = v % k + 1;
    ColorAssignment dset = ColorAssignment::empty(n, k);
    for (int i = 0; i < k - 1; ++i) dset.colors[i] = i + 1;
    ConstructionResult result{std::move(g), std::move(canonical), std::move(dset),
                              std::move(trace), 2 * (k - 1), k, {}};
    for (int i = 0; i < k; ++i) result.clique.push_back(i);
    detail::audit_result(result, "glk");
    return result;
}

// ---------------------------------------------------------------- Theorem 1 ----

inline ConstructionResult build_theorem1(int k, int t) {
    if (k < 3)
        throw InfeasibleParamsError("this family needs k >= 3", ParamRejection::OutOfRange);
    if (t < 0)
        throw InfeasibleParamsError("t must be nonnegative", ParamRejection::OutOfRange);
    if (t == k - 2)
        throw InfeasibleParamsError(
            "t = k-2 admits no such graph: a chromatic class of size 2 would need degree r+1",
            ParamRejection::TEqualsKMinus2);
    if (t > k - 2)
        throw InfeasibleParamsError("t > k-2 violates the degree ratio bound",
                                    ParamRejection::OutOfRange);
    if (k % 2 == 0 && t % 2 == 1)
        throw InfeasibleParamsError("n = 3k-1 is odd for even k, so r = 2(k-1)+t must be even",
                                    ParamRejection::ParityViolation);

    ConstructionTrace trace;
    trace.base_family = BaseFamily::T1;
    trace.params.k = k;
    trace.params.t = t;

    // rewiring step: the deleted hub's neighbors are rejoined shifted by one
    TraceStep rewire;
    for (int i = 1; i <= k - 2; ++i) rewire.added_edges.emplace_back(u_(i), w_(i + 1));
    rewire.added_edges.emplace_back(u_(k - 1), w_(1));
    trace.steps.push_back(std::move(rewire));

    for (int j = 1; j <= t; ++j) {
        TraceStep round;
        for (int i = 1; i <= k; ++i)
            round.added_edges.emplace_back(u_(i), w_(detail::rep1(i + j + 2, k)));
        trace.steps.push_back(std::move(round));
    }

    // degree top-up on the v layer: 1-factors for even order, Hamiltonian
    // 2-factors for odd order
    std::vector<int> vidx(static_cast<size_t>(k - 1));
    for (int i = 0; i < k - 1; ++i) vidx[i] = i + 1;
    auto emit_factor = [&](const std::vector<IdEdge>& factor) {
        TraceStep st;
        for (auto [a, b] : factor) st.added_edges.emplace_back(v_(a), v_(b));
        trace.steps.push_back(std::move(st));
    };
    if (t > 0) {
        if (k % 2 == 1) {
            Factorization f = one_factorization(vidx);
            for (int j = 0; j < t; ++j) emit_factor(f.factors[j]);
        } else {
            Factorization f = two_factorization(vidx, t / 2);
            for (const auto& cycle : f.factors) emit_factor(cycle);
        }
    }

    Graph g = replay_trace(trace);
    int n = 3 * k - 1;
    ColorAssignment canonical = ColorAssignment::empty(n, k);
    for (int v = 0; v < n; ++v) canonical.colors[v] = v < k ? v + 1 : (v - k) % k + 1;
    // ids: u_1..u_k = 0..k-1, v_1..v_{k-1} = k..2k-2, w_1..w_k = 2k-1..3k-2
    for (int i = 0; i < k; ++i) canonical.colors[2 * k - 1 + i] = i + 1;
    for (int i = 0; i < k - 1; ++i) canonical.colors[k + i] = i + 1;
    ColorAssignment dset = ColorAssignment::empty(n, k);
    for (int i = 0; i < k - 1; ++i) dset.colors[i] = i + 1;
    ConstructionResult result{std::move(g), std::move(canonical), std::move(dset),
                              std::move(trace), 2 * (k - 1) + t, k, {}};
    for (int i = 0; i < k; ++i) result.clique.push_back(i);
    detail::audit_result(result, "theorem 1");
    return result;
}

// ------------------------------------------------------------- Theorems 2/3 ----

namespace detail {

// Index helpers for the primed two-layer graphs. abs runs 1..k through the
// layer; the display label depends on the construction's half offset.
struct PrimedLayout {
    int k;
    int m;  // half offset

    VertexLabel u_abs(int a) const { return label(Family::U, a); }
    VertexLabel v_abs(int a) const { return label(Family::V, a); }
    VertexLabel label(Family f, int a) const {
        if (a <= m) return {f, a, false};
        if (a <= 2 * m) return {f, a - m, true};
        return {f, k, false};  // odd k only
    }
    int u_id(int a) const { return a - 1; }
    int v_id(int a) const { return k + a - 1; }
};

inline void sort_by_ids(const GraphBuilder& gb,
                        std::vector<std::pair<VertexLabel, VertexLabel>>& edges) {
    std::sort(edges.begin(), edges.end(), [&](const auto& e1, const auto& e2) {
        auto k1 = norm_edge(gb.id(e1.first), gb.id(e1.second));
        auto k2 = norm_edge(gb.id(e2.first), gb.id(e2.second));
        return k1 < k2;
    });
}

}  // namespace detail

inline ConstructionResult build_theorem2(int k, int s) {
    if (k < 3 || k % 2 == 0)
        throw InfeasibleParamsError("this family needs odd k >= 3", ParamRejection::OutOfRange);
    if (s < 1 || s > k - 2)
        throw InfeasibleParamsError("s must lie in 1..k-2", ParamRejection::OutOfRange);
    int m = (k - 1) / 2;
    detail::PrimedLayout L{k, m};

    ConstructionTrace trace;
    trace.base_family = BaseFamily::T2;
    trace.params.k = k;
    trace.params.s = s;
    detail::GraphBuilder gb(trace_base_graph(BaseFamily::T2, trace.params));

    int xc = std::min(s, m);
    int yc = s - xc;
    auto M = cyclic_bipartite_matchings(m);

    for (int i = 1; i <= xc; ++i) {
        std::vector<std::pair<VertexLabel, VertexLabel>> deleted;
        for (auto [t, sig] : M[i - 1]) deleted.emplace_back(L.u_abs(t), L.u_abs(sig + m));
        for (auto [t, sig] : M[i - 1]) deleted.emplace_back(L.v_abs(t), L.v_abs(sig + m));
        TraceStep st = detail::absorb_step(gb, x_(i), deleted);
        detail::apply_step(gb, st);
        trace.steps.push_back(std::move(st));
    }

    std::vector<int> y_color(static_cast<size_t>(yc) + 1, 0);
    if (yc > 0) {
        // reindexed 1-factorizations of the two induced complete subgraphs
        std::vector<int> a_ids, b_ids;
        std::vector<std::pair<int, IdEdge>> a_req, b_req;
        if (k % 4 == 1) {
            for (int i = 1; i <= m; ++i) a_ids.push_back(L.u_id(m + i));
            for (int i = 1; i <= m; ++i) b_ids.push_back(L.v_id(i));
            for (int t = 1; t <= m - 1; ++t) {
                a_req.push_back({t, norm_edge(L.u_id(m + t), L.u_id(2 * m))});
                b_req.push_back({t, norm_edge(L.v_id(t), L.v_id(m))});
            }
        } else {
            for (int i = 1; i <= m; ++i) a_ids.push_back(L.u_id(m + i));
            a_ids.push_back(L.u_id(k));
            for (int i = 1; i <= m; ++i) b_ids.push_back(L.v_id(i));
            b_ids.push_back(L.v_id(k));
            for (int t = 1; t <= m; ++t) {
                a_req.push_back({t, norm_edge(L.u_id(m + t), L.u_id(k))});
                b_req.push_back({t, norm_edge(L.v_id(t), L.v_id(k))});
            }
        }
        Factorization FA = reindex_factorization(one_factorization(a_ids), a_req);
        Factorization FB = reindex_factorization(one_factorization(b_ids), b_req);

        for (int t = 1; t <= yc; ++t) {
            std::vector<std::pair<VertexLabel, VertexLabel>> deleted;
            auto label_of = [&](int id) { return gb.labels[id]; };
            IdEdge spare_a = (k % 4 == 1) ? norm_edge(L.u_id(m + t), L.u_id(2 * m))
                                          : norm_edge(L.u_id(m + t), L.u_id(k));
            IdEdge spare_b = (k % 4 == 1) ? norm_edge(L.v_id(t), L.v_id(m))
                                          : norm_edge(L.v_id(t), L.v_id(k));
            std::vector<std::pair<VertexLabel, VertexLabel>> fpart, fppart;
            for (auto e : FA.factors[t - 1])
                if (e != spare_a) fpart.emplace_back(label_of(e.first), label_of(e.second));
            for (auto e : FB.factors[t - 1])
                if (e != spare_b) fppart.emplace_back(label_of(e.first), label_of(e.second));
            detail::sort_by_ids(gb, fpart);
            detail::sort_by_ids(gb, fppart);
            for (auto& e : fpart) deleted.push_back(e);
            for (auto& e : fppart) deleted.push_back(e);
            deleted.emplace_back(x_(1), L.v_abs(t));
            for (int j = 2; j <= m; ++j)
                deleted.emplace_back(x_(j), L.u_abs(detail::rep1(t + j - 1, m)));
            if (k % 4 == 1) {
                deleted.emplace_back(L.u_abs(t), L.v_abs(m));
                deleted.emplace_back(L.u_abs(m + t), L.v_abs(k));
                y_color[t] = k - 1;
            } else {
                deleted.emplace_back(L.v_abs(k), L.u_abs(t));
                y_color[t] = t + m;
            }
            TraceStep st = detail::absorb_step(gb, y_(t), deleted);
            detail::apply_step(gb, st);
            trace.steps.push_back(std::move(st));
        }
    }

    Graph g = gb.to_graph();
    int n = 2 * k + s;
    ColorAssignment canonical = ColorAssignment::empty(n, k);
    for (int a = 1; a <= k; ++a) {
        canonical.colors[L.u_id(a)] = a;
        canonical.colors[L.v_id(a)] = a;
    }
    for (int i = 1; i <= xc; ++i) canonical.colors[2 * k + i - 1] = k;
    for (int t = 1; t <= yc; ++t) canonical.colors[2 * k + xc + t - 1] = y_color[t];
    ColorAssignment dset = ColorAssignment::empty(n, k);
    for (int a = 1; a <= k - 1; ++a) dset.colors[L.u_id(a)] = a;
    ConstructionResult result{std::move(g), std::move(canonical), std::move(dset),
                              std::move(trace), 2 * (k - 1), k, {}};
    for (int a = 1; a <= m; ++a) result.clique.push_back(L.u_id(a));
    for (int a = m + 1; a <= 2 * m; ++a) result.clique.push_back(L.v_id(a));
    result.clique.push_back(2 * k);  // x_1
    detail::audit_result(result, "theorem 2");
    return result;
}

inline ConstructionResult build_theorem3(int k, int s) {
    if (k < 4 || k % 2 == 1)
        throw InfeasibleParamsError("this family needs even k >= 4", ParamRejection::OutOfRange);
    if (s < 1 || s > k - 2)
        throw InfeasibleParamsError("s must lie in 1..k-2", ParamRejection::OutOfRange);
    int m = k / 2;
    detail::PrimedLayout L{k, m};

    ConstructionTrace trace;
    trace.base_family = BaseFamily::T3;
    trace.params.k = k;
    trace.params.s = s;
    detail::GraphBuilder gb(trace_base_graph(BaseFamily::T3, trace.params));

    int xc = std::min(s, m - 1);
    int yc = s - xc;
    auto M = cyclic_bipartite_matchings(m);

    for (int i = 1; i <= xc; ++i) {
        std::vector<std::pair<VertexLabel, VertexLabel>> deleted;
        // spares keep the last primed column untouched: u_{m-i}u_{m'} in
        // M_{i+1} and v_{m-i+1}v_{m'} in M'_i
        for (auto [t, sig] : M[i]) {
            if (t == m - i) continue;
            deleted.emplace_back(L.u_abs(t), L.u_abs(sig + m));
        }
        for (auto [t, sig] : M[i - 1]) {
            if (t == m - i + 1) continue;
            deleted.emplace_back(L.v_abs(t), L.v_abs(sig + m));
        }
        deleted.emplace_back(L.u_abs(m - i), L.v_abs(m - i + 1));
        TraceStep st = detail::absorb_step(gb, x_(i), deleted);
        detail::apply_step(gb, st);
        trace.steps.push_back(std::move(st));
    }

    std::vector<int> y_color(static_cast<size_t>(yc) + 1, 0);
    if (yc > 0 && k == 4) {
        // The literal recipe breaks down at k=4 (the one leftover factor edge
        // forces deletions that cut off every color at the new vertex), so
        // this smallest case takes its deletions from the nonessential pool
        // directly: one matching edge from each of the three families.
        for (int t = 1; t <= yc; ++t) {
            std::vector<std::pair<VertexLabel, VertexLabel>> deleted;
            deleted.emplace_back(L.u_abs(1), L.u_abs(3));   // u1u1'
            deleted.emplace_back(L.v_abs(3), L.v_abs(4));   // v1'v2'
            deleted.emplace_back(x_(1), L.v_abs(1));        // x1v1
            y_color[t] = 2;
            TraceStep st = detail::absorb_step(gb, y_(t), deleted);
            detail::apply_step(gb, st);
            trace.steps.push_back(std::move(st));
        }
    } else if (yc > 0) {
        std::vector<int> a_ids, b_ids;
        std::vector<std::pair<int, IdEdge>> a_req, b_req;
        if (k % 4 == 0) {
            for (int i = 1; i <= m; ++i) a_ids.push_back(L.u_id(m + i));
            for (int i = 1; i <= m; ++i) b_ids.push_back(L.v_id(i));
            for (int t = 1; t <= m - 1; ++t) {
                a_req.push_back({t, norm_edge(L.u_id(m + t), L.u_id(k))});
                b_req.push_back({t, norm_edge(L.v_id(t), L.v_id(m))});
            }
        } else {
            for (int i = 1; i <= m; ++i) a_ids.push_back(L.u_id(m + i));
            a_ids.push_back(L.u_id(1));  // u_1 is the fixed vertex
            for (int i = 1; i <= m; ++i) b_ids.push_back(L.v_id(i));
            b_ids.push_back(L.v_id(k));  // v_{m'}
            for (int t = 1; t <= m; ++t) {
                a_req.push_back({t, norm_edge(L.u_id(1), L.u_id(m + t))});
                b_req.push_back({t, norm_edge(L.v_id(t), L.v_id(k))});
            }
        }
        Factorization FA = reindex_factorization(one_factorization(a_ids), a_req);
        Factorization FB = reindex_factorization(one_factorization(b_ids), b_req);

        // A factor edge v_i v_{i+1} cannot be deleted around the clique, so
        // the cyclic matching M'_m lends its v_{i'} v_{i+1} instead.
        auto substitute = [&](IdEdge e) -> std::pair<VertexLabel, VertexLabel> {
            int a1 = e.first - k + 1, b1 = e.second - k + 1;  // v-layer abs
            if (a1 >= 1 && b1 <= m && b1 == a1 + 1)
                return {L.v_abs(a1 + m), L.v_abs(b1)};
            return {gb.labels[e.first], gb.labels[e.second]};
        };
        auto is_consecutive = [&](IdEdge e) {
            int a1 = e.first - k + 1, b1 = e.second - k + 1;
            return a1 >= 1 && b1 <= m && b1 == a1 + 1;
        };

        for (int t = 1; t <= yc; ++t) {
            std::vector<std::pair<VertexLabel, VertexLabel>> deleted;
            auto label_of = [&](int id) { return gb.labels[id]; };
            if (k % 4 == 0) {
                IdEdge spare_a = norm_edge(L.u_id(m + t), L.u_id(k));
                IdEdge anchor_b = norm_edge(L.v_id(t), L.v_id(m));
                std::vector<std::pair<VertexLabel, VertexLabel>> fpart;
                for (auto e : FA.factors[t - 1])
                    if (e != spare_a) fpart.emplace_back(label_of(e.first), label_of(e.second));
                detail::sort_by_ids(gb, fpart);
                for (auto& e : fpart) deleted.push_back(e);
                std::vector<IdEdge> rest;
                int smallest_consec = 0;
                for (auto e : FB.factors[t - 1]) {
                    if (is_consecutive(e)) {
                        int i1 = e.first - k + 1;
                        if (smallest_consec == 0 || i1 < smallest_consec) smallest_consec = i1;
                    }
                    if (e != anchor_b) rest.push_back(e);
                }
                std::sort(rest.begin(), rest.end());
                deleted.push_back(substitute(anchor_b));
                for (auto e : rest) deleted.push_back(substitute(e));
                if (smallest_consec > 0)
                    deleted.emplace_back(L.v_abs(smallest_consec), L.v_abs(k));
                else
                    deleted.emplace_back(L.v_abs(detail::rep1(t, m - 1) + m), L.v_abs(k));
                for (int j = 1; j <= m - 1; ++j)
                    deleted.emplace_back(x_(j), L.u_abs(detail::rep1(t + j, m)));
                y_color[t] = (t == m - 1) ? m - 1 : t + m;
            } else {
                // find the factor's partner of u_{m'}; its matching edge in
                // M_1 comes out too
                IdEdge req_a = norm_edge(L.u_id(1), L.u_id(m + t));
                int j = 0;
                for (auto e : FA.factors[t - 1]) {
                    if (e == req_a) continue;
                    if (e.first == L.u_id(k)) j = e.second - L.u_id(m + 1) + 1;
                    if (e.second == L.u_id(k)) j = e.first - L.u_id(m + 1) + 1;
                }
                if (j < 1 || j > m - 1)
                    throw InternalRecipeInconsistencyError(
                        "theorem 3: could not locate the partner of the last primed vertex");
                IdEdge kept = norm_edge(L.u_id(m + j), L.u_id(k));
                std::vector<std::pair<VertexLabel, VertexLabel>> fpart;
                for (auto e : FA.factors[t - 1])
                    if (e != req_a && e != kept)
                        fpart.emplace_back(label_of(e.first), label_of(e.second));
                detail::sort_by_ids(gb, fpart);
                for (auto& e : fpart) deleted.push_back(e);
                IdEdge anchor_b = norm_edge(L.v_id(t), L.v_id(k));
                std::vector<IdEdge> rest;
                for (auto e : FB.factors[t - 1])
                    if (e != anchor_b) rest.push_back(e);
                std::sort(rest.begin(), rest.end());
                deleted.push_back(substitute(anchor_b));
                for (auto e : rest) deleted.push_back(substitute(e));
                deleted.emplace_back(L.u_abs(j), L.u_abs(j + m));
                for (int a = 1; a <= m - 1; ++a)
                    deleted.emplace_back(x_(a), L.u_abs(detail::rep1(j + a, m)));
                y_color[t] = t + m;
            }
            TraceStep st = detail::absorb_step(gb, y_(t), deleted);
            detail::apply_step(gb, st);
            trace.steps.push_back(std::move(st));
        }
    }

    Graph g = gb.to_graph();
    int n = 2 * k + s;
    ColorAssignment canonical = ColorAssignment::empty(n, k);
    for (int a = 1; a <= k; ++a) {
        canonical.colors[L.u_id(a)] = a;
        canonical.colors[L.v_id(a)] = a;
    }
    for (int i = 1; i <= xc; ++i) canonical.colors[2 * k + i - 1] = k;
    for (int t = 1; t <= yc; ++t) canonical.colors[2 * k + xc + t - 1] = y_color[t];
    ColorAssignment dset = ColorAssignment::empty(n, k);
    for (int a = 1; a <= k - 1; ++a) dset.colors[L.u_id(a)] = a;
    ConstructionResult result{std::move(g), std::move(canonical), std::move(dset),
                              std::move(trace), 2 * (k - 1), k, {}};
    for (int a = 1; a <= m; ++a) result.clique.push_back(L.u_id(a));
    result.clique.push_back(L.u_id(k));  // u_{m'}
    for (int a = m + 1; a <= k - 1; ++a) result.clique.push_back(L.v_id(a));
    detail::audit_result(result, "theorem 3");
    return result;
}

// ---------------------------------------------------------------- Theorem 4 ----

inline ConstructionResult build_theorem4(int k, int s, int t) {
    if (k < 4)
        throw InfeasibleParamsError("this family needs k >= 4", ParamRejection::OutOfRange);
    if (s < 2 || s > k - 2)
        throw InfeasibleParamsError("s must lie in 2..k-2", ParamRejection::OutOfRange);
    if (t < 1 || t >= s)
        throw InfeasibleParamsError("t must lie in 1..s-1 (the degree ratio bound)",
                                    ParamRejection::OutOfRange);
    if (s % 2 == 1 && t % 2 == 1)
        throw InfeasibleParamsError("n = 2k+s and r = 2(k-1)+t cannot both be odd",
                                    ParamRejection::ParityViolation);

    ConstructionTrace trace;
    trace.base_family = BaseFamily::T4;
    trace.params.k = k;
    trace.params.s = s;
    trace.params.t = t;
    detail::GraphBuilder gb(trace_base_graph(BaseFamily::T4, trace.params));

    for (int i = 1; i <= s; ++i) {
        TraceStep st;
        st.new_vertex = x_(i);
        for (int j = 1; j <= k; ++j)
            if (j != i) st.added_edges.emplace_back(x_(i), u_(j));
        for (int j = 1; j <= k; ++j)
            if (j != i) st.added_edges.emplace_back(x_(i), v_(j));
        detail::apply_step(gb, st);
        trace.steps.push_back(std::move(st));
    }

    // the x-clique factors lift every x_i to degree 2(k-1)+t
    {
        std::vector<int> x_ids(static_cast<size_t>(s));
        for (int i = 0; i < s; ++i) x_ids[i] = 2 * k + i;
        std::vector<std::vector<IdEdge>> xfactors;
        if (s % 2 == 0) {
            Factorization f = one_factorization(x_ids);
            for (int j = 0; j < t; ++j) xfactors.push_back(f.factors[j]);
        } else {
            Factorization f = two_factorization(x_ids, t / 2);
            xfactors = f.factors;
        }
        for (const auto& factor : xfactors) {
            TraceStep st;
            for (auto [a, b] : factor) st.added_edges.emplace_back(gb.labels[a], gb.labels[b]);
            detail::apply_step(gb, st);
            trace.steps.push_back(std::move(st));
        }
    }

    int half = (k - s) / 2;
    auto u_id = [&](int i) { return i - 1; };
    auto v_id = [&](int i) { return k + i - 1; };
    std::vector<int> A_u, C_u, D_u, B_u, A_v, C_v, D_v, B_v;
    for (int i = 1; i <= s / 2; ++i) A_u.push_back(u_id(i)), A_v.push_back(v_id(i));
    for (int i = s / 2 + 1; i <= s; ++i) C_u.push_back(u_id(i)), C_v.push_back(v_id(i));
    for (int i = s + 1; i <= s + half; ++i) D_u.push_back(u_id(i)), D_v.push_back(v_id(i));
    for (int i = s + half + 1; i <= k; ++i) B_u.push_back(u_id(i)), B_v.push_back(v_id(i));

    std::set<IdEdge> context_u, context_v;
    auto emit_deletion = [&](const std::vector<IdEdge>& mu, const std::vector<IdEdge>& mv,
                             std::optional<IdEdge> cross) {
        TraceStep st;
        for (auto [a, b] : mu) st.deleted_edges.emplace_back(gb.labels[a], gb.labels[b]);
        for (auto [a, b] : mv) st.deleted_edges.emplace_back(gb.labels[a], gb.labels[b]);
        if (cross)
            st.deleted_edges.emplace_back(gb.labels[cross->first], gb.labels[cross->second]);
        detail::apply_step(gb, st);
        trace.steps.push_back(std::move(st));
    };

    // step 1: one matching between the back blocks of each layer
    {
        std::set<int> uns_u, uns_v;
        std::optional<IdEdge> cross;
        if ((k - s) % 2 == 1) {
            uns_u.insert(u_id(k - 1));
            uns_v.insert(v_id(k));
            cross = norm_edge(u_id(k - 1), v_id(k));
        }
        auto mu = maximal_bipartite_matching(B_u, D_u, uns_u, context_u);
        auto mv = maximal_bipartite_matching(B_v, D_v, uns_v, context_v);
        context_u.insert(mu.begin(), mu.end());
        context_v.insert(mv.begin(), mv.end());
        emit_deletion(mu, mv, cross);
    }

    // step 2: disjoint maximal matchings between the front and middle blocks
    int rounds = std::min(s - t - 1, k / 2 - 1);
    {
        std::vector<int> AB_u = A_u, CD_u = C_u, AB_v = A_v, CD_v = C_v;
        AB_u.insert(AB_u.end(), B_u.begin(), B_u.end());
        CD_u.insert(CD_u.end(), D_u.begin(), D_u.end());
        AB_v.insert(AB_v.end(), B_v.begin(), B_v.end());
        CD_v.insert(CD_v.end(), D_v.begin(), D_v.end());

        // unsaturated sequences, one vertex per round, shifted so the paired
        // cross edge always exists
        std::vector<int> UL, VL;
        if (k % 2 == 1) {
            if (s % 2 == 0) {
                for (int i = 1; i <= s / 2; ++i) UL.push_back(u_id(i));
                for (int i = s + half + 1; i <= k; ++i) UL.push_back(u_id(i));
                for (int i = 2; i <= s / 2; ++i) VL.push_back(v_id(i));
                VL.push_back(v_id(1));
                for (int i = s + half + 2; i <= k; ++i) VL.push_back(v_id(i));
            } else {
                for (int i = s / 2 + 1; i <= s + half; ++i) UL.push_back(u_id(i));
                for (int i = s / 2 + 2; i <= s; ++i) VL.push_back(v_id(i));
                VL.push_back(v_id(s / 2 + 1));
                for (int i = s + 2; i <= s + half; ++i) VL.push_back(v_id(i));
            }
        }
        for (int r = 0; r < rounds; ++r) {
            std::set<int> uns_u, uns_v;
            std::optional<IdEdge> cross;
            if (k % 2 == 1) {
                if (r >= static_cast<int>(UL.size()) || r >= static_cast<int>(VL.size()))
                    throw InternalRecipeInconsistencyError(
                        "theorem 4: ran out of prescribed unsaturated vertices");
                uns_u.insert(UL[r]);
                uns_v.insert(VL[r]);
                cross = norm_edge(UL[r], VL[r]);
            }
            auto mu = maximal_bipartite_matching(AB_u, CD_u, uns_u, context_u);
            auto mv = maximal_bipartite_matching(AB_v, CD_v, uns_v, context_v);
            context_u.insert(mu.begin(), mu.end());
            context_v.insert(mv.begin(), mv.end());
            emit_deletion(mu, mv, cross);
        }
    }

    // step 3: position-shift 1-factors between the blocks, when the matching
    // rounds alone cannot shed enough degree
    if (s - t > k / 2) {
        std::vector<int> CD_u = C_u, CDp_v = C_v, AB_u = A_u, ABp_v = A_v;
        CD_u.insert(CD_u.end(), D_u.begin(), D_u.end());
        CDp_v.insert(CDp_v.end(), D_v.begin(), D_v.end());
        AB_u.insert(AB_u.end(), B_u.begin(), B_u.end());
        ABp_v.insert(ABp_v.end(), B_v.begin(), B_v.end());
        for (int j = 1; j <= s - t - k / 2; ++j) {
            std::vector<IdEdge> fj, fpj;
            int q1 = static_cast<int>(CD_u.size());
            for (int p = 0; p < q1; ++p) fj.push_back(norm_edge(CD_u[p], CDp_v[(p + j + 1) % q1]));
            int q2 = static_cast<int>(AB_u.size());
            for (int p = 0; p < q2; ++p) fpj.push_back(norm_edge(AB_u[p], ABp_v[(p + j + 1) % q2]));
            emit_deletion(fj, fpj, std::nullopt);
        }
    }

    Graph g = gb.to_graph();
    int n = 2 * k + s;
    ColorAssignment canonical = ColorAssignment::empty(n, k);
    for (int i = 1; i <= k; ++i) {
        canonical.colors[u_id(i)] = i;
        canonical.colors[v_id(i)] = i;
    }
    for (int i = 1; i <= s; ++i) canonical.colors[2 * k + i - 1] = i;
    ColorAssignment dset = ColorAssignment::empty(n, k);
    for (int i = 2; i <= s; ++i) dset.colors[2 * k + i - 1] = i;
    for (int i = s + 1; i <= k; ++i) dset.colors[v_id(i)] = i;
    ConstructionResult result{std::move(g), std::move(canonical), std::move(dset),
                              std::move(trace), 2 * (k - 1) + t, k, {}};
    for (int i : A_u) result.clique.push_back(i);
    for (int i : B_u) result.clique.push_back(i);
    for (int i : C_v) result.clique.push_back(i);
    for (int i : D_v) result.clique.push_back(i);
    detail::audit_result(result, "theorem 4");
    return result;
}

// --------------------------------------------------------------- utilities ----

// True iff removing f keeps the chromatic number and keeps s defining.
inline bool nonessential_check(const Graph& g, const ColorAssignment& s,
                               const std::vector<IdEdge>& f, const SearchBudget& budget = {}) {
    std::set<IdEdge> fset;
    for (auto [a, b] : f) {
        if (!g.has_edge(a, b))
            throw EdgeNotInGraphError("edge " + render_label(g.label(a)) + "-" +
                                      render_label(g.label(b)) + " not in graph");
        fset.insert(norm_edge(a, b));
    }
    Graph g2 = g;
    for (auto [a, b] : fset) g2.remove_edge(a, b);
    int chi = chromatic_number(g, budget);
    if (chromatic_number(g2, budget) != chi) return false;
    return count_extensions(g2, s, chi, 2, budget) == 1;
}

}  // namespace regdef

#endif

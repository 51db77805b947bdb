#ifndef REGDEF_COLORING_HPP
#define REGDEF_COLORING_HPP

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "regdef/errors.hpp"
#include "regdef/graph.hpp"

namespace regdef {

// Partial or total coloring over a palette 1..k; 0 means unassigned.
struct ColorAssignment {
    int k = 0;
    std::vector<int> colors;

    static ColorAssignment empty(int n, int k) {
        return {k, std::vector<int>(static_cast<size_t>(n), 0)};
    }
    int assigned_count() const {
        int c = 0;
        for (int x : colors)
            if (x != 0) ++c;
        return c;
    }
    bool is_total() const {
        for (int x : colors)
            if (x == 0) return false;
        return true;
    }
};

enum class ExtensionOutcome { None, Unique, Multiple };

struct ExtensionVerdict {
    ExtensionOutcome outcome = ExtensionOutcome::None;
    std::optional<ColorAssignment> witness;
};

struct SearchBudget {
    long long node_limit = 400'000'000;
    double time_limit = 900.0;  // seconds
};

namespace detail {

struct BudgetMeter {
    long long nodes_left;
    std::chrono::steady_clock::time_point deadline;
    int probe = 0;

    explicit BudgetMeter(const SearchBudget& b)
        : nodes_left(b.node_limit),
          deadline(std::chrono::steady_clock::now() +
                   std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                       std::chrono::duration<double>(b.time_limit))) {}

    // Returns false when the budget is gone; caller reports bounds.
    bool tick() {
        if (--nodes_left < 0) return false;
        if ((++probe & 1023) == 0 && std::chrono::steady_clock::now() > deadline)
            return false;
        return true;
    }
};

inline void check_partial(const Graph& g, const ColorAssignment& partial, int k) {
    if (static_cast<int>(partial.colors.size()) != g.order())
        throw ImproperPartialError("partial coloring size does not match graph order");
    for (int v = 0; v < g.order(); ++v) {
        int c = partial.colors[v];
        if (c < 0 || c > k)
            throw ImproperPartialError("color " + std::to_string(c) + " at " +
                                       render_label(g.label(v)) + " outside palette 1.." +
                                       std::to_string(k));
    }
    for (auto [a, b] : g.edges())
        if (partial.colors[a] != 0 && partial.colors[a] == partial.colors[b])
            throw ImproperPartialError("monochromatic edge " + render_label(g.label(a)) + "-" +
                                       render_label(g.label(b)));
}

// Extension counting by DPLL over per-vertex color domains (bitmask, bit c-1
// set when color c is still available). Unit propagation first, then branch
// on the most saturated vertex. Counting is over labeled colorings; no
// symmetry is broken here on purpose.
class ExtensionCounter {
public:
    ExtensionCounter(const Graph& g, int k, long long cap, BudgetMeter& meter)
        : n_(g.order()), k_(k), cap_(cap), meter_(meter) {
        adj_.resize(static_cast<size_t>(n_));
        deg_.resize(static_cast<size_t>(n_));
        for (int v = 0; v < n_; ++v) {
            adj_[v] = g.neighbors(v);
            deg_[v] = static_cast<int>(adj_[v].size());
        }
    }

    long long run(const ColorAssignment& partial, std::optional<ColorAssignment>* witness) {
        std::vector<uint64_t> domain(static_cast<size_t>(n_));
        std::vector<int> color(static_cast<size_t>(n_), 0);
        uint64_t full = (k_ >= 64) ? ~uint64_t{0} : ((uint64_t{1} << k_) - 1);
        for (int v = 0; v < n_; ++v) {
            int c = partial.colors[v];
            domain[v] = c ? (uint64_t{1} << (c - 1)) : full;
        }
        // strip assigned colors from neighbor domains up front
        for (int v = 0; v < n_; ++v) {
            int c = partial.colors[v];
            if (!c) continue;
            color[v] = c;
            for (int u : adj_[v])
                if (color[u] == 0) domain[u] &= ~(uint64_t{1} << (c - 1));
        }
        count_ = 0;
        witness_ = witness;
        search(std::move(domain), std::move(color));
        if (exhausted_)
            throw BudgetExhaustedError("extension counting budget exhausted",
                                       static_cast<int>(std::min<long long>(count_, cap_)),
                                       -1);
        return std::min(count_, cap_);
    }

private:
    void search(std::vector<uint64_t> domain, std::vector<int> color) {
        if (exhausted_ || count_ >= cap_) return;
        if (!meter_.tick()) {
            exhausted_ = true;
            return;
        }
        // unit propagation to fixpoint
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < n_; ++v) {
                if (color[v] != 0) continue;
                if (domain[v] == 0) return;  // dead branch
                if (std::popcount(domain[v]) == 1) {
                    int c = std::countr_zero(domain[v]) + 1;
                    color[v] = c;
                    for (int u : adj_[v]) {
                        if (color[u] == 0) {
                            domain[u] &= ~(uint64_t{1} << (c - 1));
                            if (domain[u] == 0) return;
                        }
                    }
                    changed = true;
                }
            }
        }
        // pick branch vertex: fewest colors left, then higher degree, then id
        int best = -1, best_pop = 65, best_deg = -1;
        for (int v = 0; v < n_; ++v) {
            if (color[v] != 0) continue;
            int pop = std::popcount(domain[v]);
            if (pop < best_pop || (pop == best_pop && deg_[v] > best_deg)) {
                best = v;
                best_pop = pop;
                best_deg = deg_[v];
            }
        }
        if (best == -1) {
            // complete extension
            if (count_ == 0 && witness_ && !witness_->has_value())
                *witness_ = ColorAssignment{k_, color};
            ++count_;
            return;
        }
        uint64_t avail = domain[best];
        while (avail && !exhausted_ && count_ < cap_) {
            int c = std::countr_zero(avail) + 1;
            avail &= avail - 1;
            auto d2 = domain;
            auto c2 = color;
            c2[best] = c;
            d2[best] = uint64_t{1} << (c - 1);
            bool dead = false;
            for (int u : adj_[best]) {
                if (c2[u] == 0) {
                    d2[u] &= ~(uint64_t{1} << (c - 1));
                    if (d2[u] == 0) dead = true;
                }
            }
            if (!dead) search(std::move(d2), std::move(c2));
        }
    }

    int n_;
    int k_;
    long long cap_;
    BudgetMeter& meter_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> deg_;
    long long count_ = 0;
    bool exhausted_ = false;
    std::optional<ColorAssignment>* witness_ = nullptr;
};

// Is there any proper k-coloring at all? DSATUR-ordered backtracking with the
// classic symmetry break: a vertex may only open color max_used+1.
inline bool k_colorable(const Graph& g, int k, BudgetMeter& meter) {
    int n = g.order();
    if (n == 0) return true;
    std::vector<std::vector<int>> adj(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) adj[v] = g.neighbors(v);
    std::vector<int> color(static_cast<size_t>(n), 0);
    std::vector<uint64_t> neighbor_colors(static_cast<size_t>(n), 0);

    struct Frame {
        int v;
        int next_color;
        int max_used_before;
    };
    std::vector<Frame> stack;
    int assigned = 0;
    int max_used = 0;

    auto pick = [&]() {
        int best = -1, best_sat = -1, best_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (color[v] != 0) continue;
            int sat = std::popcount(neighbor_colors[v]);
            int deg = static_cast<int>(adj[v].size());
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        return best;
    };

    stack.push_back({pick(), 1, 0});
    while (!stack.empty()) {
        if (!meter.tick())
            throw BudgetExhaustedError("colorability search budget exhausted", 0, k);
        Frame& f = stack.back();
        if (color[f.v] != 0) {
            // undo before trying the next color
            int c = color[f.v];
            color[f.v] = 0;
            --assigned;
            for (int u : adj[f.v]) {
                bool still = false;
                for (int w : adj[u])
                    if (color[w] == c) { still = true; break; }
                if (!still) neighbor_colors[u] &= ~(uint64_t{1} << (c - 1));
            }
            max_used = f.max_used_before;
        }
        int limit = std::min(k, max_used + 1);
        int c = f.next_color;
        while (c <= limit && ((neighbor_colors[f.v] >> (c - 1)) & 1u)) ++c;
        if (c > limit) {
            stack.pop_back();
            continue;
        }
        f.next_color = c + 1;
        f.max_used_before = max_used;
        color[f.v] = c;
        ++assigned;
        max_used = std::max(max_used, c);
        for (int u : adj[f.v]) neighbor_colors[u] |= uint64_t{1} << (c - 1);
        if (assigned == n) return true;
        stack.push_back({pick(), 1, max_used});
    }
    return false;
}

// Multi-start greedy clique; a lower bound only, exactness never rests on it.
inline int greedy_clique_bound(const Graph& g) {
    int n = g.order();
    int best = n > 0 ? 1 : 0;
    for (int s = 0; s < n; ++s) {
        std::vector<int> clique{s};
        std::vector<int> cand = g.neighbors(s);
        while (!cand.empty()) {
            int pick = -1, pick_score = -1;
            for (int c : cand) {
                int score = 0;
                for (int d : cand)
                    if (d != c && g.has_edge(c, d)) ++score;
                if (score > pick_score) {
                    pick = c;
                    pick_score = score;
                }
            }
            clique.push_back(pick);
            std::vector<int> next;
            for (int c : cand)
                if (c != pick && g.has_edge(c, pick)) next.push_back(c);
            cand = std::move(next);
        }
        best = std::max(best, static_cast<int>(clique.size()));
    }
    return best;
}

inline int dsatur_upper_bound(const Graph& g) {
    int n = g.order();
    std::vector<int> color(static_cast<size_t>(n), 0);
    std::vector<uint64_t> neighbor_colors(static_cast<size_t>(n), 0);
    int used = 0;
    for (int step = 0; step < n; ++step) {
        int best = -1, best_sat = -1, best_deg = -1;
        for (int v = 0; v < n; ++v) {
            if (color[v] != 0) continue;
            int sat = std::popcount(neighbor_colors[v]);
            int deg = g.degree(v);
            if (sat > best_sat || (sat == best_sat && deg > best_deg)) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        int c = 1;
        while ((neighbor_colors[best] >> (c - 1)) & 1u) ++c;
        color[best] = c;
        used = std::max(used, c);
        for (int u : g.neighbors(best)) neighbor_colors[u] |= uint64_t{1} << (c - 1);
    }
    return used;
}

}  // namespace detail

inline long long count_extensions(const Graph& g, const ColorAssignment& partial, int k,
                                  long long cap, const SearchBudget& budget = {},
                                  std::optional<ColorAssignment>* witness = nullptr) {
    if (cap < 1) throw Error("extension cap must be positive");
    if (k < 1) throw Error("palette must be positive");
    if (k > 63) throw Error("palette larger than 63 colors is out of scope");
    detail::check_partial(g, partial, k);
    detail::BudgetMeter meter(budget);
    detail::ExtensionCounter counter(g, k, cap, meter);
    return counter.run(partial, witness);
}

inline ExtensionVerdict extend_unique(const Graph& g, const ColorAssignment& partial, int k,
                                      const SearchBudget& budget = {}) {
    std::optional<ColorAssignment> witness;
    long long c = count_extensions(g, partial, k, 2, budget, &witness);
    ExtensionVerdict v;
    v.outcome = c == 0   ? ExtensionOutcome::None
                : c == 1 ? ExtensionOutcome::Unique
                         : ExtensionOutcome::Multiple;
    if (c > 0) v.witness = std::move(witness);
    return v;
}

inline int chromatic_number(const Graph& g, const SearchBudget& budget = {}) {
    if (g.order() == 0) throw Error("chromatic number of the empty graph is undefined here");
    if (g.size() == 0) return 1;
    int lb = std::max(2, detail::greedy_clique_bound(g));
    int ub = detail::dsatur_upper_bound(g);
    detail::BudgetMeter meter(budget);
    for (int k = lb; k < ub; ++k) {
        try {
            if (detail::k_colorable(g, k, meter)) return k;
        } catch (const BudgetExhaustedError&) {
            throw BudgetExhaustedError("chromatic number budget exhausted", k, ub);
        }
    }
    return ub;
}

inline bool lower_bound_check(const Graph&, const ColorAssignment& s, int chi) {
    return s.assigned_count() >= chi - 1;
}

inline bool is_defining_set(const Graph& g, const ColorAssignment& s, int chi,
                            bool verify_chi = false, const SearchBudget& budget = {}) {
    if (verify_chi) {
        int actual = chromatic_number(g, budget);
        if (actual != chi)
            throw ChiMismatchError("claimed chi " + std::to_string(chi) + " but graph has chi " +
                                   std::to_string(actual));
    }
    return count_extensions(g, s, chi, 2, budget) == 1;
}

struct DefiningNumberResult {
    int value = 0;
    ColorAssignment witness;  // a minimum defining set, canonical palette order
};

// Exact defining-number search. Subsets ascend by size then lexicographically
// by vertex id; for each subset only canonical colorings are tested (color
// c+1 never appears before color c), which covers every palette class once.
// A canonical witness is defining iff each of its relabelings is, because
// relabeling colors bijects extensions.
inline DefiningNumberResult defining_number_search(const Graph& g,
                                                   const SearchBudget& budget = {}) {
    int n = g.order();
    int chi = chromatic_number(g, budget);
    detail::BudgetMeter meter(budget);

    std::vector<int> subset;
    ColorAssignment partial = ColorAssignment::empty(n, chi);
    DefiningNumberResult result;
    bool found = false;

    // enumerate colorings of the chosen subset, canonical order
    auto try_colorings = [&](auto&& self, size_t pos, int max_used) -> void {
        if (found) return;
        if (pos == subset.size()) {
            if (!meter.tick())
                throw BudgetExhaustedError("defining number budget exhausted",
                                           static_cast<int>(subset.size()), n);
            detail::ExtensionCounter counter(g, chi, 2, meter);
            if (counter.run(partial, nullptr) == 1) {
                found = true;
                result.value = static_cast<int>(subset.size());
                result.witness = partial;
            }
            return;
        }
        int v = subset[pos];
        int limit = std::min(chi, max_used + 1);
        for (int c = 1; c <= limit && !found; ++c) {
            bool clash = false;
            for (size_t q = 0; q < pos; ++q)
                if (partial.colors[subset[q]] == c && g.has_edge(subset[q], v)) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            partial.colors[v] = c;
            self(self, pos + 1, std::max(max_used, c));
            partial.colors[v] = 0;
        }
    };

    auto pick_subsets = [&](auto&& self, int next_id, int remaining) -> void {
        if (found) return;
        if (remaining == 0) {
            try_colorings(try_colorings, 0, 0);
            return;
        }
        for (int v = next_id; v <= n - remaining && !found; ++v) {
            subset.push_back(v);
            self(self, v + 1, remaining - 1);
            subset.pop_back();
        }
    };

    for (int m = std::max(0, chi - 1); m <= n; ++m) {
        subset.clear();
        try {
            pick_subsets(pick_subsets, 0, m);
        } catch (const BudgetExhaustedError&) {
            throw BudgetExhaustedError("defining number budget exhausted", m, n);
        }
        if (found) return result;
    }
    throw InternalRecipeInconsistencyError("no defining set of any size found");
}

inline int defining_number(const Graph& g, const SearchBudget& budget = {}) {
    return defining_number_search(g, budget).value;
}

// True iff the assigned part of ca is a proper coloring (no check of totality).
inline bool proper_on_assigned(const Graph& g, const ColorAssignment& ca) {
    for (auto [a, b] : g.edges())
        if (ca.colors[a] != 0 && ca.colors[a] == ca.colors[b]) return false;
    return true;
}

}  // namespace regdef

#endif

#ifndef REGDEF_FACTORIZATION_HPP
#define REGDEF_FACTORIZATION_HPP

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "regdef/errors.hpp"

namespace regdef {

// Edges over caller-supplied vertex ids, normalized (a < b) where order has
// no meaning of its own.
using IdEdge = std::pair<int, int>;

inline IdEdge norm_edge(int a, int b) { return a < b ? IdEdge{a, b} : IdEdge{b, a}; }

struct Factorization {
    std::vector<int> host;
    std::vector<std::vector<IdEdge>> factors;
};

// Matching i (1-based) pairs a_t with b_{((t+i-2) mod m)+1}; the m matchings
// partition the complete bipartite pair set. Returned as (a-index, b-index)
// pairs, both 1-based.
inline std::vector<std::vector<std::pair<int, int>>> cyclic_bipartite_matchings(int m) {
    if (m < 1) throw Error("cyclic matchings need m >= 1");
    std::vector<std::vector<std::pair<int, int>>> out;
    out.reserve(m);
    for (int i = 1; i <= m; ++i) {
        std::vector<std::pair<int, int>> mi;
        mi.reserve(m);
        for (int t = 1; t <= m; ++t) mi.emplace_back(t, ((t + i - 2) % m) + 1);
        out.push_back(std::move(mi));
    }
    return out;
}

// Round-robin 1-factorization of the complete graph on an even vertex list.
// The last-listed vertex stays fixed while the others rotate; factor r pairs
// the fixed vertex with rotator r.
inline Factorization one_factorization(const std::vector<int>& vertices) {
    int q = static_cast<int>(vertices.size());
    if (q < 2 || q % 2 != 0)
        throw OddOrderError("1-factorization needs an even vertex count, got " +
                            std::to_string(q));
    int rot = q - 1;
    Factorization f;
    f.host = vertices;
    for (int r = 0; r < rot; ++r) {
        std::vector<IdEdge> factor;
        factor.push_back(norm_edge(vertices[q - 1], vertices[r]));
        for (int i = 1; i <= q / 2 - 1; ++i) {
            int a = (r + i) % rot;
            int b = (r - i + rot) % rot;
            factor.push_back(norm_edge(vertices[a], vertices[b]));
        }
        f.factors.push_back(std::move(factor));
    }
    return f;
}

// Walecki decomposition of K_{2m+1} into Hamiltonian cycles. The last-listed
// vertex is the hub; cycle j walks the zigzag 0,1,2m-1,2,2m-2,... translated
// by j. Only the first `count` cycles are returned.
inline Factorization two_factorization(const std::vector<int>& vertices, int count) {
    int q = static_cast<int>(vertices.size());
    if (q < 3 || q % 2 == 0)
        throw EvenOrderError("2-factorization needs an odd vertex count >= 3, got " +
                             std::to_string(q));
    int max_count = (q - 1) / 2;
    if (count < 0 || count > max_count)
        throw CountTooLargeError("at most " + std::to_string(max_count) +
                                 " disjoint 2-factors exist on " + std::to_string(q) +
                                 " vertices");
    int ring = q - 1;  // even
    std::vector<int> zigzag;
    zigzag.reserve(ring);
    int lo = 0, hi = ring;
    zigzag.push_back(lo++);
    while (static_cast<int>(zigzag.size()) < ring) {
        zigzag.push_back(lo++);
        if (static_cast<int>(zigzag.size()) < ring) zigzag.push_back(--hi);
    }
    Factorization f;
    f.host = vertices;
    for (int j = 0; j < count; ++j) {
        std::vector<IdEdge> cycle;
        int prev = vertices[q - 1];  // hub
        for (int i = 0; i < ring; ++i) {
            int cur = vertices[(zigzag[i] + j) % ring];
            cycle.push_back(norm_edge(prev, cur));
            prev = cur;
        }
        cycle.push_back(norm_edge(prev, vertices[q - 1]));
        f.factors.push_back(std::move(cycle));
    }
    return f;
}

// Permute factors so each required edge sits in its required 1-based slot;
// unconstrained factors keep their relative order.
inline Factorization reindex_factorization(
    const Factorization& f, const std::vector<std::pair<int, IdEdge>>& requirements) {
    int nf = static_cast<int>(f.factors.size());
    auto find_factor = [&](IdEdge e) {
        IdEdge n = norm_edge(e.first, e.second);
        for (int i = 0; i < nf; ++i)
            for (const auto& fe : f.factors[i])
                if (fe == n) return i;
        return -1;
    };
    std::vector<int> slot_of(static_cast<size_t>(nf), -1);  // factor -> target slot
    std::vector<int> factor_at(static_cast<size_t>(nf), -1);
    for (const auto& [slot, edge] : requirements) {
        if (slot < 1 || slot > nf)
            throw UnsatisfiableRequirementsError("required slot " + std::to_string(slot) +
                                                 " out of range");
        int src = find_factor(edge);
        if (src < 0)
            throw UnsatisfiableRequirementsError("required edge not found in any factor");
        if (slot_of[src] != -1 && slot_of[src] != slot - 1)
            throw UnsatisfiableRequirementsError("two requirements pull one factor apart");
        if (factor_at[slot - 1] != -1 && factor_at[slot - 1] != src)
            throw UnsatisfiableRequirementsError("two factors claim slot " +
                                                 std::to_string(slot));
        slot_of[src] = slot - 1;
        factor_at[slot - 1] = src;
    }
    std::vector<int> free_slots;
    for (int s = 0; s < nf; ++s)
        if (factor_at[s] == -1) free_slots.push_back(s);
    size_t next_free = 0;
    for (int i = 0; i < nf; ++i) {
        if (slot_of[i] == -1) {
            factor_at[free_slots[next_free++]] = i;
        }
    }
    Factorization out;
    out.host = f.host;
    out.factors.reserve(nf);
    for (int s = 0; s < nf; ++s) out.factors.push_back(f.factors[factor_at[s]]);
    return out;
}

// A matching saturating exactly (partA u partB) \ unsaturated, avoiding the
// context edges, found by trying cyclic shifts of the trimmed lists. The
// parts are treated as a complete bipartite graph.
inline std::vector<IdEdge> maximal_bipartite_matching(const std::vector<int>& partA,
                                                      const std::vector<int>& partB,
                                                      const std::set<int>& unsaturated,
                                                      const std::set<IdEdge>& context = {}) {
    std::vector<int> a, b;
    for (int v : partA)
        if (!unsaturated.count(v)) a.push_back(v);
    for (int v : partB)
        if (!unsaturated.count(v)) b.push_back(v);
    if (a.size() != b.size())
        throw NoSuchMatchingError("trimmed parts differ in size: " + std::to_string(a.size()) +
                                  " vs " + std::to_string(b.size()));
    int q = static_cast<int>(a.size());
    if (q == 0) return {};
    for (int shift = 0; shift < q; ++shift) {
        std::vector<IdEdge> m;
        bool ok = true;
        for (int i = 0; i < q && ok; ++i) {
            IdEdge e = norm_edge(a[i], b[(i + shift) % q]);
            if (context.count(e))
                ok = false;
            else
                m.push_back(e);
        }
        if (ok) return m;
    }
    throw NoSuchMatchingError("all cyclic shifts collide with the context");
}

}  // namespace regdef

#endif

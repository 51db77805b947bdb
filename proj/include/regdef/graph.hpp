#ifndef REGDEF_GRAPH_HPP
#define REGDEF_GRAPH_HPP

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "regdef/errors.hpp"
#include "regdef/labels.hpp"

namespace regdef {

// Undirected simple graph with labeled vertices. Adjacency is kept as bitset
// rows, one run of 64-bit words per vertex, which keeps the coloring engine's
// inner loops branch-light. Vertex ids are 0..n-1 in the order labels were
// supplied; builders rely on that to get the layer ordering right.
class Graph {
public:
    explicit Graph(std::vector<VertexLabel> labels)
        : n_(static_cast<int>(labels.size())),
          stride_((n_ + 63) / 64),
          labels_(std::move(labels)),
          bits_(static_cast<size_t>(n_) * stride_, 0) {
        for (int i = 0; i < n_; ++i) {
            auto name = render_label(labels_[i]);
            auto [it, fresh] = by_name_.emplace(name, i);
            (void)it;
            if (!fresh) throw DuplicateLabelError("duplicate vertex label '" + name + "'");
        }
    }

    int order() const { return n_; }

    int size() const {
        int total = 0;
        for (int v = 0; v < n_; ++v) total += degree(v);
        return total / 2;
    }

    const VertexLabel& label(int v) const { return labels_.at(v); }
    const std::vector<VertexLabel>& labels() const { return labels_; }

    bool has_label(const std::string& name) const { return by_name_.count(name) > 0; }

    int id_of(const std::string& name) const {
        auto it = by_name_.find(name);
        if (it == by_name_.end())
            throw UnknownEndpointError("no vertex labeled '" + name + "'");
        return it->second;
    }
    int id_of(const VertexLabel& l) const { return id_of(render_label(l)); }

    bool has_edge(int a, int b) const {
        check_vertex(a);
        check_vertex(b);
        return (word(a, b) >> (b & 63)) & 1u;
    }
    bool has_edge(const VertexLabel& a, const VertexLabel& b) const {
        return has_edge(id_of(a), id_of(b));
    }

    void add_edge(int a, int b) {
        check_vertex(a);
        check_vertex(b);
        if (a == b)
            throw LoopEdgeError("loop at vertex '" + render_label(labels_[a]) + "'");
        if (has_edge(a, b))
            throw DuplicateEdgeError("edge " + edge_name(a, b) + " already present");
        word(a, b) |= uint64_t{1} << (b & 63);
        word(b, a) |= uint64_t{1} << (a & 63);
    }
    void add_edge(const VertexLabel& a, const VertexLabel& b) { add_edge(id_of(a), id_of(b)); }

    void remove_edge(int a, int b) {
        check_vertex(a);
        check_vertex(b);
        if (a == b || !has_edge(a, b))
            throw EdgeNotInGraphError("edge " + edge_name(a, b) + " not in graph");
        word(a, b) &= ~(uint64_t{1} << (b & 63));
        word(b, a) &= ~(uint64_t{1} << (a & 63));
    }
    void remove_edge(const VertexLabel& a, const VertexLabel& b) { remove_edge(id_of(a), id_of(b)); }

    int degree(int v) const {
        check_vertex(v);
        int d = 0;
        for (int w = 0; w < stride_; ++w)
            d += std::popcount(bits_[static_cast<size_t>(v) * stride_ + w]);
        return d;
    }

    bool is_regular(int r) const {
        for (int v = 0; v < n_; ++v)
            if (degree(v) != r) return false;
        return true;
    }

    // Edges as id pairs (a < b), sorted.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (int a = 0; a < n_; ++a)
            for (int b = a + 1; b < n_; ++b)
                if (has_edge(a, b)) out.emplace_back(a, b);
        return out;
    }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (int b = 0; b < n_; ++b)
            if (v != b && has_edge(v, b)) out.push_back(b);
        return out;
    }

    const uint64_t* row(int v) const { return bits_.data() + static_cast<size_t>(v) * stride_; }
    int stride() const { return stride_; }

    // Copy with one vertex dropped; remaining vertices keep their labels and
    // relative order.
    Graph without_vertex(int v) const {
        check_vertex(v);
        std::vector<VertexLabel> keep;
        keep.reserve(n_ - 1);
        for (int i = 0; i < n_; ++i)
            if (i != v) keep.push_back(labels_[i]);
        Graph g(std::move(keep));
        for (int a = 0; a < n_; ++a) {
            if (a == v) continue;
            for (int b = a + 1; b < n_; ++b) {
                if (b == v || !has_edge(a, b)) continue;
                g.add_edge(a - (a > v ? 1 : 0), b - (b > v ? 1 : 0));
            }
        }
        return g;
    }

    // Internal audit: symmetry, empty diagonal, no stray bits past column n.
    void check_consistent() const {
        for (int a = 0; a < n_; ++a) {
            if ((word_const(a, a) >> (a & 63)) & 1u)
                throw Error("adjacency diagonal set at " + render_label(labels_[a]));
            for (int b = 0; b < n_; ++b) {
                bool ab = (word_const(a, b) >> (b & 63)) & 1u;
                bool ba = (word_const(b, a) >> (a & 63)) & 1u;
                if (ab != ba)
                    throw Error("adjacency asymmetry at " + edge_name(a, b));
            }
            for (int w = 0; w < stride_; ++w) {
                uint64_t word_bits = bits_[static_cast<size_t>(a) * stride_ + w];
                for (int bit = 0; bit < 64; ++bit) {
                    if (((word_bits >> bit) & 1u) && w * 64 + bit >= n_)
                        throw Error("stray adjacency bit past column count");
                }
            }
        }
    }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.labels_ == b.labels_ && a.bits_ == b.bits_;
    }

private:
    void check_vertex(int v) const {
        if (v < 0 || v >= n_)
            throw UnknownEndpointError("vertex id " + std::to_string(v) + " out of range");
    }
    uint64_t& word(int a, int b) { return bits_[static_cast<size_t>(a) * stride_ + (b >> 6)]; }
    uint64_t word_const(int a, int b) const {
        return bits_[static_cast<size_t>(a) * stride_ + (b >> 6)];
    }
    std::string edge_name(int a, int b) const {
        return render_label(labels_[a]) + "-" + render_label(labels_[b]);
    }

    int n_;
    int stride_;
    std::vector<VertexLabel> labels_;
    std::vector<uint64_t> bits_;
    std::map<std::string, int> by_name_;
};

using LabelEdge = std::pair<VertexLabel, VertexLabel>;

inline Graph make_graph(const std::vector<VertexLabel>& labels,
                        const std::vector<LabelEdge>& edges) {
    Graph g(labels);
    for (const auto& [a, b] : edges) g.add_edge(a, b);
    return g;
}

// Plain numbered labels u1..un for graphs that come from unlabeled sources.
inline std::vector<VertexLabel> numbered_labels(int n, Family fam = Family::U) {
    std::vector<VertexLabel> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) out.push_back({fam, i, false});
    return out;
}

inline Graph complete_graph(int n) {
    Graph g(numbered_labels(n));
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.add_edge(a, b);
    return g;
}

inline Graph cycle_graph(int n) {
    Graph g(numbered_labels(n));
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

}  // namespace regdef

#endif

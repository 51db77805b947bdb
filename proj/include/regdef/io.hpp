#ifndef REGDEF_IO_HPP
#define REGDEF_IO_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regdef/coloring.hpp"
#include "regdef/errors.hpp"
#include "regdef/graph.hpp"
#include "regdef/labels.hpp"

namespace regdef {

// ---------------------------------------------------------------- graph6 ----
// Standard graph6: upper triangle of the adjacency matrix read column by
// column (x_{0,1}, x_{0,2}, x_{1,2}, x_{0,3}, ...), packed big-endian into
// 6-bit groups, each offset by 63. Short header for n <= 62, '~' + 18 bits
// for larger n. Labels are not part of the format.

inline std::string encode_graph6(const Graph& g) {
    int n = g.order();
    std::string out;
    if (n <= 62) {
        out += static_cast<char>(n + 63);
    } else if (n <= 258047) {
        out += '~';
        out += static_cast<char>(((n >> 12) & 63) + 63);
        out += static_cast<char>(((n >> 6) & 63) + 63);
        out += static_cast<char>((n & 63) + 63);
    } else {
        throw Error("graph6 encoding beyond 258047 vertices is out of scope");
    }
    int acc = 0, nbits = 0;
    for (int b = 1; b < n; ++b) {
        for (int a = 0; a < b; ++a) {
            acc = (acc << 1) | (g.has_edge(a, b) ? 1 : 0);
            if (++nbits == 6) {
                out += static_cast<char>(acc + 63);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if (nbits > 0) out += static_cast<char>((acc << (6 - nbits)) + 63);
    return out;
}

inline Graph decode_graph6(const std::string& bytes) {
    for (char ch : bytes)
        if (ch < 63 || ch > 126)
            throw MalformedGraph6Error("byte out of graph6 range");
    size_t pos = 0;
    long long n;
    if (bytes.empty()) throw MalformedGraph6Error("empty graph6 string");
    if (bytes[0] != '~') {
        n = bytes[0] - 63;
        pos = 1;
    } else {
        if (bytes.size() >= 2 && bytes[1] == '~')
            throw MalformedGraph6Error("graph6 order beyond 258047 is out of scope");
        if (bytes.size() < 4) throw MalformedGraph6Error("truncated graph6 order");
        n = (static_cast<long long>(bytes[1] - 63) << 12) |
            (static_cast<long long>(bytes[2] - 63) << 6) |
            static_cast<long long>(bytes[3] - 63);
        if (n <= 62) throw MalformedGraph6Error("non-minimal long-form graph6 order");
        pos = 4;
    }
    long long pair_bits = n * (n - 1) / 2;
    size_t body = static_cast<size_t>((pair_bits + 5) / 6);
    if (bytes.size() - pos != body)
        throw MalformedGraph6Error("graph6 body length mismatch");
    Graph g(numbered_labels(static_cast<int>(n)));
    long long bit = 0;
    for (size_t i = pos; i < bytes.size(); ++i) {
        int val = bytes[i] - 63;
        for (int j = 5; j >= 0; --j, ++bit) {
            int on = (val >> j) & 1;
            if (bit >= pair_bits) {
                if (on) throw MalformedGraph6Error("nonzero padding bits");
                continue;
            }
            if (on) {
                // invert the column-major position: column b holds b entries
                long long r = bit;
                int b = 1;
                while (r >= b) r -= b++;
                g.add_edge(static_cast<int>(r), b);
            }
        }
    }
    return g;
}

// ------------------------------------------------------------ JSON files ----

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.order();
    auto labels = nlohmann::json::array();
    for (const auto& l : g.labels()) labels.push_back(render_label(l));
    j["labels"] = labels;
    auto edges = nlohmann::json::array();
    for (auto [a, b] : g.edges())
        edges.push_back({render_label(g.label(a)), render_label(g.label(b))});
    j["edges"] = edges;
    return j;
}

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("labels") || !j.contains("edges"))
        throw MalformedFileError("graph json needs n, labels, edges");
    if (!j["n"].is_number_integer() || !j["labels"].is_array() || !j["edges"].is_array())
        throw MalformedFileError("graph json field types are wrong");
    int n = j["n"].get<int>();
    if (n < 0 || static_cast<size_t>(n) != j["labels"].size())
        throw MalformedFileError("graph json: n does not match label count");
    std::vector<VertexLabel> labels;
    for (const auto& item : j["labels"]) {
        if (!item.is_string()) throw MalformedFileError("graph json: label not a string");
        labels.push_back(parse_label(item.get<std::string>()));
    }
    Graph g(std::move(labels));
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw MalformedFileError("graph json: edge is not a label pair");
        g.add_edge(g.id_of(e[0].get<std::string>()), g.id_of(e[1].get<std::string>()));
    }
    return g;
}

inline nlohmann::json coloring_to_json(const Graph& g, const ColorAssignment& ca) {
    nlohmann::json j;
    j["k"] = ca.k;
    nlohmann::json colors = nlohmann::json::object();
    for (int v = 0; v < g.order(); ++v)
        if (ca.colors[v] != 0) colors[render_label(g.label(v))] = ca.colors[v];
    j["colors"] = colors;
    return j;
}

inline ColorAssignment coloring_from_json(const Graph& g, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("k") || !j.contains("colors"))
        throw MalformedFileError("coloring json needs k and colors");
    if (!j["k"].is_number_integer() || !j["colors"].is_object())
        throw MalformedFileError("coloring json field types are wrong");
    ColorAssignment ca = ColorAssignment::empty(g.order(), j["k"].get<int>());
    if (ca.k < 1) throw MalformedFileError("coloring json: palette must be positive");
    for (const auto& [name, value] : j["colors"].items()) {
        if (!value.is_number_integer())
            throw MalformedFileError("coloring json: color not an integer");
        int c = value.get<int>();
        if (c < 1 || c > ca.k)
            throw MalformedFileError("coloring json: color " + std::to_string(c) +
                                     " outside palette 1.." + std::to_string(ca.k));
        ca.colors[g.id_of(name)] = c;
    }
    return ca;
}

inline nlohmann::json parse_json_text(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw MalformedFileError("not valid json");
    return j;
}

// ------------------------------------------------------------------- DOT ----

inline std::string export_dot(const Graph& g, const ColorAssignment& coloring,
                              const std::set<int>& highlight) {
    std::ostringstream out;
    out << "graph G {\n";
    out << "  node [shape=circle];\n";
    for (int v = 0; v < g.order(); ++v) {
        std::string name = render_label(g.label(v));
        std::vector<std::string> attrs;
        if (highlight.count(v)) attrs.push_back("style=filled");
        int c = (v < static_cast<int>(coloring.colors.size())) ? coloring.colors[v] : 0;
        if (c != 0) attrs.push_back("label=\"" + name + ":" + std::to_string(c) + "\"");
        out << "  \"" << name << "\"";
        if (!attrs.empty()) {
            out << " [";
            for (size_t i = 0; i < attrs.size(); ++i) {
                if (i) out << ", ";
                out << attrs[i];
            }
            out << "]";
        }
        out << ";\n";
    }
    for (auto [a, b] : g.edges())
        out << "  \"" << render_label(g.label(a)) << "\" -- \"" << render_label(g.label(b))
            << "\";\n";
    out << "}\n";
    return out.str();
}

// ------------------------------------------------------------ file utils ----

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedFileError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MalformedFileError("cannot write '" + path + "'");
    out << content;
}

}  // namespace regdef

#endif

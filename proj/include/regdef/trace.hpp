#ifndef REGDEF_TRACE_HPP
#define REGDEF_TRACE_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regdef/errors.hpp"
#include "regdef/labels.hpp"

namespace regdef {

enum class BaseFamily { Glk, T1, T2, T3, T4 };

inline const char* family_name(BaseFamily f) {
    switch (f) {
        case BaseFamily::Glk: return "glk";
        case BaseFamily::T1:  return "t1";
        case BaseFamily::T2:  return "t2";
        case BaseFamily::T3:  return "t3";
        case BaseFamily::T4:  return "t4";
    }
    return "?";
}

inline BaseFamily family_from_name(const std::string& s) {
    if (s == "glk") return BaseFamily::Glk;
    if (s == "t1") return BaseFamily::T1;
    if (s == "t2") return BaseFamily::T2;
    if (s == "t3") return BaseFamily::T3;
    if (s == "t4") return BaseFamily::T4;
    throw MalformedFileError("unknown construction family '" + s + "'");
}

struct ConstructionParams {
    int k = 0;
    std::optional<int> l;
    std::optional<int> s;
    std::optional<int> t;

    friend bool operator==(const ConstructionParams&, const ConstructionParams&) = default;
};

// One construction event: either a new vertex with the edges it absorbs and
// contributes, or a pure edge mutation (rewiring, factor addition, matching
// deletion). Edge endpoints keep the display orientation the construction
// used, so the trace reproduces the published column layout.
struct TraceStep {
    std::optional<VertexLabel> new_vertex;
    std::vector<std::pair<VertexLabel, VertexLabel>> deleted_edges;
    std::vector<std::pair<VertexLabel, VertexLabel>> added_edges;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct ConstructionTrace {
    BaseFamily base_family = BaseFamily::Glk;
    ConstructionParams params;
    std::vector<TraceStep> steps;

    friend bool operator==(const ConstructionTrace&, const ConstructionTrace&) = default;
};

inline nlohmann::json trace_to_json(const ConstructionTrace& tr) {
    nlohmann::json j;
    j["base_family"] = family_name(tr.base_family);
    nlohmann::json params;
    params["k"] = tr.params.k;
    if (tr.params.l) params["l"] = *tr.params.l;
    if (tr.params.s) params["s"] = *tr.params.s;
    if (tr.params.t) params["t"] = *tr.params.t;
    j["params"] = params;
    auto steps = nlohmann::json::array();
    for (const auto& st : tr.steps) {
        nlohmann::json js;
        js["new_vertex"] = st.new_vertex ? nlohmann::json(render_label(*st.new_vertex))
                                         : nlohmann::json(nullptr);
        auto del = nlohmann::json::array();
        for (const auto& [a, b] : st.deleted_edges)
            del.push_back({render_label(a), render_label(b)});
        js["deleted_edges"] = del;
        auto add = nlohmann::json::array();
        for (const auto& [a, b] : st.added_edges)
            add.push_back({render_label(a), render_label(b)});
        js["added_edges"] = add;
        steps.push_back(std::move(js));
    }
    j["steps"] = steps;
    return j;
}

inline ConstructionTrace trace_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("base_family") || !j.contains("params") ||
        !j.contains("steps"))
        throw MalformedFileError("trace json needs base_family, params, steps");
    ConstructionTrace tr;
    tr.base_family = family_from_name(j["base_family"].get<std::string>());
    const auto& p = j["params"];
    if (!p.is_object() || !p.contains("k"))
        throw MalformedFileError("trace json params need k");
    tr.params.k = p["k"].get<int>();
    if (p.contains("l")) tr.params.l = p["l"].get<int>();
    if (p.contains("s")) tr.params.s = p["s"].get<int>();
    if (p.contains("t")) tr.params.t = p["t"].get<int>();
    for (const auto& js : j["steps"]) {
        TraceStep st;
        if (!js.contains("new_vertex") || !js.contains("deleted_edges") ||
            !js.contains("added_edges"))
            throw MalformedFileError("trace step needs new_vertex, deleted_edges, added_edges");
        if (!js["new_vertex"].is_null())
            st.new_vertex = parse_label(js["new_vertex"].get<std::string>());
        for (const auto& e : js["deleted_edges"])
            st.deleted_edges.emplace_back(parse_label(e.at(0).get<std::string>()),
                                          parse_label(e.at(1).get<std::string>()));
        for (const auto& e : js["added_edges"])
            st.added_edges.emplace_back(parse_label(e.at(0).get<std::string>()),
                                        parse_label(e.at(1).get<std::string>()));
        tr.steps.push_back(std::move(st));
    }
    return tr;
}

}  // namespace regdef

#endif

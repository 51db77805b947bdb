#ifndef REGDEF_LABELS_HPP
#define REGDEF_LABELS_HPP

#include <string>
#include <tuple>

#include "regdef/errors.hpp"

namespace regdef {

enum class Family { U, V, W, X, Y };

inline char family_char(Family f) {
    switch (f) {
        case Family::U: return 'u';
        case Family::V: return 'v';
        case Family::W: return 'w';
        case Family::X: return 'x';
        case Family::Y: return 'y';
    }
    return '?';
}

// A structured vertex name such as u3, v2' or x1. The primed flag is
// display-only: u2' in a construction with half-offset m names the vertex
// at absolute index 2+m of the u layer. The label itself does not know the
// offset; builders assign ids in layer order.
struct VertexLabel {
    Family family = Family::U;
    int index = 1;       // displayed index, >= 1
    bool primed = false;

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
    friend auto operator<=>(const VertexLabel& a, const VertexLabel& b) {
        return std::tie(a.family, a.index, a.primed) <=> std::tie(b.family, b.index, b.primed);
    }
};

inline VertexLabel u_(int i, bool primed = false) { return {Family::U, i, primed}; }
inline VertexLabel v_(int i, bool primed = false) { return {Family::V, i, primed}; }
inline VertexLabel w_(int i, bool primed = false) { return {Family::W, i, primed}; }
inline VertexLabel x_(int i) { return {Family::X, i, false}; }
inline VertexLabel y_(int i) { return {Family::Y, i, false}; }

inline std::string render_label(const VertexLabel& l) {
    std::string s;
    s += family_char(l.family);
    s += std::to_string(l.index);
    if (l.primed) s += '\'';
    return s;
}

// Strict inverse of render_label: one family letter, a positive integer with
// no leading zeros, an optional trailing prime. Anything else is rejected.
inline VertexLabel parse_label(const std::string& s) {
    if (s.size() < 2) throw MalformedLabelError("label too short: '" + s + "'");
    Family fam;
    switch (s[0]) {
        case 'u': fam = Family::U; break;
        case 'v': fam = Family::V; break;
        case 'w': fam = Family::W; break;
        case 'x': fam = Family::X; break;
        case 'y': fam = Family::Y; break;
        default: throw MalformedLabelError("unknown family in label '" + s + "'");
    }
    size_t end = s.size();
    bool primed = false;
    if (s[end - 1] == '\'') {
        primed = true;
        --end;
    }
    if (end < 2) throw MalformedLabelError("label has no index: '" + s + "'");
    if (s[1] == '0') throw MalformedLabelError("leading zero in label '" + s + "'");
    int idx = 0;
    for (size_t i = 1; i < end; ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw MalformedLabelError("bad character in label '" + s + "'");
        idx = idx * 10 + (s[i] - '0');
        if (idx > 1000000) throw MalformedLabelError("index overflow in label '" + s + "'");
    }
    if (idx < 1) throw MalformedLabelError("index must be positive in label '" + s + "'");
    return {fam, idx, primed};
}

}  // namespace regdef

#endif

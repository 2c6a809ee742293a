#include "admcover/dot_export.hpp"

#include <sstream>

namespace admcover {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + "\"";
}

void emit_graph(std::ostream& os, const DualGraph& g, const std::string& prefix,
                const std::string& color, const std::string& indent,
                const std::map<EdgeId, int>* edge_index) {
    for (const auto& [v, gv] : g.vertices())
        os << indent << quote(prefix + v) << " [label=" << quote(v + ":g=" + std::to_string(gv))
           << ", shape=circle, color=" << color << "];\n";
    for (const auto& [e, ends] : g.edges()) {
        os << indent << quote(prefix + ends.a) << " -- " << quote(prefix + ends.b);
        std::string label = e;
        if (edge_index && edge_index->count(e))
            label += " (e=" + std::to_string(edge_index->at(e)) + ")";
        os << " [label=" << quote(label) << "];\n";
    }
    for (const auto& [l, v] : g.legs()) {
        os << indent << quote(prefix + "leg:" + l)
           << " [label=" << quote(l) << ", shape=none];\n";
        os << indent << quote(prefix + v) << " -- " << quote(prefix + "leg:" + l)
           << " [style=dashed];\n";
    }
}

} // namespace

std::string to_dot(const DualGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "graph " << quote(name) << " {\n";
    emit_graph(os, g, "", "black", "  ", nullptr);
    os << "}\n";
    return os.str();
}

std::string to_dot(const GraphCover& c) {
    std::ostringstream os;
    os << "graph cover {\n";
    os << "  subgraph cluster_source {\n    label=\"source\";\n    color=blue;\n";
    emit_graph(os, c.source, "s:", "blue", "    ", &c.edge_index);
    os << "  }\n";
    os << "  subgraph cluster_target {\n    label=\"target (degree "
       << c.degree << ")\";\n    color=red;\n";
    emit_graph(os, c.target, "t:", "red", "    ", nullptr);
    os << "  }\n";
    for (const auto& [v, w] : c.vertex_map)
        os << "  " << quote("s:" + v) << " -- " << quote("t:" + w)
           << " [style=dotted, constraint=false];\n";
    os << "}\n";
    return os.str();
}

} // namespace admcover

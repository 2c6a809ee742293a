#include "admcover/json_io.hpp"

#include <fstream>
#include <sstream>

#include "admcover/error.hpp"

namespace admcover {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error("bad_input", what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        bad(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

int int_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number_integer()) bad(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

std::string str_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) bad(std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

const json& array_field(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array()) bad(std::string("field \"") + key + "\" must be an array");
    return v;
}

std::map<std::string, std::string> string_map(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_object()) bad(std::string("field \"") + key + "\" must be an object");
    std::map<std::string, std::string> out;
    for (const auto& [k, val] : v.items()) {
        if (!val.is_string()) bad(std::string("values of \"") + key + "\" must be strings");
        out[k] = val.get<std::string>();
    }
    return out;
}

} // namespace

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io_error", "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Byte offset -> line:column for the diagnostic.
        size_t line = 1, col = 1;
        for (size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw Error("parse_error", path + ":" + std::to_string(line) + ":" +
                                       std::to_string(col) + ": " + e.what());
    }
}

json to_json(const DualGraph& g) {
    json j;
    j["vertices"] = json::array();
    for (const auto& [v, gv] : g.vertices())
        j["vertices"].push_back({{"id", v}, {"genus", gv}});
    j["edges"] = json::array();
    for (const auto& [e, ends] : g.edges())
        j["edges"].push_back({{"id", e}, {"ends", {ends.a, ends.b}}});
    j["legs"] = json::array();
    for (const auto& [l, v] : g.legs())
        j["legs"].push_back({{"id", l}, {"vertex", v}});
    return j;
}

DualGraph graph_from_json(const json& j) {
    std::map<VertexId, int> vs;
    for (const auto& v : array_field(j, "vertices")) {
        const std::string id = str_field(v, "id");
        if (vs.count(id)) bad("duplicate vertex id " + id);
        vs[id] = int_field(v, "genus");
    }
    std::map<EdgeId, Edge> es;
    if (j.contains("edges"))
        for (const auto& e : array_field(j, "edges")) {
            const std::string id = str_field(e, "id");
            if (es.count(id)) bad("duplicate edge id " + id);
            const json& ends = field(e, "ends");
            if (!ends.is_array() || ends.size() != 2 || !ends[0].is_string() ||
                !ends[1].is_string())
                bad("edge \"" + id + "\" needs ends: [vertex, vertex]");
            es[id] = Edge{ends[0].get<std::string>(), ends[1].get<std::string>()};
        }
    std::map<LegId, VertexId> ls;
    if (j.contains("legs"))
        for (const auto& l : array_field(j, "legs")) {
            const std::string id = str_field(l, "id");
            if (ls.count(id)) bad("duplicate leg id " + id);
            ls[id] = str_field(l, "vertex");
        }
    try {
        return DualGraph::make(vs, es, ls);
    } catch (const Error& e) {
        bad(e.what());
    }
}

json to_json(const BranchDatum& b) {
    json j;
    j["degree"] = b.degree;
    j["source_genus"] = b.source_genus;
    j["target_genus"] = b.target_genus;
    j["fibers"] = json::array();
    for (const auto& f : b.fibers) {
        json jf;
        jf["point"] = f.point;
        jf["preimages"] = json::array();
        for (const auto& pre : f.preimages) {
            json jp;
            jp["label"] = pre.label ? json(*pre.label) : json(nullptr);
            jp["e"] = pre.e;
            jf["preimages"].push_back(jp);
        }
        j["fibers"].push_back(jf);
    }
    return j;
}

BranchDatum datum_from_json(const json& j) {
    BranchDatum b;
    b.degree = int_field(j, "degree");
    b.source_genus = int_field(j, "source_genus");
    b.target_genus = int_field(j, "target_genus");
    if (j.contains("fibers"))
        for (const auto& f : array_field(j, "fibers")) {
            Fiber fiber;
            fiber.point = str_field(f, "point");
            for (const auto& p : array_field(f, "preimages")) {
                PreimagePoint pre;
                const json& label = field(p, "label");
                if (label.is_string()) pre.label = label.get<std::string>();
                else if (!label.is_null()) bad("preimage label must be string or null");
                pre.e = int_field(p, "e");
                fiber.preimages.push_back(pre);
            }
            b.fibers.push_back(std::move(fiber));
        }
    return b;
}

json to_json(const GraphCover& c) {
    json j;
    j["source"] = to_json(c.source);
    j["target"] = to_json(c.target);
    j["degree"] = c.degree;
    j["vertex_map"] = c.vertex_map;
    j["vertex_data"] = json::object();
    for (const auto& [v, d] : c.vertex_data) j["vertex_data"][v] = to_json(d);
    j["edge_map"] = c.edge_map;
    j["edge_index"] = c.edge_index;
    j["leg_map"] = c.leg_map;
    return j;
}

GraphCover cover_from_json(const json& j) {
    GraphCover c;
    c.source = graph_from_json(field(j, "source"));
    c.target = graph_from_json(field(j, "target"));
    c.degree = int_field(j, "degree");
    c.vertex_map = string_map(j, "vertex_map");
    const json& vd = field(j, "vertex_data");
    if (!vd.is_object()) bad("field \"vertex_data\" must be an object");
    for (const auto& [v, d] : vd.items()) c.vertex_data[v] = datum_from_json(d);
    c.edge_map = string_map(j, "edge_map");
    const json& ei = field(j, "edge_index");
    if (!ei.is_object()) bad("field \"edge_index\" must be an object");
    for (const auto& [e, v] : ei.items()) {
        if (!v.is_number_integer()) bad("edge_index values must be integers");
        c.edge_index[e] = v.get<int>();
    }
    if (j.contains("leg_map")) c.leg_map = string_map(j, "leg_map");
    return c;
}

json to_json(const GluingSpec& s) {
    json j;
    j["cover"] = to_json(s.cover);
    j["mode"] = s.mode == GlueMode::GenusRaise ? "genus_raise" : "equal_images";
    j["pairs"] = json::array();
    for (const auto& p : s.pairs)
        j["pairs"].push_back({{"leg1", p.p1}, {"leg2", p.p2}});
    if (s.q1) j["q1"] = *s.q1;
    if (s.q2) j["q2"] = *s.q2;
    return j;
}

GluingSpec gluing_from_json(const json& j) {
    GluingSpec s;
    s.cover = cover_from_json(field(j, "cover"));
    const std::string mode = str_field(j, "mode");
    if (mode == "genus_raise") s.mode = GlueMode::GenusRaise;
    else if (mode == "equal_images") s.mode = GlueMode::EqualImages;
    else bad("mode must be \"genus_raise\" or \"equal_images\"");
    for (const auto& p : array_field(j, "pairs"))
        s.pairs.push_back({str_field(p, "leg1"), str_field(p, "leg2")});
    if (j.contains("q1")) s.q1 = str_field(j, "q1");
    if (j.contains("q2")) s.q2 = str_field(j, "q2");
    return s;
}

json to_json(const IrreducibleCurveData& c) {
    json j;
    j["normalization_genus"] = c.normalization_genus;
    j["nodes"] = json::array();
    for (const auto& n : c.nodes)
        j["nodes"].push_back({{"id", n.id}, {"branches", {n.b1, n.b2}}});
    return j;
}

IrreducibleCurveData curve_data_from_json(const json& j) {
    if (j.contains("vertices")) {
        // One-vertex dual graph form: loops are the nodes.
        DualGraph g = graph_from_json(j);
        if (g.vertices().size() != 1)
            bad("curve data from a dual graph needs exactly one vertex");
        IrreducibleCurveData c;
        c.normalization_genus = g.vertices().begin()->second;
        for (const auto& [e, ends] : g.edges()) {
            if (!ends.is_loop()) bad("edge " + e + " is not a loop");
            c.nodes.push_back({e, e + "~1", e + "~2"});
        }
        return c;
    }
    IrreducibleCurveData c;
    c.normalization_genus = int_field(j, "normalization_genus");
    if (j.contains("nodes"))
        for (const auto& n : array_field(j, "nodes")) {
            const json& br = field(n, "branches");
            if (!br.is_array() || br.size() != 2 || !br[0].is_string() ||
                !br[1].is_string())
                bad("node needs branches: [label, label]");
            c.nodes.push_back({str_field(n, "id"), br[0].get<std::string>(),
                               br[1].get<std::string>()});
        }
    return c;
}

json to_json(const MonodromyWitness& w) {
    json j;
    j["degree"] = w.degree;
    j["handles"] = json::array();
    for (const auto& p : w.handles) j["handles"].push_back(p.images());
    j["branch"] = json::array();
    for (const auto& p : w.branch) j["branch"].push_back(p.images());
    return j;
}

MonodromyWitness witness_from_json(const json& j) {
    MonodromyWitness w;
    w.degree = int_field(j, "degree");
    auto perm = [](const json& a) {
        if (!a.is_array()) bad("permutation must be an image array");
        std::vector<int> img;
        for (const auto& x : a) {
            if (!x.is_number_integer()) bad("permutation entries must be integers");
            img.push_back(x.get<int>());
        }
        try {
            return Perm(std::move(img));
        } catch (const Error& e) {
            bad(e.what());
        }
    };
    for (const auto& p : array_field(j, "handles")) w.handles.push_back(perm(p));
    for (const auto& p : array_field(j, "branch")) w.branch.push_back(perm(p));
    return w;
}

json to_json(const EllipticityCertificate& c) {
    json j;
    j["cover"] = to_json(c.cover);
    j["delta0"] = c.delta0;
    j["groups"] = c.groups;
    j["point_pairs"] = json::array();
    for (const auto& [q1, q2] : c.point_pairs)
        j["point_pairs"].push_back({q1, q2});
    j["witness"] = to_json(c.witness);
    return j;
}

EllipticityCertificate certificate_from_json(const json& j) {
    EllipticityCertificate c;
    c.cover = datum_from_json(field(j, "cover"));
    c.delta0 = int_field(j, "delta0");
    for (const auto& g : array_field(j, "groups")) {
        if (!g.is_array()) bad("groups must be arrays of node ids");
        std::vector<std::string> ids;
        for (const auto& id : g) {
            if (!id.is_string()) bad("node ids must be strings");
            ids.push_back(id.get<std::string>());
        }
        c.groups.push_back(std::move(ids));
    }
    for (const auto& p : array_field(j, "point_pairs")) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
            bad("point pairs must be [label, label]");
        c.point_pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    c.witness = witness_from_json(field(j, "witness"));
    return c;
}

json to_json(const Verdict& v) {
    json j;
    j["decision"] = v.decision == Decision::CertifiedYes ? "certified_yes"
                                                         : "no_certificate_found";
    if (v.certificate) j["certificate"] = to_json(*v.certificate);
    j["refutations"] = json::array();
    for (const auto& r : v.refutations)
        j["refutations"].push_back(
            {{"h_prime", r.h_prime}, {"tag", r.tag}, {"detail", r.detail}});
    return j;
}

namespace {
json to_json(const ConditionResult& c) {
    return {{"pass", c.pass}, {"witnesses", c.witnesses}};
}
} // namespace

json to_json(const AdmissibilityReport& r) {
    json j;
    j["c1"] = to_json(r.c1);
    j["c2"] = to_json(r.c2);
    j["c3_stable_target"] = to_json(r.c3_stable_target);
    j["c3prime_no_internal"] = to_json(r.c3prime_no_internal);
    j["c4"] = to_json(r.c4);
    j["degree_consistency"] = to_json(r.degree_consistency);
    j["rh_consistency"] = to_json(r.rh_consistency);
    return j;
}

json to_json(const VerifyReport& r) {
    return {{"ok", r.ok}, {"problems", r.problems}};
}

json to_json(const Contraction& c) {
    json j;
    j["source"] = to_json(c.source);
    j["target"] = to_json(c.target);
    j["vertex_image"] = c.vertex_image;
    json collapsed = json::object();
    for (const auto& [v, t] : c.collapsed)
        collapsed[v] = {{"kind", t.kind == CollapseTarget::Kind::ToVertex
                                     ? "vertex"
                                     : "edge"},
                        {"id", t.id}};
    j["collapsed"] = collapsed;
    j["edge_map"] = c.edge_map;
    return j;
}

} // namespace admcover

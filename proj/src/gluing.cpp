#include "admcover/gluing.hpp"

#include <algorithm>

#include "admcover/error.hpp"

namespace admcover {

namespace {

// Where a distinguished smooth point lives: carrying source vertex, its image
// vertex, the target point label of its fiber, and its ramification index.
struct Located {
    VertexId v;
    VertexId w;
    PointLabel t;
    int e = 1;
};

bool names_edge(const DualGraph& g, const std::string& l) {
    if (g.has_edge(l)) return true;
    const auto n = l.size();
    if (n > 2 && l[n - 2] == '~' && (l[n - 1] == '1' || l[n - 1] == '2'))
        return g.has_edge(l.substr(0, n - 2));
    return false;
}

// Finds the fiber entry labelled `l`, materializing an unramified entry for a
// source leg that no fiber lists yet.
Located locate(GraphCover& c, const PointLabel& l) {
    if (names_edge(c.source, l))
        throw Error("non_nodal", l + " is already a node");
    for (auto& [v, datum] : c.vertex_data)
        for (auto& f : datum.fibers)
            for (auto& pre : f.preimages)
                if (pre.label && *pre.label == l) {
                    const VertexId w = c.vertex_map.at(v);
                    if (is_edge_point(c.target, w, f.point))
                        throw Error("non_nodal", l + " lies over a node");
                    return {v, w, f.point, pre.e};
                }
    auto lm = c.leg_map.find(l);
    if (lm != c.leg_map.end()) {
        const VertexId v = c.source.legs().at(l);
        BranchDatum& d = c.vertex_data.at(v);
        Fiber* f = nullptr;
        for (auto& g : d.fibers)
            if (g.point == lm->second) f = &g;
        if (!f) {
            Fiber nf;
            nf.point = lm->second;
            nf.preimages.assign(d.degree, PreimagePoint{std::nullopt, 1});
            d.fibers.push_back(nf);
            f = &d.fibers.back();
        }
        for (auto& pre : f->preimages)
            if (!pre.label && pre.e == 1) {
                pre.label = l;
                return {v, c.vertex_map.at(v), f->point, 1};
            }
        throw Error("unknown_label", "leg " + l + " has no unramified slot left");
    }
    throw Error("unknown_label", "no point labelled " + l);
}

void rename_fiber_points(GraphCover& c, const VertexId& over,
                         const PointLabel& from, const PointLabel& to) {
    for (auto& [v, datum] : c.vertex_data) {
        if (c.vertex_map.at(v) != over) continue;
        for (auto& f : datum.fibers)
            if (f.point == from) f.point = to;
    }
}

void relabel_entry(BranchDatum& d, const PointLabel& at, const std::string& from,
                   const std::string& to) {
    for (auto& f : d.fibers) {
        if (f.point != at) continue;
        for (auto& pre : f.preimages)
            if (pre.label && *pre.label == from) pre.label = to;
    }
}

void consume_leg(GraphCover& c, std::map<LegId, VertexId>& legs,
                 const PointLabel& l) {
    if (legs.erase(l)) c.leg_map.erase(l);
}

BranchDatum rational_tail(int e, const EdgeId& node_edge, const EdgeId& up_edge,
                          const std::string& simple_base) {
    BranchDatum tail;
    tail.degree = e;
    tail.fibers.push_back(Fiber{node_edge, {{up_edge, e}}});
    for (int s = 1; s <= e - 1; ++s) {
        Fiber simple;
        simple.point = simple_base + "+s" + std::to_string(s);
        simple.preimages.push_back({std::nullopt, 2});
        for (int u = 0; u < e - 2; ++u) simple.preimages.push_back({std::nullopt, 1});
        tail.fibers.push_back(simple);
    }
    return tail;
}

} // namespace

GraphCover glue_genus_raise(const GraphCover& input,
                            const std::vector<GluePair>& pairs) {
    if (pairs.empty()) throw Error("empty_result", "no pairs to glue");
    GraphCover c = input;

    std::vector<Located> a, b;
    for (const auto& pr : pairs) {
        a.push_back(locate(c, pr.p1));
        b.push_back(locate(c, pr.p2));
    }
    const PointLabel q1 = a[0].t, q2 = b[0].t;
    const VertexId w1 = a[0].w, w2 = b[0].w;
    if (q1 == q2 && w1 == w2)
        throw Error("points_equal", "both sides glue over " + q1);
    for (size_t i = 0; i < pairs.size(); ++i) {
        if (a[i].t != q1 || a[i].w != w1 || b[i].t != q2 || b[i].w != w2)
            throw Error("images_differ",
                        "pair " + pairs[i].p1 + "/" + pairs[i].p2 +
                            " lies over other points");
        if (a[i].e != b[i].e)
            throw Error("index_mismatch",
                        pairs[i].p1 + " and " + pairs[i].p2 +
                            " have unequal ramification indices");
    }

    // Every preimage of q1 and of q2 must be glued.
    auto check_full = [&](const VertexId& w, const PointLabel& t,
                          const std::set<std::string>& members) {
        for (const auto& [v, datum] : c.vertex_data) {
            if (c.vertex_map.at(v) != w) continue;
            const Fiber* f = datum.fiber_at(t);
            if (!f)
                throw Error("fiber_not_full",
                            "unglued preimages of " + t + " on " + v);
            for (const auto& pre : f->preimages)
                if (!pre.label || !members.count(*pre.label))
                    throw Error("fiber_not_full",
                                "unglued preimage of " + t + " on " + v);
        }
    };
    std::set<std::string> m1, m2;
    for (const auto& pr : pairs) {
        m1.insert(pr.p1);
        m2.insert(pr.p2);
    }
    check_full(w1, q1, m1);
    check_full(w2, q2, m2);

    std::map<VertexId, int> sv = c.source.vertices();
    std::map<EdgeId, Edge> se = c.source.edges();
    std::map<LegId, VertexId> sl = c.source.legs();
    std::map<VertexId, int> tv = c.target.vertices();
    std::map<EdgeId, Edge> te = c.target.edges();
    std::map<LegId, VertexId> tl = c.target.legs();

    const VertexId lid = "L(" + q1 + "," + q2 + ")";
    EdgeId qb1 = q1 + "+b", qb2 = q2 + "+b";
    if (qb1 == qb2) qb2 += "2";
    tv[lid] = 0;
    te[qb1] = Edge{w1, lid};
    te[qb2] = Edge{w2, lid};

    for (size_t i = 0; i < pairs.size(); ++i) {
        const int e = a[i].e;
        const VertexId tid = pairs[i].p1 + "+T";
        const EdgeId pe1 = pairs[i].p1 + "+e", pe2 = pairs[i].p2 + "+e";
        sv[tid] = 0;
        se[pe1] = Edge{a[i].v, tid};
        se[pe2] = Edge{b[i].v, tid};
        c.vertex_map[tid] = lid;
        c.edge_map[pe1] = qb1;
        c.edge_map[pe2] = qb2;
        c.edge_index[pe1] = e;
        c.edge_index[pe2] = e;

        BranchDatum piece;
        piece.degree = e;
        piece.fibers.push_back(Fiber{qb1, {{pe1, e}}});
        piece.fibers.push_back(Fiber{qb2, {{pe2, e}}});
        c.vertex_data[tid] = piece;

        relabel_entry(c.vertex_data.at(a[i].v), q1, pairs[i].p1, pe1);
        relabel_entry(c.vertex_data.at(b[i].v), q2, pairs[i].p2, pe2);
        consume_leg(c, sl, pairs[i].p1);
        consume_leg(c, sl, pairs[i].p2);
    }

    c.source = DualGraph::make(sv, se, sl);
    c.target = DualGraph::make(tv, te, tl);
    rename_fiber_points(c, w1, q1, qb1);
    rename_fiber_points(c, w2, q2, qb2);
    return c;
}

GraphCover glue_equal_images(const GraphCover& input, const GluePair& pair) {
    if (pair.p1 == pair.p2)
        throw Error("non_nodal", "cannot glue a point to itself");
    GraphCover c = input;
    const Located A = locate(c, pair.p1);
    const Located B = locate(c, pair.p2);
    if (A.w != B.w || A.t != B.t)
        throw Error("images_differ", pair.p1 + " and " + pair.p2 +
                                         " have different images");
    const VertexId w = A.w;
    const PointLabel t = A.t;
    const int e1 = A.e, e2 = B.e;

    std::map<VertexId, int> sv = c.source.vertices();
    std::map<EdgeId, Edge> se = c.source.edges();
    std::map<LegId, VertexId> sl = c.source.legs();
    std::map<VertexId, int> tv = c.target.vertices();
    std::map<EdgeId, Edge> te = c.target.edges();
    std::map<LegId, VertexId> tl = c.target.legs();

    const VertexId lid = t + "+L";
    const EdgeId qid = t + "+q";
    tv[lid] = 0;
    te[qid] = Edge{w, lid};

    // The shared piece carrying the new node pair.
    const VertexId tid = t + "+T";
    const EdgeId pe1 = pair.p1 + "+e", pe2 = pair.p2 + "+e";
    sv[tid] = 0;
    se[pe1] = Edge{A.v, tid};
    se[pe2] = Edge{B.v, tid};
    c.vertex_map[tid] = lid;
    c.edge_map[pe1] = qid;
    c.edge_map[pe2] = qid;
    c.edge_index[pe1] = e1;
    c.edge_index[pe2] = e2;
    {
        BranchDatum piece;
        piece.degree = e1 + e2;
        piece.fibers.push_back(Fiber{qid, {{pe1, e1}, {pe2, e2}}});
        for (int s = 1; s <= e1 + e2; ++s) {
            Fiber simple;
            simple.point = t + "+s" + std::to_string(s);
            simple.preimages.push_back({std::nullopt, 2});
            for (int u = 0; u < e1 + e2 - 2; ++u)
                simple.preimages.push_back({std::nullopt, 1});
            piece.fibers.push_back(simple);
        }
        c.vertex_data[tid] = piece;
    }
    consume_leg(c, sl, pair.p1);
    consume_leg(c, sl, pair.p2);

    // Every other preimage of t gets its own tail, as in cover completion.
    std::vector<VertexId> over;
    for (const auto& [v, img] : c.vertex_map)
        if (img == w && c.source.has_vertex(v)) over.push_back(v);
    for (const auto& v : over) {
        BranchDatum& datum = c.vertex_data.at(v);
        std::vector<PreimagePoint> entries;
        const Fiber* f = datum.fiber_at(t);
        if (f) {
            entries = f->preimages;
            datum.fibers.erase(
                std::remove_if(datum.fibers.begin(), datum.fibers.end(),
                               [&](const Fiber& g) { return g.point == t; }),
                datum.fibers.end());
        } else {
            entries.assign(datum.degree, PreimagePoint{std::nullopt, 1});
        }

        Fiber node_fiber;
        node_fiber.point = qid;
        for (size_t j = 0; j < entries.size(); ++j) {
            if (entries[j].label && *entries[j].label == pair.p1) {
                node_fiber.preimages.push_back({pe1, e1});
                continue;
            }
            if (entries[j].label && *entries[j].label == pair.p2) {
                node_fiber.preimages.push_back({pe2, e2});
                continue;
            }
            const int e = entries[j].e;
            const std::string base =
                entries[j].label ? *entries[j].label
                                 : t + "+" + v + "#" + std::to_string(j);
            const VertexId tailv = base + "+T";
            const EdgeId taile = base + "+e";
            sv[tailv] = 0;
            se[taile] = Edge{v, tailv};
            c.vertex_map[tailv] = lid;
            c.edge_map[taile] = qid;
            c.edge_index[taile] = e;
            if (entries[j].label) consume_leg(c, sl, *entries[j].label);
            node_fiber.preimages.push_back({taile, e});
            c.vertex_data[tailv] = rational_tail(e, qid, taile, base);
        }
        datum.fibers.push_back(node_fiber);
    }

    c.source = DualGraph::make(sv, se, sl);
    c.target = DualGraph::make(tv, te, tl);
    return c;
}

GraphCover glue(const GluingSpec& spec) {
    if (spec.mode == GlueMode::GenusRaise) {
        if (spec.q1 || spec.q2) {
            GraphCover probe = spec.cover;
            for (const auto& pr : spec.pairs) {
                if (spec.q1 && locate(probe, pr.p1).t != *spec.q1)
                    throw Error("images_differ",
                                pr.p1 + " does not lie over " + *spec.q1);
                if (spec.q2 && locate(probe, pr.p2).t != *spec.q2)
                    throw Error("images_differ",
                                pr.p2 + " does not lie over " + *spec.q2);
            }
        }
        return glue_genus_raise(spec.cover, spec.pairs);
    }
    if (spec.pairs.size() != 1)
        throw Error("bad_input", "equal-images gluing takes exactly one pair");
    return glue_equal_images(spec.cover, spec.pairs.front());
}

} // namespace admcover

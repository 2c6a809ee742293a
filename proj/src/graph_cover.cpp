#include "admcover/graph_cover.hpp"

#include <algorithm>
#include <functional>

#include "admcover/error.hpp"

namespace admcover {

std::string half_label(const DualGraph& g, const EdgeId& e, int side) {
    if (g.edge(e).is_loop()) return e + "~" + std::to_string(side);
    return e;
}

bool is_edge_point(const DualGraph& g, const VertexId& at, const PointLabel& p) {
    for (const auto& [e, ends] : g.edges()) {
        if (ends.is_loop()) {
            if (ends.a == at && (p == e + "~1" || p == e + "~2")) return true;
        } else if ((ends.a == at || ends.b == at) && p == e) {
            return true;
        }
    }
    return false;
}

bool AdmissibilityReport::ok(CoverMode mode) const {
    bool base = c1.pass && c2.pass && c4.pass && degree_consistency.pass &&
                rh_consistency.pass;
    if (mode == CoverMode::Admissible) return base && c3_stable_target.pass;
    return base && c3prime_no_internal.pass;
}

namespace {

std::vector<VertexId> sources_over(const GraphCover& c, const VertexId& w) {
    std::vector<VertexId> out;
    for (const auto& [v, img] : c.vertex_map)
        if (img == w) out.push_back(v);
    return out;
}

std::vector<EdgeId> edges_over(const GraphCover& c, const EdgeId& q) {
    std::vector<EdgeId> out;
    for (const auto& [p, img] : c.edge_map)
        if (img == q) out.push_back(p);
    return out;
}

// One expected preimage at a given (target half, source vertex).
struct ExpectedEntry {
    std::string label; // source half-end label
    int e = 1;
};

// Does the fiber of `datum` at `point` consist exactly of `expected`?
// Labelled fiber entries must name expected half-ends; unlabelled ones are
// matched greedily by sorted index.
bool fiber_matches(const BranchDatum& datum, const PointLabel& point,
                   std::vector<ExpectedEntry> expected) {
    const Fiber* f = datum.fiber_at(point);
    size_t listed = f ? f->preimages.size() : 0;
    if (listed != expected.size()) return false;
    if (!f) return true;

    std::vector<int> loose_actual;
    for (const auto& pre : f->preimages) {
        if (!pre.label) {
            loose_actual.push_back(pre.e);
            continue;
        }
        auto it = std::find_if(expected.begin(), expected.end(),
                               [&](const ExpectedEntry& x) {
                                   return x.label == *pre.label;
                               });
        if (it == expected.end()) return false;
        if (it->e != pre.e) return false;
        expected.erase(it);
    }
    std::vector<int> loose_expected;
    for (const auto& x : expected) loose_expected.push_back(x.e);
    std::sort(loose_actual.begin(), loose_actual.end());
    std::sort(loose_expected.begin(), loose_expected.end());
    return loose_actual == loose_expected;
}

// Combined fiber over a smooth target point: entries across every source
// vertex mapping to `w`.
std::vector<std::pair<VertexId, PreimagePoint>> combined_smooth_fiber(
    const GraphCover& c, const VertexId& w, const PointLabel& t) {
    std::vector<std::pair<VertexId, PreimagePoint>> out;
    for (const auto& v : sources_over(c, w)) {
        auto it = c.vertex_data.find(v);
        if (it == c.vertex_data.end()) continue;
        const Fiber* f = it->second.fiber_at(t);
        if (!f) continue;
        for (const auto& pre : f->preimages) out.emplace_back(v, pre);
    }
    return out;
}

} // namespace

std::map<VertexId, std::set<PointLabel>> smooth_branch_points(const GraphCover& c) {
    std::map<VertexId, std::set<PointLabel>> out;
    for (const auto& [v, datum] : c.vertex_data) {
        auto wm = c.vertex_map.find(v);
        if (wm == c.vertex_map.end()) continue;
        const VertexId& w = wm->second;
        for (const auto& f : datum.fibers) {
            if (is_edge_point(c.target, w, f.point)) continue;
            for (const auto& pre : f.preimages)
                if (pre.e >= 2) out[w].insert(f.point);
        }
    }
    return out;
}

AdmissibilityReport validate(const GraphCover& c, CoverMode) {
    AdmissibilityReport r;

    // --- structure under condition 1 ---
    for (const auto& [v, gv] : c.source.vertices()) {
        if (!c.vertex_map.count(v)) r.c1.fail("unmapped vertex " + v);
        else if (!c.target.has_vertex(c.vertex_map.at(v)))
            r.c1.fail("vertex " + v + " maps outside the target");
        if (!c.vertex_data.count(v)) r.rh_consistency.fail("no branch datum for " + v);
    }
    for (const auto& [w, gw] : c.target.vertices())
        if (sources_over(c, w).empty()) r.c1.fail("target vertex " + w + " uncovered");
    for (const auto& [p, ends] : c.source.edges()) {
        auto it = c.edge_map.find(p);
        if (it == c.edge_map.end()) {
            r.c1.fail("unmapped edge " + p);
            continue;
        }
        if (!c.target.has_edge(it->second)) {
            r.c1.fail("edge " + p + " maps outside the target");
            continue;
        }
        const Edge& q = c.target.edge(it->second);
        if (!c.vertex_map.count(ends.a) || !c.vertex_map.count(ends.b)) continue;
        std::multiset<VertexId> lhs{c.vertex_map.at(ends.a), c.vertex_map.at(ends.b)};
        std::multiset<VertexId> rhs{q.a, q.b};
        if (lhs != rhs) r.c1.fail("edge " + p + " has incompatible endpoints");
        if (ends.is_loop() && !q.is_loop())
            r.c1.fail("internal node " + p + " over a non-internal node");
        auto ei = c.edge_index.find(p);
        if (ei == c.edge_index.end() || ei->second < 1 || ei->second > c.degree)
            r.c1.fail("edge " + p + " has no valid ramification index");
    }
    for (const auto& [q, ends] : c.target.edges())
        if (edges_over(c, q).empty()) r.c1.fail("target node " + q + " uncovered");
    for (const auto& [l, v] : c.source.legs()) {
        auto it = c.leg_map.find(l);
        if (it == c.leg_map.end()) {
            r.c1.fail("unmapped leg " + l);
            continue;
        }
        if (!c.vertex_map.count(v)) continue;
        if (is_edge_point(c.target, c.vertex_map.at(v), it->second))
            r.c1.fail("leg " + l + " maps to a node");
    }
    if (!r.c1.pass || !r.rh_consistency.pass) {
        // Remaining checks assume the basic structure; report what we have.
        for (const auto& [q, ends] : c.target.edges())
            if (ends.is_loop()) r.c3prime_no_internal.fail(q);
        return r;
    }

    // --- local smooth-cover validity ---
    for (const auto& [v, datum] : c.vertex_data) {
        if (!c.source.has_vertex(v)) {
            r.rh_consistency.fail("datum for unknown vertex " + v);
            continue;
        }
        const VertexId& w = c.vertex_map.at(v);
        if (datum.source_genus != c.source.genus_of(v))
            r.rh_consistency.fail("datum genus disagrees at " + v);
        if (datum.target_genus != c.target.genus_of(w))
            r.rh_consistency.fail("datum target genus disagrees at " + v);
        RhReport rh = validate_rh(datum);
        if (!rh.ok) r.rh_consistency.fail(v + ": " + rh.reason);
    }

    // --- degree bookkeeping ---
    for (const auto& [w, gw] : c.target.vertices()) {
        int sum = 0;
        for (const auto& v : sources_over(c, w)) sum += c.vertex_data.at(v).degree;
        if (sum != c.degree) r.degree_consistency.fail("vertex fiber over " + w);
    }
    for (const auto& [q, ends] : c.target.edges()) {
        int sum = 0;
        for (const auto& p : edges_over(c, q)) sum += c.edge_index.at(p);
        if (sum != c.degree) r.degree_consistency.fail("node fiber over " + q);
    }

    // --- condition 4: one index per node, read off both half-ends ---
    for (const auto& [p, ends] : c.source.edges()) {
        const int e = c.edge_index.at(p);
        const VertexId va = ends.a, vb = ends.b;
        for (int side = 1; side <= 2; ++side) {
            const std::string l = half_label(c.source, p, side);
            const VertexId& v = (ends.is_loop() || side == 1) ? va : vb;
            // A labelled entry for this half anywhere in the datum must agree
            // with the edge index.
            auto idx = c.vertex_data.at(v).index_of_label(l);
            if (!ends.is_loop() && side == 2) {
                idx = c.vertex_data.at(vb).index_of_label(l);
            }
            if (idx && *idx != e) r.c4.fail(p);
            if (!ends.is_loop()) {
                // Both half-ends share the plain label; check the other
                // vertex too and stop.
                auto idx2 = c.vertex_data.at(vb).index_of_label(l);
                if (idx2 && *idx2 != e) r.c4.fail(p);
                break;
            }
        }
    }

    // --- per-node fiber structure (condition 1 with the matching index) ---
    for (const auto& [q, qends] : c.target.edges()) {
        const auto pre = edges_over(c, q);
        bool matched = true;

        if (!qends.is_loop()) {
            // Orientation forced by the vertex map.
            std::map<std::pair<int, VertexId>, std::vector<ExpectedEntry>> expected;
            bool broken = false;
            for (const auto& p : pre) {
                const Edge& pe = c.source.edge(p);
                const int e = c.edge_index.at(p);
                VertexId x = pe.a, y = pe.b;
                if (c.vertex_map.at(x) != qends.a) std::swap(x, y);
                if (c.vertex_map.at(x) != qends.a || c.vertex_map.at(y) != qends.b) {
                    broken = true;
                    break;
                }
                expected[{1, x}].push_back({half_label(c.source, p, 1), e});
                expected[{2, y}].push_back({half_label(c.source, p, 1), e});
            }
            if (broken) continue; // already a c1 endpoint failure
            for (int side = 1; side <= 2 && matched; ++side) {
                const VertexId& w = side == 1 ? qends.a : qends.b;
                for (const auto& v : sources_over(c, w)) {
                    auto it = expected.find({side, v});
                    std::vector<ExpectedEntry> want =
                        it == expected.end() ? std::vector<ExpectedEntry>{} : it->second;
                    if (!fiber_matches(c.vertex_data.at(v), q, want)) {
                        matched = false;
                        r.c1.fail("fiber over " + q + " at " + v);
                        break;
                    }
                }
            }
            (void)matched;
            continue;
        }

        // Loop: each preimage may sit over the two halves either way round;
        // backtrack over orientations.
        const VertexId& w = qends.a;
        const std::string t1 = q + "~1", t2 = q + "~2";
        const auto over_w = sources_over(c, w);

        std::function<bool(size_t, std::map<std::pair<int, VertexId>,
                                            std::vector<ExpectedEntry>>&)>
            assign = [&](size_t i,
                         std::map<std::pair<int, VertexId>,
                                  std::vector<ExpectedEntry>>& acc) -> bool {
            if (i == pre.size()) {
                for (int side = 1; side <= 2; ++side)
                    for (const auto& v : over_w) {
                        auto it = acc.find({side, v});
                        std::vector<ExpectedEntry> want =
                            it == acc.end() ? std::vector<ExpectedEntry>{} : it->second;
                        const PointLabel& pt = side == 1 ? t1 : t2;
                        if (!fiber_matches(c.vertex_data.at(v), pt, want))
                            return false;
                    }
                return true;
            }
            const EdgeId& p = pre[i];
            const Edge& pe = c.source.edge(p);
            const int e = c.edge_index.at(p);
            for (int flip = 0; flip < 2; ++flip) {
                auto saved = acc;
                if (pe.is_loop()) {
                    acc[{flip ? 2 : 1, pe.a}].push_back({p + "~1", e});
                    acc[{flip ? 1 : 2, pe.a}].push_back({p + "~2", e});
                } else {
                    acc[{flip ? 2 : 1, pe.a}].push_back({p, e});
                    acc[{flip ? 1 : 2, pe.b}].push_back({p, e});
                }
                if (assign(i + 1, acc)) return true;
                acc = saved;
            }
            return false;
        };
        std::map<std::pair<int, VertexId>, std::vector<ExpectedEntry>> acc;
        if (!assign(0, acc)) r.c1.fail("fiber over " + q);
    }

    // --- condition 2: simple branching away from the nodes ---
    for (const auto& [w, gw] : c.target.vertices()) {
        std::set<PointLabel> smooth;
        for (const auto& v : sources_over(c, w))
            for (const auto& f : c.vertex_data.at(v).fibers)
                if (!is_edge_point(c.target, w, f.point)) smooth.insert(f.point);
        for (const auto& t : smooth) {
            int ramified = 0;
            bool heavy = false;
            for (const auto& [v, pre] : combined_smooth_fiber(c, w, t)) {
                if (pre.e >= 2) ++ramified;
                if (pre.e >= 3) heavy = true;
            }
            if (ramified > 1 || heavy) r.c2.fail(t);
        }
    }

    // --- condition 3: stability of the pointed target ---
    {
        auto bps = smooth_branch_points(c);
        std::map<VertexId, int> vs = c.target.vertices();
        std::map<EdgeId, Edge> es = c.target.edges();
        std::map<LegId, VertexId> ls = c.target.legs();
        for (const auto& [w, pts] : bps)
            for (const auto& t : pts) ls["bp:" + w + ":" + t] = w;
        DualGraph pointed = DualGraph::make(vs, es, ls);
        if (2 * pointed.arithmetic_genus() - 2 +
                static_cast<int>(pointed.legs().size()) <=
            0)
            r.c3_stable_target.fail("target");
        for (const auto& [w, gw] : pointed.vertices())
            if (2 * gw - 2 + pointed.valence(w) + pointed.legs_at(w) <= 0)
                r.c3_stable_target.fail(w);
    }

    // --- condition 3': no internal nodes downstairs ---
    for (const auto& [q, ends] : c.target.edges())
        if (ends.is_loop()) r.c3prime_no_internal.fail(q);

    return r;
}

namespace {

// Claims a fiber entry matching `label` (or, failing that, an unlabelled one
// with the given index) and renames it. Used when edges are cut or merged.
bool claim_and_relabel(Fiber& f, const std::string& old_label, int e,
                       const std::optional<std::string>& new_label) {
    for (auto& pre : f.preimages)
        if (pre.label && *pre.label == old_label) {
            pre.label = new_label;
            return true;
        }
    for (auto& pre : f.preimages)
        if (!pre.label && pre.e == e) {
            pre.label = new_label;
            return true;
        }
    return false;
}

Fiber* find_fiber(BranchDatum& d, const PointLabel& p) {
    for (auto& f : d.fibers)
        if (f.point == p) return &f;
    return nullptr;
}

} // namespace

GraphCover complete_cover(const GraphCover& c) {
    AdmissibilityReport rep = validate(c, CoverMode::Pseudo);
    if (!(rep.c1.pass && rep.c3prime_no_internal.pass && rep.c4.pass &&
          rep.degree_consistency.pass && rep.rh_consistency.pass))
        throw Error("not_completable",
                    "cover fails conditions 1/3'/4 or degree/RH consistency");
    if (rep.c2.pass) return c;

    GraphCover out = c;
    std::map<VertexId, int> src_v = c.source.vertices();
    std::map<EdgeId, Edge> src_e = c.source.edges();
    std::map<LegId, VertexId> src_l = c.source.legs();
    std::map<VertexId, int> tgt_v = c.target.vertices();
    std::map<EdgeId, Edge> tgt_e = c.target.edges();
    std::map<LegId, VertexId> tgt_l = c.target.legs();

    // Offending smooth points: more than one ramified preimage, or index >= 3.
    std::vector<std::pair<VertexId, PointLabel>> offending;
    for (const auto& [w, gw] : c.target.vertices()) {
        std::set<PointLabel> smooth;
        for (const auto& v : sources_over(c, w))
            for (const auto& f : c.vertex_data.at(v).fibers)
                if (!is_edge_point(c.target, w, f.point)) smooth.insert(f.point);
        for (const auto& t : smooth) {
            int ramified = 0;
            bool heavy = false;
            for (const auto& [v, pre] : combined_smooth_fiber(c, w, t)) {
                if (pre.e >= 2) ++ramified;
                if (pre.e >= 3) heavy = true;
            }
            if (ramified > 1 || heavy) offending.emplace_back(w, t);
        }
    }

    for (const auto& [w, t] : offending) {
        const VertexId lid = t + "+L";
        const EdgeId qid = t + "+q";
        tgt_v[lid] = 0;
        tgt_e[qid] = Edge{w, lid};

        for (const auto& v : sources_over(c, w)) {
            BranchDatum& datum = out.vertex_data.at(v);
            Fiber* f = find_fiber(datum, t);
            std::vector<PreimagePoint> entries;
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
                const int e = entries[j].e;
                const std::string base =
                    entries[j].label ? *entries[j].label
                                     : t + "+" + v + "#" + std::to_string(j);
                const VertexId tid = base + "+T";
                const EdgeId pid = base + "+e";
                src_v[tid] = 0;
                src_e[pid] = Edge{v, tid};
                out.edge_map[pid] = qid;
                out.edge_index[pid] = e;
                out.vertex_map[tid] = lid;
                if (entries[j].label && src_l.count(*entries[j].label)) {
                    src_l.erase(*entries[j].label);
                    out.leg_map.erase(*entries[j].label);
                }
                node_fiber.preimages.push_back({pid, e});

                BranchDatum tail;
                tail.degree = e;
                tail.source_genus = 0;
                tail.target_genus = 0;
                Fiber top{qid, {{pid, e}}};
                tail.fibers.push_back(top);
                for (int s = 1; s <= e - 1; ++s) {
                    Fiber simple;
                    simple.point = base + "+s" + std::to_string(s);
                    simple.preimages.push_back({std::nullopt, 2});
                    for (int u = 0; u < e - 2; ++u)
                        simple.preimages.push_back({std::nullopt, 1});
                    tail.fibers.push_back(simple);
                }
                out.vertex_data[tid] = tail;
            }
            datum.fibers.push_back(node_fiber);
        }
    }

    out.source = DualGraph::make(src_v, src_e, src_l);
    out.target = DualGraph::make(tgt_v, tgt_e, tgt_l);
    return out;
}

namespace {

// Distinguished smooth points of a target vertex: branch points plus anything
// a source leg or a target leg marks. Legs block contraction here; the covers
// we contract in practice carry none.
int special_count(const GraphCover& c, const VertexId& w,
                  const std::map<VertexId, std::set<PointLabel>>& bps) {
    int n = c.target.valence(w) + c.target.legs_at(w);
    std::set<PointLabel> pts;
    auto it = bps.find(w);
    if (it != bps.end()) pts = it->second;
    for (const auto& [l, t] : c.leg_map) {
        const VertexId& v = c.source.legs().at(l);
        if (c.vertex_map.at(v) == w) pts.insert(t);
    }
    return n + static_cast<int>(pts.size());
}

void rewrite_point(GraphCover& c, const VertexId& over, const PointLabel& from,
                   const PointLabel& to) {
    for (auto& [v, datum] : c.vertex_data) {
        if (c.vertex_map.at(v) != over) continue;
        for (auto& f : datum.fibers)
            if (f.point == from) f.point = to;
    }
}

void rewrite_entry_label(GraphCover& c, const std::string& from, int e,
                         const std::optional<std::string>& to) {
    for (auto& [v, datum] : c.vertex_data)
        for (auto& f : datum.fibers)
            for (auto& pre : f.preimages)
                if (pre.label && *pre.label == from) {
                    pre.label = to;
                    (void)e;
                    return;
                }
}

} // namespace

CoverContraction to_admissible(const GraphCover& input) {
    GraphCover c = input;

    // Cumulative contraction bookkeeping.
    std::map<VertexId, CollapseTarget> tgt_collapsed, src_collapsed;
    std::map<EdgeId, EdgeId> tgt_edge_img, src_edge_img;
    for (const auto& [e, ends] : input.target.edges()) tgt_edge_img[e] = e;
    for (const auto& [e, ends] : input.source.edges()) src_edge_img[e] = e;

    auto drop_edge_images = [](std::map<EdgeId, EdgeId>& m, const EdgeId& cur) {
        for (auto it = m.begin(); it != m.end();)
            it = (it->second == cur) ? m.erase(it) : std::next(it);
    };
    auto redirect_edge_images = [](std::map<EdgeId, EdgeId>& m, const EdgeId& from,
                                   const EdgeId& to) {
        for (auto& [k, v] : m)
            if (v == from) v = to;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        if (c.target.vertices().size() < 2) break;
        auto bps = smooth_branch_points(c);
        for (const auto& [w, gw] : c.target.vertices()) {
            if (gw != 0) continue;
            bool loop_here = false;
            for (const auto& [q, ends] : c.target.edges())
                if (ends.is_loop() && ends.a == w) loop_here = true;
            if (loop_here) continue;
            if (special_count(c, w, bps) > 2) continue;
            const auto inc = c.target.incident_edges(w);

            if (inc.size() == 2) {
                const EdgeId q1 = std::min(inc[0], inc[1]);
                const EdgeId q2 = std::max(inc[0], inc[1]);
                const Edge& e1 = c.target.edge(q1);
                const Edge& e2 = c.target.edge(q2);
                const VertexId u1 = e1.a == w ? e1.b : e1.a;
                const VertexId u2 = e2.a == w ? e2.b : e2.a;
                const bool makes_loop = (u1 == u2);

                // Target merge.
                std::map<VertexId, int> tv = c.target.vertices();
                std::map<EdgeId, Edge> te = c.target.edges();
                std::map<LegId, VertexId> tl = c.target.legs();
                tv.erase(w);
                te.erase(q2);
                te[q1] = Edge{u1, u2};

                // Point-label rewrites on the neighbours.
                const PointLabel new1 = makes_loop ? q1 + "~1" : q1;
                const PointLabel new2 = makes_loop ? q1 + "~2" : q1;

                // Source merge: every vertex over w has one edge over each of
                // q1, q2 with a common index.
                std::map<VertexId, int> sv = c.source.vertices();
                std::map<EdgeId, Edge> se = c.source.edges();
                std::map<LegId, VertexId> sl = c.source.legs();

                struct Merge {
                    EdgeId keep, drop;
                    VertexId x1, x2;
                    EdgeId p1, p2;
                    int e;
                };
                std::vector<Merge> merges;
                bool feasible = true;
                for (const auto& X : sources_over(c, w)) {
                    EdgeId p1, p2;
                    for (const auto& [p, img] : c.edge_map) {
                        if (!se.count(p)) continue;
                        const Edge& pe = se.at(p);
                        if (pe.a != X && pe.b != X) continue;
                        if (img == q1) p1 = p;
                        else if (img == q2) p2 = p;
                    }
                    if (p1.empty() || p2.empty()) {
                        feasible = false;
                        break;
                    }
                    const Edge& pe1 = se.at(p1);
                    const Edge& pe2 = se.at(p2);
                    Merge m;
                    m.p1 = p1;
                    m.p2 = p2;
                    m.keep = std::min(p1, p2);
                    m.drop = std::max(p1, p2);
                    m.x1 = pe1.a == X ? pe1.b : pe1.a;
                    m.x2 = pe2.a == X ? pe2.b : pe2.a;
                    m.e = c.edge_index.at(p1);
                    merges.push_back(m);
                }
                if (!feasible) continue; // structurally odd; leave alone

                for (const auto& m : merges) {
                    const VertexId X = (se.at(m.p1).a == m.x1) ? se.at(m.p1).b
                                                               : se.at(m.p1).a;
                    se.erase(m.p1);
                    se.erase(m.p2);
                    se[m.keep] = Edge{m.x1, m.x2};
                    sv.erase(X);
                    c.vertex_data.erase(X);
                    c.vertex_map.erase(X);
                    c.edge_map.erase(m.p1);
                    c.edge_map.erase(m.p2);
                    c.edge_index.erase(m.p1);
                    c.edge_index.erase(m.p2);
                    c.edge_map[m.keep] = q1;
                    c.edge_index[m.keep] = m.e;
                    src_collapsed[X] = {CollapseTarget::Kind::ToEdge, m.keep};
                    redirect_edge_images(src_edge_img, m.p1, m.keep);
                    redirect_edge_images(src_edge_img, m.p2, m.keep);

                    const bool src_loop = (m.x1 == m.x2);
                    const std::string l1 = src_loop ? m.keep + "~1" : m.keep;
                    const std::string l2 = src_loop ? m.keep + "~2" : m.keep;
                    // x1 side sat over q1, x2 side over q2.
                    for (auto& [v, datum] : c.vertex_data) {
                        for (auto& f : datum.fibers) {
                            for (auto& pre : f.preimages) {
                                if (!pre.label) continue;
                                if (*pre.label == m.p1 || *pre.label == m.p1 + "~1" ||
                                    *pre.label == m.p1 + "~2")
                                    pre.label = l1;
                                else if (*pre.label == m.p2 ||
                                         *pre.label == m.p2 + "~1" ||
                                         *pre.label == m.p2 + "~2")
                                    pre.label = l2;
                            }
                        }
                    }
                }

                c.target = DualGraph::make(tv, te, tl);
                c.source = DualGraph::make(sv, se, sl);
                rewrite_point(c, u1, q1, new1);
                rewrite_point(c, u2, q2, new2);
                tgt_collapsed[w] = {CollapseTarget::Kind::ToEdge, q1};
                redirect_edge_images(tgt_edge_img, q2, q1);
                changed = true;
                break;
            }

            if (inc.size() == 1) {
                const EdgeId q = inc[0];
                const Edge& qe = c.target.edge(q);
                const VertexId u = qe.a == w ? qe.b : qe.a;

                std::map<VertexId, int> tv = c.target.vertices();
                std::map<EdgeId, Edge> te = c.target.edges();
                std::map<LegId, VertexId> tl = c.target.legs();
                tv.erase(w);
                te.erase(q);

                std::map<VertexId, int> sv = c.source.vertices();
                std::map<EdgeId, Edge> se = c.source.edges();
                std::map<LegId, VertexId> sl = c.source.legs();
                std::vector<EdgeId> dead = edges_over(c, q);
                for (const auto& X : sources_over(c, w)) {
                    // X is absorbed into its neighbour across the contracted
                    // edge; endpoints over q pair w with u, so the neighbour
                    // survives this round.
                    VertexId into;
                    for (const auto& p : dead) {
                        const Edge& pe = se.at(p);
                        if (pe.a == X) into = pe.b;
                        else if (pe.b == X) into = pe.a;
                        if (!into.empty()) break;
                    }
                    sv.erase(X);
                    c.vertex_data.erase(X);
                    c.vertex_map.erase(X);
                    src_collapsed[X] = {CollapseTarget::Kind::ToVertex, into};
                }
                for (const auto& p : dead) {
                    se.erase(p);
                    c.edge_map.erase(p);
                    c.edge_index.erase(p);
                    drop_edge_images(src_edge_img, p);
                    // The surviving half-end becomes a plain (possibly
                    // branch) smooth point.
                    rewrite_entry_label(c, p, 0, p + "+pt");
                }

                c.target = DualGraph::make(tv, te, tl);
                c.source = DualGraph::make(sv, se, sl);
                rewrite_point(c, u, q, q + "+pt");
                tgt_collapsed[w] = {CollapseTarget::Kind::ToVertex, u};
                drop_edge_images(tgt_edge_img, q);
                changed = true;
                break;
            }
        }
    }

    // Resolve collapse chains: a recorded landing vertex may itself have been
    // collapsed by a later round.
    auto resolve = [](std::map<VertexId, CollapseTarget>& m) {
        for (auto& [v, tgt] : m) {
            while (tgt.kind == CollapseTarget::Kind::ToVertex && m.count(tgt.id) &&
                   tgt.id != v)
                tgt = m.at(tgt.id);
        }
    };
    resolve(src_collapsed);
    resolve(tgt_collapsed);

    CoverContraction out;
    out.cover = c;
    out.target_contraction.source = input.target;
    out.target_contraction.target = c.target;
    out.target_contraction.collapsed = tgt_collapsed;
    out.target_contraction.edge_map = tgt_edge_img;
    for (const auto& [w, gw] : c.target.vertices())
        out.target_contraction.vertex_image[w] = w;
    out.source_contraction.source = input.source;
    out.source_contraction.target = c.source;
    out.source_contraction.collapsed = src_collapsed;
    out.source_contraction.edge_map = src_edge_img;
    for (const auto& [v, gv] : c.source.vertices())
        out.source_contraction.vertex_image[v] = v;
    return out;
}

GraphCover to_pseudo(const GraphCover& input) {
    GraphCover c = input;

    for (;;) {
        EdgeId loop;
        for (const auto& [q, ends] : c.target.edges())
            if (ends.is_loop()) {
                loop = q;
                break;
            }
        if (loop.empty()) break;

        const EdgeId q = loop;
        const VertexId w = c.target.edge(q).a;
        const auto pre = edges_over(c, q);

        std::map<VertexId, int> tv = c.target.vertices();
        std::map<EdgeId, Edge> te = c.target.edges();
        std::map<LegId, VertexId> tl = c.target.legs();
        const VertexId lid = q + "+L";
        const EdgeId b1 = q + "+b1", b2 = q + "+b2";
        te.erase(q);
        tv[lid] = 0;
        te[b1] = Edge{w, lid};
        te[b2] = Edge{w, lid};

        std::map<VertexId, int> sv = c.source.vertices();
        std::map<EdgeId, Edge> se = c.source.edges();
        std::map<LegId, VertexId> sl = c.source.legs();

        // Which end of a preimage sits over which half of the loop is read
        // off the stored labels; unlabelled data falls back to declaration
        // order.
        for (const auto& p : pre) {
            const Edge& pe = c.source.edge(p);
            const int e = c.edge_index.at(p);
            VertexId end1 = pe.a, end2 = pe.b;
            std::string lab1 = pe.is_loop() ? p + "~1" : p;
            std::string lab2 = pe.is_loop() ? p + "~2" : p;
            if (!pe.is_loop()) {
                // Find which end's datum lists p over q~1.
                const Fiber* f = c.vertex_data.at(pe.a).fiber_at(q + "~1");
                bool a_on_1 = false;
                if (f)
                    for (const auto& x : f->preimages)
                        if (x.label && *x.label == p) a_on_1 = true;
                if (!a_on_1) {
                    const Fiber* g = c.vertex_data.at(pe.b).fiber_at(q + "~1");
                    bool b_on_1 = false;
                    if (g)
                        for (const auto& x : g->preimages)
                            if (x.label && *x.label == p) b_on_1 = true;
                    if (b_on_1) std::swap(end1, end2);
                }
            }

            const VertexId tid = p + "+T";
            const EdgeId pb1 = p + "+b1", pb2 = p + "+b2";
            se.erase(p);
            sv[tid] = 0;
            se[pb1] = Edge{end1, tid};
            se[pb2] = Edge{end2, tid};
            c.edge_map.erase(p);
            c.edge_index.erase(p);
            c.edge_map[pb1] = b1;
            c.edge_map[pb2] = b2;
            c.edge_index[pb1] = e;
            c.edge_index[pb2] = e;
            c.vertex_map[tid] = lid;

            BranchDatum bridge;
            bridge.degree = e;
            bridge.fibers.push_back(Fiber{b1, {{pb1, e}}});
            bridge.fibers.push_back(Fiber{b2, {{pb2, e}}});
            c.vertex_data[tid] = bridge;

            // Entry relabels in the old data: the q~1-side entry becomes
            // pb1, the other pb2.
            BranchDatum& d1 = c.vertex_data.at(end1);
            BranchDatum& d2 = c.vertex_data.at(end2);
            Fiber* f1 = find_fiber(d1, q + "~1");
            Fiber* f2 = find_fiber(d2, q + "~2");
            if (!f1 || !claim_and_relabel(*f1, pe.is_loop() ? lab1 : p, e, pb1))
                throw Error("internal", "missing fiber entry over " + q);
            if (!f2 || !claim_and_relabel(*f2, pe.is_loop() ? lab2 : p, e, pb2))
                throw Error("internal", "missing fiber entry over " + q);
        }

        c.target = DualGraph::make(tv, te, tl);
        c.source = DualGraph::make(sv, se, sl);
        rewrite_point(c, w, q + "~1", b1);
        rewrite_point(c, w, q + "~2", b2);
    }
    return c;
}

int source_genus(const GraphCover& c) { return c.source.arithmetic_genus(); }
int target_genus(const GraphCover& c) { return c.target.arithmetic_genus(); }

} // namespace admcover

// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "admcover/dual_graph.hpp"
#include "admcover/ellipticity.hpp"
#include "admcover/error.hpp"
#include "admcover/gluing.hpp"
#include "admcover/graph_cover.hpp"
#include "admcover/monodromy.hpp"
#include "test_util.hpp"

using namespace admcover;

namespace {

int g_checks = 0;
std::string g_detail;

bool expect(bool cond, const std::string& what) {
    ++g_checks;
    if (!cond && g_detail.empty()) g_detail = what;
    return cond;
}

// ---------------------------------------------------------------- criterion 1
bool rational_cycles_have_genus_one() {
    bool ok = true;
    for (int n = 1; n <= 6; ++n) {
        DualGraph g = testutil::cycle_graph(n);
        ok &= expect(g.arithmetic_genus() == 1,
                     "cycle of length " + std::to_string(n));
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 2
bool gluing_raises_target_genus() {
    std::mt19937 rng(7001);
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        GluingSpec spec = testutil::random_genus_raise_spec(rng);
        const int gt = target_genus(spec.cover);
        GraphCover out = glue_genus_raise(spec.cover, spec.pairs);
        ok &= expect(target_genus(out) == gt + 1,
                     "trial " + std::to_string(trial) + ": target genus");
        ok &= expect(validate(out, CoverMode::Pseudo).ok(CoverMode::Pseudo),
                     "trial " + std::to_string(trial) + ": pseudo validity");
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 3
bool pseudo_admissible_round_trip() {
    // Fixture suite: stabilized genus-raise gluings (their targets carry
    // internal nodes) plus loop-free admissible covers, > 50 in total.
    std::vector<GraphCover> suite;
    std::mt19937 rng(7003);
    while (suite.size() < 45) {
        GluingSpec spec = testutil::random_genus_raise_spec(rng);
        GraphCover adm = to_admissible(glue(spec)).cover;
        if (validate(adm, CoverMode::Admissible).ok(CoverMode::Admissible))
            suite.push_back(adm);
    }
    for (int d = 2; d <= 4; ++d)
        for (int h = 1; h <= 2; ++h)
            for (int extra = 0; extra <= 2; ++extra)
                try {
                    suite.push_back(testutil::two_point_cover(d, h, {d}, 2 * extra));
                } catch (const Error&) {
                }
    if (suite.size() < 50) {
        g_detail = "fixture suite too small";
        return false;
    }

    bool ok = true;
    for (size_t i = 0; i < suite.size(); ++i) {
        const GraphCover& c = suite[i];
        GraphCover rt = to_admissible(to_pseudo(c)).cover;
        const std::string tag = "cover " + std::to_string(i) + ": ";
        ok &= expect(rt.degree == c.degree, tag + "degree");
        ok &= expect(source_genus(rt) == source_genus(c), tag + "source genus");
        ok &= expect(target_genus(rt) == target_genus(c), tag + "target genus");
        bool equiv = isomorphic(rt.target, c.target);
        if (!equiv) {
            try {
                equiv = isomorphic(contract_unstable(rt.target, {}).target,
                                   contract_unstable(c.target, {}).target);
            } catch (const Error&) {
            }
        }
        ok &= expect(equiv, tag + "stable equivalence of targets");
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 4
// Exhaustive small covers: loopless connected targets with <= 3 vertices and
// arithmetic genus 1 or 2, d <= 3, no smooth branch points, source genera
// forced by Riemann-Hurwitz, total source+target vertices <= 8. Whenever the
// stabilized source is irreducible AND stable, the surviving component must
// map with the full degree.
struct TargetShape {
    std::map<VertexId, int> vs;
    std::map<EdgeId, Edge> es;
};

std::vector<TargetShape> small_targets() {
    std::vector<TargetShape> out;
    auto add = [&](std::map<VertexId, int> vs, std::map<EdgeId, Edge> es) {
        try {
            DualGraph g = DualGraph::make(vs, es, {});
            int genus = g.arithmetic_genus();
            if (genus == 1 || genus == 2) out.push_back({vs, es});
        } catch (const Error&) {
        }
    };

    for (int g1 = 0; g1 <= 2; ++g1) add({{"W1", g1}}, {});
    for (int g1 = 0; g1 <= 2; ++g1)
        for (int g2 = 0; g2 <= g1; ++g2)
            for (int m = 1; m <= 3; ++m) {
                std::map<EdgeId, Edge> es;
                for (int i = 0; i < m; ++i)
                    es["q" + std::to_string(i)] = Edge{"W1", "W2"};
                add({{"W1", g1}, {"W2", g2}}, es);
            }
    for (int g1 = 0; g1 <= 1; ++g1)
        for (int g2 = 0; g2 <= 1; ++g2)
            for (int g3 = 0; g3 <= 1; ++g3)
                for (int m12 = 0; m12 <= 2; ++m12)
                    for (int m23 = 0; m23 <= 2; ++m23)
                        for (int m13 = 0; m13 <= 1; ++m13) {
                            std::map<EdgeId, Edge> es;
                            int k = 0;
                            for (int i = 0; i < m12; ++i)
                                es["q" + std::to_string(k++)] = Edge{"W1", "W2"};
                            for (int i = 0; i < m23; ++i)
                                es["q" + std::to_string(k++)] = Edge{"W2", "W3"};
                            for (int i = 0; i < m13; ++i)
                                es["q" + std::to_string(k++)] = Edge{"W1", "W3"};
                            add({{"W1", g1}, {"W2", g2}, {"W3", g3}}, es);
                        }
    return out;
}

// One source edge configuration over one target edge: per source vertex on
// each side, a composition of its degree into ramification indices, matched
// into edges across the two sides.
struct EdgeLift {
    // (left vertex, right vertex, index) triples.
    std::vector<std::tuple<VertexId, VertexId, int>> edges;
};

void match_halves(std::vector<std::pair<VertexId, int>>& left,
                  std::vector<std::pair<VertexId, int>>& right,
                  EdgeLift& cur, std::vector<EdgeLift>& out, size_t cap) {
    if (out.size() >= cap) return;
    if (left.empty()) {
        out.push_back(cur);
        return;
    }
    auto [lv, le] = left.back();
    left.pop_back();
    for (size_t i = 0; i < right.size(); ++i) {
        if (right[i].second != le) continue;
        auto rv = right[i].first;
        std::pair<VertexId, int> saved = right[i];
        right.erase(right.begin() + static_cast<long>(i));
        cur.edges.emplace_back(lv, rv, le);
        match_halves(left, right, cur, out, cap);
        cur.edges.pop_back();
        right.insert(right.begin() + static_cast<long>(i), saved);
    }
    left.emplace_back(lv, le);
}

// All half-end lists for one side: every source vertex over w contributes a
// composition of its degree.
void side_options_rec(const std::vector<std::pair<VertexId, int>>& pieces,
                      size_t i, std::vector<std::pair<VertexId, int>>& cur,
                      std::vector<std::vector<std::pair<VertexId, int>>>& out) {
    if (i == pieces.size()) {
        out.push_back(cur);
        return;
    }
    const auto& [v, deg] = pieces[i];
    std::function<void(int, int)> comp = [&](int rest, int maxp) {
        if (rest == 0) {
            side_options_rec(pieces, i + 1, cur, out);
            return;
        }
        for (int e = std::min(rest, maxp); e >= 1; --e) {
            cur.emplace_back(v, e);
            comp(rest - e, e); // nonincreasing per vertex kills permutations
            cur.pop_back();
        }
    };
    comp(deg, deg);
}

bool degree_of_restriction_invariant() {
    bool ok = true;
    int instances = 0, applicable = 0;

    for (const TargetShape& shape : small_targets()) {
        DualGraph target = DualGraph::make(shape.vs, shape.es, {});
        for (int d = 2; d <= 3; ++d) {
            // Partition the degree over every target vertex.
            std::vector<VertexId> ws;
            for (const auto& [w, g] : shape.vs) ws.push_back(w);
            std::vector<std::vector<std::vector<int>>> vparts;
            for (size_t i = 0; i < ws.size(); ++i) {
                std::vector<std::vector<int>> ps;
                std::function<void(int, int, std::vector<int>&)> rec =
                    [&](int rest, int maxp, std::vector<int>& cur) {
                        if (rest == 0) {
                            ps.push_back(cur);
                            return;
                        }
                        for (int p = std::min(rest, maxp); p >= 1; --p) {
                            cur.push_back(p);
                            rec(rest - p, p, cur);
                            cur.pop_back();
                        }
                    };
                std::vector<int> cur;
                rec(d, d, cur);
                vparts.push_back(ps);
            }

            std::vector<size_t> pick(ws.size(), 0);
            for (;;) {
                // Source vertices with degrees.
                std::map<VertexId, int> piece_degree;
                std::map<VertexId, VertexId> piece_image;
                for (size_t i = 0; i < ws.size(); ++i)
                    for (size_t j = 0; j < vparts[i][pick[i]].size(); ++j) {
                        VertexId v = ws[i] + "#" + std::to_string(j);
                        piece_degree[v] = vparts[i][pick[i]][j];
                        piece_image[v] = ws[i];
                    }

                // Per target edge, enumerate lifts.
                std::vector<EdgeId> qs;
                for (const auto& [q, e] : shape.es) qs.push_back(q);
                std::vector<std::vector<EdgeLift>> lifts;
                bool feasible = true;
                for (const auto& q : qs) {
                    const Edge& qe = shape.es.at(q);
                    std::vector<std::pair<VertexId, int>> lpieces, rpieces;
                    for (const auto& [v, deg] : piece_degree) {
                        if (piece_image.at(v) == qe.a) lpieces.emplace_back(v, deg);
                        if (piece_image.at(v) == qe.b) rpieces.emplace_back(v, deg);
                    }
                    std::vector<std::vector<std::pair<VertexId, int>>> lopts, ropts;
                    std::vector<std::pair<VertexId, int>> tmp;
                    side_options_rec(lpieces, 0, tmp, lopts);
                    side_options_rec(rpieces, 0, tmp, ropts);
                    std::vector<EdgeLift> here;
                    std::set<std::string> seen;
                    for (auto& lo : lopts)
                        for (auto& ro : ropts) {
                            if (lo.size() != ro.size()) continue;
                            auto l = lo, r = ro;
                            EdgeLift cur;
                            std::vector<EdgeLift> matched;
                            match_halves(l, r, cur, matched, 64);
                            for (auto& m : matched) {
                                auto key_edges = m.edges;
                                std::sort(key_edges.begin(), key_edges.end());
                                std::ostringstream key;
                                for (auto& [a, b, e] : key_edges)
                                    key << a << '|' << b << '|' << e << ';';
                                if (seen.insert(key.str()).second)
                                    here.push_back(m);
                            }
                        }
                    if (here.empty()) feasible = false;
                    lifts.push_back(std::move(here));
                }

                if (feasible) {
                    std::vector<size_t> epic(qs.size(), 0);
                    for (;;) {
                        // Assemble and validate the cover.
                        GraphCover c;
                        c.degree = d;
                        c.target = target;
                        std::map<VertexId, int> sv;
                        std::map<EdgeId, Edge> se;
                        std::map<VertexId, int> ram; // per source vertex
                        std::map<VertexId, std::vector<std::pair<EdgeId, int>>>
                            fibers_at; // unused marker
                        std::map<VertexId, std::map<PointLabel,
                                                    std::vector<std::pair<std::string, int>>>>
                            entry;
                        int eid = 0;
                        for (size_t i = 0; i < qs.size(); ++i) {
                            const EdgeLift& L = lifts[i][epic[i]];
                            for (const auto& [a, b, e] : L.edges) {
                                EdgeId p = "p" + std::to_string(eid++);
                                se[p] = Edge{a, b};
                                c.edge_map[p] = qs[i];
                                c.edge_index[p] = e;
                                ram[a] += e - 1;
                                ram[b] += e - 1;
                                entry[a][qs[i]].emplace_back(p, e);
                                entry[b][qs[i]].emplace_back(p, e);
                            }
                        }
                        bool good = true;
                        for (const auto& [v, deg] : piece_degree) {
                            const int gw = shape.vs.at(piece_image.at(v));
                            const int rhs = deg * (2 * gw - 2) + ram[v] + 2;
                            if (rhs < 0 || rhs % 2 != 0) {
                                good = false;
                                break;
                            }
                            sv[v] = rhs / 2;
                        }
                        if (good &&
                            sv.size() + shape.vs.size() <= 8) {
                            try {
                                c.source = DualGraph::make(sv, se, {});
                            } catch (const Error&) {
                                good = false; // disconnected source
                            }
                            if (good) {
                                for (const auto& [v, deg] : piece_degree) {
                                    BranchDatum b;
                                    b.degree = deg;
                                    b.source_genus = sv.at(v);
                                    b.target_genus =
                                        shape.vs.at(piece_image.at(v));
                                    for (const auto& [q, es] : entry[v]) {
                                        Fiber f{q, {}};
                                        for (const auto& [p, e] : es)
                                            f.preimages.push_back({p, e});
                                        b.fibers.push_back(f);
                                    }
                                    c.vertex_data[v] = b;
                                    c.vertex_map[v] = piece_image.at(v);
                                }
                                if (validate(c, CoverMode::Pseudo)
                                        .ok(CoverMode::Pseudo)) {
                                    ++instances;
                                    try {
                                        Contraction k =
                                            contract_unstable(c.source, {});
                                        if (k.target.vertices().size() == 1 &&
                                            k.target.is_stable()) {
                                            ++applicable;
                                            const VertexId survivor =
                                                k.target.vertices().begin()->first;
                                            ok &= expect(
                                                c.vertex_data.at(survivor)
                                                        .degree == d,
                                                "restriction degree at " +
                                                    survivor);
                                        }
                                    } catch (const Error&) {
                                        // fully contracted: not applicable
                                    }
                                }
                            }
                        }

                        size_t pos = 0;
                        for (; pos < qs.size(); ++pos) {
                            if (++epic[pos] < lifts[pos].size()) break;
                            epic[pos] = 0;
                        }
                        if (pos == qs.size() || qs.empty()) break;
                    }
                }

                size_t pos = 0;
                for (; pos < ws.size(); ++pos) {
                    if (++pick[pos] < vparts[pos].size()) break;
                    pick[pos] = 0;
                }
                if (pos == ws.size()) break;
            }
        }
    }

    ok &= expect(instances > 200, "enumeration reached enough covers");
    ok &= expect(applicable > 20, "enough irreducible stable stabilizations");
    return ok;
}

// ---------------------------------------------------------------- criterion 5
bool one_node_routes() {
    IrreducibleCurveData c;
    c.normalization_genus = 2;
    c.nodes.push_back({"n1", "x", "y"});
    bool ok = true;

    Verdict both = decide_one_node(c, 2, 1, RouteFilter::Both);
    ok &= expect(both.decision == Decision::CertifiedYes, "route search");
    if (both.certificate)
        ok &= expect(verify_certificate(c, 2, 1, *both.certificate).ok,
                     "route search certificate");

    Verdict a = decide_one_node(c, 2, 1, RouteFilter::SameFiberOnly);
    ok &= expect(a.decision == Decision::CertifiedYes, "route (a)");
    if (a.certificate) {
        const EllipticityCertificate& cert = *a.certificate;
        ok &= expect(cert.cover.target_genus == 1, "route (a) target genus");
        ok &= expect(cert.delta0 == 1, "route (a) same-fiber block");
        ok &= expect(cert.cover.fiber_with_label("x") ==
                         cert.cover.fiber_with_label("y"),
                     "route (a) branches share a fiber");
        ok &= expect(verify_certificate(c, 2, 1, cert).ok,
                     "route (a) certificate");
    }

    Verdict b = decide_one_node(c, 2, 1, RouteFilter::TotalRamificationOnly);
    ok &= expect(b.decision == Decision::CertifiedYes, "route (b)");
    if (b.certificate) {
        const EllipticityCertificate& cert = *b.certificate;
        ok &= expect(cert.cover.target_genus == 0, "route (b) target genus");
        auto tot = totally_ramified_labels(cert.cover);
        ok &= expect(tot.count("x") == 1 && tot.count("y") == 1,
                     "route (b) total ramification");
        ok &= expect(cert.cover.fiber_with_label("x") !=
                         cert.cover.fiber_with_label("y"),
                     "route (b) branches over distinct points");
        ok &= expect(verify_certificate(c, 2, 1, cert).ok,
                     "route (b) certificate");
    }
    return ok;
}

// ---------------------------------------------------------------- criterion 6
bool classification_xor() {
    bool ok = true;
    for (int g = 2; g <= 6; ++g)
        for (BranchRelation rel :
             {BranchRelation::ConjugatePair, BranchRelation::TwoWeierstrass,
              BranchRelation::WeierstrassAndGeneric,
              BranchRelation::GenericPair}) {
            HyperellipticClass cls = classify_hyperelliptic_one_node(g, rel);
            const bool hyper = cls == HyperellipticClass::Hyperelliptic;
            const bool biell = cls == HyperellipticClass::Bielliptic;
            ok &= expect(!(hyper && biell), "never both");
            if (rel == BranchRelation::ConjugatePair)
                ok &= expect(hyper, "conjugate pair is hyperelliptic");
            if (rel == BranchRelation::TwoWeierstrass)
                ok &= expect(biell, "two Weierstrass points give bielliptic");
        }
    return ok;
}

// ---------------------------------------------------------------- criterion 7
bool oracle_soundness() {
    bool ok = true;

    // The classical exceptional datum.
    BranchDatum exceptional;
    exceptional.degree = 4;
    exceptional.source_genus = 0;
    exceptional.target_genus = 0;
    for (const auto& [name, type] :
         std::vector<std::pair<std::string, std::vector<int>>>{
             {"q1", {2, 2}}, {"q2", {2, 2}}, {"q3", {3, 1}}}) {
        Fiber f{name, {}};
        for (int e : type) f.preimages.push_back({std::nullopt, e});
        exceptional.fibers.push_back(f);
    }
    ok &= expect(validate_rh(exceptional).ok, "exceptional datum satisfies RH");
    ok &= expect(!is_realizable(exceptional).has_value(),
                 "exceptional datum is rejected");

    // Degree-2 parity law, every answer verified independently.
    for (int b = 1; b <= 8; ++b) {
        std::vector<std::vector<int>> types(b, std::vector<int>{2});
        auto w = find_monodromy(2, 0, types);
        ok &= expect(w.has_value() == (b % 2 == 0),
                     "parity at b=" + std::to_string(b));
        if (w) ok &= expect(verify_witness(*w, 0, types), "witness b parity");
    }

    // A sweep of small data; every positive answer passes the verifier.
    for (int d = 2; d <= 4; ++d)
        for (int h = 0; h <= 1; ++h)
            for (const auto& types : std::vector<std::vector<std::vector<int>>>{
                     {},
                     {{2}, {2}},
                     {{d}, {d}},
                     {{2}, {2}, {2}, {2}},
                     {{2, 1}, {2, 1}},
                     {{3, 1}, {2, 2}, {2}}}) {
                std::vector<std::vector<int>> ts;
                bool fits = true;
                for (const auto& t : types) {
                    int sum = 0;
                    for (int x : t) sum += x;
                    if (sum > d) fits = false;
                    for (int x : t)
                        if (x > d) fits = false;
                    ts.push_back(t);
                }
                if (!fits) continue;
                auto w = find_monodromy(d, h, ts);
                if (w)
                    ok &= expect(verify_witness(*w, h, ts),
                                 "sweep witness d=" + std::to_string(d));
            }
    return ok;
}

// ---------------------------------------------------------------- criterion 8
bool decide_fuzz() {
    std::mt19937 rng(7008);
    bool ok = true;
    int certified = 0, refuted = 0, skipped = 0;
    for (int run = 0; run < 1000; ++run) {
        IrreducibleCurveData c;
        c.normalization_genus = std::uniform_int_distribution<int>(0, 3)(rng);
        int delta = std::uniform_int_distribution<int>(1, 3)(rng);
        if (2 * c.normalization_genus - 2 + 2 * delta <= 0) delta = 2;
        for (int i = 1; i <= delta; ++i)
            c.nodes.push_back({"n" + std::to_string(i), "x" + std::to_string(i),
                               "y" + std::to_string(i)});
        const int d = std::uniform_int_distribution<int>(2, 3)(rng);
        const int h = std::uniform_int_distribution<int>(1, 2)(rng);

        Verdict v;
        try {
            v = decide(c, d, h);
        } catch (const Error& e) {
            ok &= expect(e.code() == "search_bound_exceeded",
                         "run " + std::to_string(run) + ": unexpected error");
            ++skipped;
            continue;
        }
        if (v.decision == Decision::CertifiedYes) {
            ++certified;
            ok &= expect(v.certificate.has_value(),
                         "run " + std::to_string(run) + ": missing certificate");
            if (v.certificate)
                ok &= expect(verify_certificate(c, d, h, *v.certificate).ok,
                             "run " + std::to_string(run) + ": verification");
        } else {
            ++refuted;
            std::set<int> hps;
            for (const auto& r : v.refutations) hps.insert(r.h_prime);
            std::set<int> want;
            for (int hp = 0; hp <= h; ++hp) want.insert(hp);
            ok &= expect(hps == want,
                         "run " + std::to_string(run) + ": refutation coverage");
        }
    }
    ok &= expect(certified > 0 && refuted > 0, "fuzz saw both outcomes");
    (void)skipped;
    return ok;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool()> run;
    };
    const std::vector<Criterion> criteria = {
        {"1 genus bookkeeping: rational cycles have genus 1",
         rational_cycles_have_genus_one},
        {"2 gluing genus law on 200 random specs", gluing_raises_target_genus},
        {"3 pseudo/admissible round trip on the fixture suite",
         pseudo_admissible_round_trip},
        {"4 degree-of-restriction invariant (exhaustive small covers)",
         degree_of_restriction_invariant},
        {"5 one-node routes with re-verified certificates", one_node_routes},
        {"6 hyperelliptic/bielliptic classification XOR", classification_xor},
        {"7 monodromy oracle soundness", oracle_soundness},
        {"8 certificate self-consistency fuzz (1000 runs)", decide_fuzz},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        g_checks = 0;
        g_detail.clear();
        bool pass = false;
        std::string error;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            pass = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        if (pass) {
            std::printf("PASS  criterion %s  (%d checks, %lld ms)\n", c.name,
                        g_checks, static_cast<long long>(ms));
        } else {
            ++failures;
            std::printf("FAIL  criterion %s  (%s)\n", c.name,
                        !error.empty() ? error.c_str()
                        : !g_detail.empty() ? g_detail.c_str()
                                            : "check failed");
        }
    }
    return failures == 0 ? 0 : 1;
}

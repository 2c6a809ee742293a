#ifndef ADMCOVER_TEST_UTIL_HPP
#define ADMCOVER_TEST_UTIL_HPP

#include <random>
#include <string>
#include <vector>

#include "admcover/dual_graph.hpp"
#include "admcover/gluing.hpp"
#include "admcover/graph_cover.hpp"

namespace testutil {

using namespace admcover;

// Rational cycle of n components; n = 1 is a single vertex with a loop.
inline DualGraph cycle_graph(int n) {
    std::map<VertexId, int> vs;
    std::map<EdgeId, Edge> es;
    if (n == 1) {
        vs["v0"] = 0;
        es["e0"] = Edge{"v0", "v0"};
    } else {
        for (int i = 0; i < n; ++i) vs["v" + std::to_string(i)] = 0;
        for (int i = 0; i < n; ++i)
            es["e" + std::to_string(i)] =
                Edge{"v" + std::to_string(i), "v" + std::to_string((i + 1) % n)};
    }
    return DualGraph::make(vs, es, {});
}

inline DualGraph one_vertex(int genus, int loops = 0, int legs = 0) {
    std::map<VertexId, int> vs{{"v", genus}};
    std::map<EdgeId, Edge> es;
    for (int i = 0; i < loops; ++i) es["n" + std::to_string(i)] = Edge{"v", "v"};
    std::map<LegId, VertexId> ls;
    for (int i = 0; i < legs; ++i) ls["l" + std::to_string(i)] = "v";
    return DualGraph::make(vs, es, ls);
}

// Cover of one smooth target vertex (genus h) by one smooth source vertex,
// with two fully labelled fibers at points "q1" and "q2" of indices e[i]
// (labels "a<i>" and "b<i>") plus `extra_simple` unlabeled simple branch
// fibers. Source genus comes from Riemann-Hurwitz.
inline GraphCover two_point_cover(int d, int h, const std::vector<int>& e,
                                  int extra_simple) {
    int r = 0;
    for (int x : e) r += 2 * (x - 1);
    r += extra_simple;
    const int g2 = 2 + d * (2 * h - 2) + r;
    if (g2 < 0 || g2 % 2 != 0) throw Error("bad_fixture", "RH gives no genus");

    BranchDatum datum;
    datum.degree = d;
    datum.source_genus = g2 / 2;
    datum.target_genus = h;
    Fiber f1{"q1", {}}, f2{"q2", {}};
    for (size_t i = 0; i < e.size(); ++i) {
        f1.preimages.push_back({"a" + std::to_string(i), e[i]});
        f2.preimages.push_back({"b" + std::to_string(i), e[i]});
    }
    datum.fibers.push_back(f1);
    datum.fibers.push_back(f2);
    for (int i = 0; i < extra_simple; ++i) {
        Fiber f{"s" + std::to_string(i), {}};
        f.preimages.push_back({std::nullopt, 2});
        for (int u = 0; u < d - 2; ++u) f.preimages.push_back({std::nullopt, 1});
        datum.fibers.push_back(f);
    }

    GraphCover c;
    c.source = one_vertex(datum.source_genus);
    std::map<VertexId, int> tv{{"W", h}};
    c.target = DualGraph::make(tv, {}, {});
    c.degree = d;
    c.vertex_map["v"] = "W";
    c.vertex_data["v"] = datum;
    return c;
}

// Composition of d into delta positive parts, drawn uniformly-ish.
inline std::vector<int> random_composition(std::mt19937& rng, int d, int delta) {
    std::vector<int> e(delta, 1);
    int rest = d - delta;
    while (rest > 0) {
        e[std::uniform_int_distribution<int>(0, delta - 1)(rng)] += 1;
        --rest;
    }
    return e;
}

// A random valid genus-raise gluing spec: d <= 4, delta <= 3.
inline GluingSpec random_genus_raise_spec(std::mt19937& rng) {
    const int d = std::uniform_int_distribution<int>(2, 4)(rng);
    const int delta = std::uniform_int_distribution<int>(1, std::min(3, d))(rng);
    const int h = std::uniform_int_distribution<int>(0, 2)(rng);
    std::vector<int> e = random_composition(rng, d, delta);

    // Make the RH genus nonnegative with paired extra simple points.
    int r = 0;
    for (int x : e) r += 2 * (x - 1);
    int g2 = 2 + d * (2 * h - 2) + r;
    int extra = 0;
    while (g2 < 0) {
        g2 += 2;
        extra += 2;
    }
    GluingSpec s;
    s.cover = two_point_cover(d, h, e, extra);
    s.mode = GlueMode::GenusRaise;
    for (int i = 0; i < delta; ++i)
        s.pairs.push_back({"a" + std::to_string(i), "b" + std::to_string(i)});
    return s;
}

} // namespace testutil

#endif

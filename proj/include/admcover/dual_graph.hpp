#ifndef ADMCOVER_DUAL_GRAPH_HPP
#define ADMCOVER_DUAL_GRAPH_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "admcover/error.hpp"

namespace admcover {

using VertexId = std::string;
using EdgeId = std::string;
using LegId = std::string;

struct Edge {
    VertexId a;
    VertexId b;

    bool is_loop() const { return a == b; }
    bool operator==(const Edge& o) const { return a == o.a && b == o.b; }
};

// Genus-decorated multigraph with legs. Vertices carry the geometric genus of
// the component they stand for, edges are nodes (equal endpoints = a node with
// both branches on one component), legs are distinguished smooth points.
//
// Connectedness and referential integrity are enforced at construction; a
// DualGraph value is immutable afterwards.
class DualGraph {
public:
    // Empty placeholder; every meaningful value comes from make().
    DualGraph() = default;

    static DualGraph make(std::map<VertexId, int> vertices,
                          std::map<EdgeId, Edge> edges,
                          std::map<LegId, VertexId> legs);

    const std::map<VertexId, int>& vertices() const { return vertices_; }
    const std::map<EdgeId, Edge>& edges() const { return edges_; }
    const std::map<LegId, VertexId>& legs() const { return legs_; }

    bool has_vertex(const VertexId& v) const { return vertices_.count(v) != 0; }
    bool has_edge(const EdgeId& e) const { return edges_.count(e) != 0; }
    int genus_of(const VertexId& v) const;
    const Edge& edge(const EdgeId& e) const;

    // Edges incident to v, loops counted twice.
    int valence(const VertexId& v) const;
    int legs_at(const VertexId& v) const;
    std::vector<EdgeId> incident_edges(const VertexId& v) const;
    std::vector<LegId> legs_of(const VertexId& v) const;

    int arithmetic_genus() const;
    bool is_stable() const;

private:
    std::map<VertexId, int> vertices_;
    std::map<EdgeId, Edge> edges_;
    std::map<LegId, VertexId> legs_;
};

// Where a contracted vertex ended up: absorbed into a surviving vertex
// (collapsed leaf) or onto a merged edge (collapsed chain link).
struct CollapseTarget {
    enum class Kind { ToVertex, ToEdge };
    Kind kind = Kind::ToVertex;
    std::string id;
};

struct Contraction {
    DualGraph source;
    DualGraph target;
    // Surviving source vertices keep their ids; this maps them to the target.
    std::map<VertexId, VertexId> vertex_image;
    std::map<VertexId, CollapseTarget> collapsed;
    // Partial: surviving source edges onto target edges (merged chains share
    // one image edge).
    std::map<EdgeId, EdgeId> edge_map;

    bool is_identity() const { return collapsed.empty(); }
};

// Maximal stable-equivalence contraction: repeatedly removes genus-0 vertices
// with valence+legs <= 2 that carry no loop and are not protected, rewiring
// edges. Lowest vertex id goes first; the outcome is order-independent.
// Throws Error("empty_result") if the whole graph would disappear.
Contraction contract_unstable(const DualGraph& g,
                              const std::set<VertexId>& protected_vertices = {});

struct Normalization {
    DualGraph graph;
    // For each cut edge, the two legs standing for its branches.
    std::map<EdgeId, std::pair<LegId, LegId>> branch_legs;
};

// Cuts the listed edges, turning each half-end into a fresh leg (ids
// "<edge>^1" and "<edge>^2"). Throws Error("disconnects") if some cut edge
// separates the graph.
Normalization normalize_at(const DualGraph& g, const std::set<EdgeId>& at);

// Inverse of normalize_at for a single pair of legs: removes them and joins
// their attachment vertices by a fresh edge.
DualGraph reglue(const DualGraph& g, const LegId& l1, const LegId& l2,
                 const EdgeId& new_edge);

struct Cycle {
    // vertices[i] -- edges[i] -- vertices[i+1 mod k]; loops give k = 1.
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
};

// All simple cycles, each listed once (loops count as length-1 cycles,
// parallel edge pairs as length-2 cycles).
std::vector<Cycle> find_cycles(const DualGraph& g);

// Canonical-labeling backtracking; fine for the tiny graphs in play. Legs are
// compared by count per vertex, not by id.
bool isomorphic(const DualGraph& a, const DualGraph& b);

} // namespace admcover

#endif

#ifndef ADMCOVER_GRAPH_COVER_HPP
#define ADMCOVER_GRAPH_COVER_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "admcover/branch_datum.hpp"
#include "admcover/dual_graph.hpp"

namespace admcover {

// Point label conventions tying graphs to branch data:
//   - the half-ends of a non-loop edge "q" are both labelled "q" (each lives
//     on its own vertex, so there is no clash);
//   - the half-ends of a loop edge "q" are "q~1" and "q~2";
//   - everything else is a smooth point label (legs use their leg id).
// Fibers in vertex_data are keyed by target point labels; preimage labels are
// source half-end labels (same rule) or source leg ids.
std::string half_label(const DualGraph& g, const EdgeId& e, int side); // side 1 or 2
bool is_edge_point(const DualGraph& g, const VertexId& at, const PointLabel& p);

// Morphism of dual graphs with local branch data: the combinatorial shadow of
// a (pseudo-)admissible cover. Every source edge carries a single ramification
// index, used on both of its half-ends.
struct GraphCover {
    DualGraph source;
    DualGraph target;
    int degree = 1;
    std::map<VertexId, VertexId> vertex_map;
    std::map<VertexId, BranchDatum> vertex_data; // per source vertex
    std::map<EdgeId, EdgeId> edge_map;
    std::map<EdgeId, int> edge_index;
    std::map<LegId, PointLabel> leg_map; // source legs -> target point labels
};

enum class CoverMode { Admissible, Pseudo };

struct ConditionResult {
    bool pass = true;
    std::vector<std::string> witnesses; // offending element ids

    void fail(const std::string& id) {
        pass = false;
        witnesses.push_back(id);
    }
};

struct AdmissibilityReport {
    ConditionResult c1;                  // nodes over nodes, exactly
    ConditionResult c2;                  // simple branching at smooth points
    ConditionResult c3_stable_target;    // target stable with branch points marked
    ConditionResult c3prime_no_internal; // target has no loop edges
    ConditionResult c4;                  // one index per node, both branches
    ConditionResult degree_consistency;
    ConditionResult rh_consistency;

    bool ok(CoverMode mode) const;
};

AdmissibilityReport validate(const GraphCover& c, CoverMode mode);

// Smooth target points with a ramified preimage, grouped per target vertex.
std::map<VertexId, std::set<PointLabel>> smooth_branch_points(const GraphCover& c);

// Resolves non-simple branching over smooth target points by sprouting a
// rational tail on the target and, over it, one rational piece per preimage
// (degree e, totally ramified at the new node, e-1 simple branch points).
// Requires conditions 1, 3', 4 and degree/RH consistency; throws
// Error("not_completable") otherwise.
GraphCover complete_cover(const GraphCover& c);

struct CoverContraction {
    GraphCover cover;
    Contraction source_contraction;
    Contraction target_contraction;
};

// Contracts every genus-0 target vertex with at most two special points
// (nodes, smooth branch points, marked points) together with the source
// vertices over it. Pseudo-valid input yields admissible-valid output.
CoverContraction to_admissible(const GraphCover& c);

// Replaces each internal node of the target by a rational bridge: normalize
// there and re-glue through a genus-raising bridge. Admissible-valid input
// yields pseudo-valid output with the same degree and genera.
GraphCover to_pseudo(const GraphCover& c);

// Source genus as recorded by the dual graph (sanity accessor used in tests).
int source_genus(const GraphCover& c);
int target_genus(const GraphCover& c);

} // namespace admcover

#endif

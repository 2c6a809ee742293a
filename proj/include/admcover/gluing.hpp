#ifndef ADMCOVER_GLUING_HPP
#define ADMCOVER_GLUING_HPP

#include <string>
#include <vector>

#include "admcover/graph_cover.hpp"

namespace admcover {

enum class GlueMode { GenusRaise, EqualImages };

// A pair of distinguished smooth source points to be glued into a node. Each
// is named by the fiber label carrying it (a leg id or any labelled smooth
// preimage).
struct GluePair {
    PointLabel p1;
    PointLabel p2;
};

struct GluingSpec {
    GraphCover cover;
    GlueMode mode = GlueMode::GenusRaise;
    std::vector<GluePair> pairs;
    // Genus-raise mode may pin the two target points; when set they are
    // cross-checked against the actual images of the pair members.
    std::optional<PointLabel> q1;
    std::optional<PointLabel> q2;
};

// Both constructions keep the cover pseudo-valid and raise the source genus
// by the number of glued pairs. GenusRaise also raises the target genus by
// one; EqualImages leaves it unchanged.
//
// GenusRaise glues pairs whose members lie over two distinct target points q1
// and q2 (the same two for every pair). The target gains a bridge between the
// two carrying vertices; over it, one rational piece per pair, of degree
// equal to the common ramification index, totally ramified at both new nodes.
// Every point over q1 or q2 must belong to some pair and indices must match
// within a pair. Errors: "images_differ" (pair members over unequal point
// sets), "index_mismatch", "fiber_not_full", "points_equal" (q1 == q2).
//
// EqualImages glues one pair whose members map to the same target point t.
// The target sprouts a rational tail at t; over it, one rational piece of
// degree e1+e2 carrying the glued node pair (indices e1 and e2, plus e1+e2
// simple branch points), and a degree-e tail with e-1 simple branch points
// for every other preimage of t. Errors: "images_differ", "non_nodal" (a
// glued point is already a node or the two labels coincide).
GraphCover glue(const GluingSpec& spec);

GraphCover glue_genus_raise(const GraphCover& c, const std::vector<GluePair>& pairs);
GraphCover glue_equal_images(const GraphCover& c, const GluePair& pair);

} // namespace admcover

#endif

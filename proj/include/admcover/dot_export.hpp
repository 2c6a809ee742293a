#ifndef ADMCOVER_DOT_EXPORT_HPP
#define ADMCOVER_DOT_EXPORT_HPP

#include <string>

#include "admcover/graph_cover.hpp"

namespace admcover {

// Graphviz rendering: vertices labelled "id:g=<genus>", legs as arrowless
// stubs. For covers, source and target sit in colored clusters and source
// edges carry their ramification index.
std::string to_dot(const DualGraph& g, const std::string& name = "curve");
std::string to_dot(const GraphCover& c);

} // namespace admcover

#endif

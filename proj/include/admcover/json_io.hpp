#ifndef ADMCOVER_JSON_IO_HPP
#define ADMCOVER_JSON_IO_HPP

#include <string>

#include <json.hpp>

#include "admcover/ellipticity.hpp"
#include "admcover/gluing.hpp"
#include "admcover/graph_cover.hpp"

namespace admcover {

using json = nlohmann::json;

// Reads and parses a file; malformed JSON throws Error("parse_error") with a
// line:column diagnostic, a missing file Error("io_error").
json parse_file(const std::string& path);

// Structural errors in all from_json readers throw Error("bad_input").
json to_json(const DualGraph& g);
DualGraph graph_from_json(const json& j);

json to_json(const BranchDatum& b);
BranchDatum datum_from_json(const json& j);

json to_json(const GraphCover& c);
GraphCover cover_from_json(const json& j);

json to_json(const GluingSpec& s);
GluingSpec gluing_from_json(const json& j);

json to_json(const IrreducibleCurveData& c);
// Accepts the native form or a one-vertex DualGraph whose loops are the
// nodes (branch labels then default to "<edge>~1"/"<edge>~2").
IrreducibleCurveData curve_data_from_json(const json& j);

json to_json(const MonodromyWitness& w);
MonodromyWitness witness_from_json(const json& j);

json to_json(const EllipticityCertificate& c);
EllipticityCertificate certificate_from_json(const json& j);

json to_json(const Verdict& v);
json to_json(const AdmissibilityReport& r);
json to_json(const VerifyReport& r);
json to_json(const Contraction& c);

} // namespace admcover

#endif

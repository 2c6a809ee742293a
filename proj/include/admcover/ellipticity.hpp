#ifndef ADMCOVER_ELLIPTICITY_HPP
#define ADMCOVER_ELLIPTICITY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admcover/branch_datum.hpp"
#include "admcover/monodromy.hpp"

namespace admcover {

// An irreducible stable curve: normalization genus plus the nodes, each with
// its two branch labels. Dual graph: one vertex, one loop per node.
struct CurveNode {
    std::string id;
    PointLabel b1;
    PointLabel b2;
};

struct IrreducibleCurveData {
    int normalization_genus = 0;
    std::vector<CurveNode> nodes;
};

// Throws Error("bad_curve") for duplicate ids/labels, negative genus, or
// instability (needs 2*g_n - 2 + 2*delta > 0).
void validate_curve_data(const IrreducibleCurveData& c);

// Witness that a curve is (d,h)-elliptic: a realizable degree-d cover of the
// normalization onto a smooth genus-h' curve (h' = cover.target_genus,
// s = h - h') whose fibers place the node branches so that
//   (a) each of the first delta0 nodes has both branches in one fiber,
//   (b) the fiber over q^1_k is exactly the first branches of group k and the
//       fiber over q^2_k exactly the second branches,
//   (c) grouped nodes carry equal indices on both branches,
// with the 2s points q^j_k pairwise distinct.
struct EllipticityCertificate {
    BranchDatum cover;
    int delta0 = 0;
    std::vector<std::vector<std::string>> groups;              // node ids, s entries
    std::vector<std::pair<PointLabel, PointLabel>> point_pairs; // s entries
    MonodromyWitness witness;
};

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> problems;
};

VerifyReport verify_certificate(const IrreducibleCurveData& c, int d, int h,
                                const EllipticityCertificate& cert);

enum class Decision { CertifiedYes, NoCertificateFound };

struct Refutation {
    int h_prime = 0;
    std::string tag; // one of {a, b, c, s, rh, monodromy}
    std::string detail;
};

struct Verdict {
    Decision decision = Decision::NoCertificateFound;
    std::optional<EllipticityCertificate> certificate;
    std::vector<Refutation> refutations;
};

// Searches for a certificate over discrete Hurwitz data: h' increasing from 0
// to h, then delta0 increasing, then canonical node partitions and index
// assignments; RH-forced extra simple branch points are added in the minimal
// number. Decides existence over the stratum with these invariants, not for
// one specific analytic curve. Throws Error("search_bound_exceeded") when a
// verdict would depend on candidates beyond the oracle limits.
Verdict decide(const IrreducibleCurveData& c, int d, int h,
               const OracleLimits& limits = {});

// decide restricted to one node: route (a) takes h' = h with both branches in
// one fiber, route (b) takes h' = h-1 with the node totally ramified over two
// distinct points. The filter narrows the search for callers that must avoid
// one route.
enum class RouteFilter { Both, SameFiberOnly, TotalRamificationOnly };

Verdict decide_one_node(const IrreducibleCurveData& c, int d, int h,
                        RouteFilter filter = RouteFilter::Both,
                        const OracleLimits& limits = {});

// One-node curve whose normalization is hyperelliptic of genus >= 2 (so the
// degree-2 map is unique); classifies by where the two branches sit relative
// to that map. Throws Error("ambiguous_hyperelliptic_structure") for g_n < 2.
enum class BranchRelation {
    ConjugatePair,
    TwoWeierstrass,
    WeierstrassAndGeneric,
    GenericPair
};

enum class HyperellipticClass { Hyperelliptic, Bielliptic, Neither };

HyperellipticClass classify_hyperelliptic_one_node(int g_n, BranchRelation rel);

} // namespace admcover

#endif

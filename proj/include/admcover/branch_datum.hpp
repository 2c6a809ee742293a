#ifndef ADMCOVER_BRANCH_DATUM_HPP
#define ADMCOVER_BRANCH_DATUM_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace admcover {

using PointLabel = std::string;

struct PreimagePoint {
    std::optional<PointLabel> label; // names a distinguished point (node branch, leg)
    int e = 1;                       // ramification index, 1 <= e <= degree
};

struct Fiber {
    PointLabel point;
    std::vector<PreimagePoint> preimages;
};

// Combinatorial shadow of a finite map between smooth curves. Points not
// listed in any fiber are implicitly unramified.
struct BranchDatum {
    int degree = 1;
    int source_genus = 0;
    int target_genus = 0;
    std::vector<Fiber> fibers;

    const Fiber* fiber_at(const PointLabel& p) const;
    // Fiber containing a preimage with this label, or nullptr.
    const Fiber* fiber_with_label(const PointLabel& l) const;
    std::optional<int> index_of_label(const PointLabel& l) const;
    // Sum of (e-1) over all listed preimages.
    int total_ramification() const;
};

struct RhReport {
    bool ok = true;
    std::string reason;
};

// Structural checks plus the Riemann-Hurwitz equality
//   2*source_genus - 2 = degree*(2*target_genus - 2) + sum(e - 1).
RhReport validate_rh(const BranchDatum& b);

// Labels of preimages with e == degree.
std::set<PointLabel> totally_ramified_labels(const BranchDatum& b);

} // namespace admcover

#endif

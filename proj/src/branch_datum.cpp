#include "admcover/branch_datum.hpp"

#include <map>

namespace admcover {

const Fiber* BranchDatum::fiber_at(const PointLabel& p) const {
    for (const auto& f : fibers)
        if (f.point == p) return &f;
    return nullptr;
}

const Fiber* BranchDatum::fiber_with_label(const PointLabel& l) const {
    for (const auto& f : fibers)
        for (const auto& pre : f.preimages)
            if (pre.label && *pre.label == l) return &f;
    return nullptr;
}

std::optional<int> BranchDatum::index_of_label(const PointLabel& l) const {
    for (const auto& f : fibers)
        for (const auto& pre : f.preimages)
            if (pre.label && *pre.label == l) return pre.e;
    return std::nullopt;
}

int BranchDatum::total_ramification() const {
    int r = 0;
    for (const auto& f : fibers)
        for (const auto& pre : f.preimages) r += pre.e - 1;
    return r;
}

RhReport validate_rh(const BranchDatum& b) {
    if (b.degree < 1) return {false, "degree must be >= 1"};
    if (b.source_genus < 0 || b.target_genus < 0)
        return {false, "genera must be nonnegative"};

    std::map<PointLabel, int> seen_points;
    std::map<PointLabel, int> seen_labels;
    for (const auto& f : b.fibers) {
        if (++seen_points[f.point] > 1)
            return {false, "duplicate fiber at point " + f.point};
        int sum = 0;
        for (const auto& pre : f.preimages) {
            if (pre.e < 1 || pre.e > b.degree)
                return {false, "ramification index out of range at " + f.point};
            if (pre.label && ++seen_labels[*pre.label] > 1)
                return {false, "label " + *pre.label + " used twice"};
            sum += pre.e;
        }
        if (sum != b.degree)
            return {false, "fiber at " + f.point + " sums to " +
                               std::to_string(sum) + ", expected " +
                               std::to_string(b.degree)};
    }

    const int lhs = 2 * b.source_genus - 2;
    const int rhs = b.degree * (2 * b.target_genus - 2) + b.total_ramification();
    if (lhs != rhs)
        return {false, "Riemann-Hurwitz mismatch: 2g-2 = " + std::to_string(lhs) +
                           " vs " + std::to_string(rhs)};
    return {true, ""};
}

std::set<PointLabel> totally_ramified_labels(const BranchDatum& b) {
    std::set<PointLabel> out;
    for (const auto& f : b.fibers)
        for (const auto& pre : f.preimages)
            if (pre.label && pre.e == b.degree) out.insert(*pre.label);
    return out;
}

} // namespace admcover

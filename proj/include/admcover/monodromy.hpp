#ifndef ADMCOVER_MONODROMY_HPP
#define ADMCOVER_MONODROMY_HPP

#include <optional>
#include <string>
#include <vector>

#include "admcover/branch_datum.hpp"
#include "admcover/error.hpp"

namespace admcover {

// Permutation on {0,...,n-1}. Composition is right-to-left throughout:
// (p * q)(x) = p(q(x)).
class Perm {
public:
    Perm() = default;
    explicit Perm(std::vector<int> images);
    static Perm identity(int n);
    // All permutations of S_n in lexicographic order of their image vectors.
    static std::vector<Perm> all(int n);
    // Canonical representative of the conjugacy class with the given cycle
    // type (parts in decreasing order): consecutive cycles on 0,1,2,...
    static Perm class_rep(int n, const std::vector<int>& type);

    int size() const { return static_cast<int>(img_.size()); }
    int operator()(int x) const { return img_[x]; }
    Perm operator*(const Perm& o) const;
    bool operator==(const Perm& o) const { return img_ == o.img_; }
    bool operator<(const Perm& o) const { return img_ < o.img_; }
    Perm inverse() const;
    bool is_identity() const;
    bool is_even() const;
    // Cycle lengths in decreasing order, fixed points included.
    std::vector<int> cycle_type() const;
    const std::vector<int>& images() const { return img_; }

private:
    std::vector<int> img_;
};

// Monodromy data: 2h handle generators a_1,b_1,...,a_h,b_h plus one
// permutation per branch point, with [a_1,b_1]...[a_h,b_h] s_1...s_k = id.
struct MonodromyWitness {
    int degree = 1;
    std::vector<Perm> handles; // 2h entries, interleaved a_i, b_i
    std::vector<Perm> branch;  // one per fiber, in fiber order
};

// Independent checker: product identity, cycle types against the expected
// fiber shapes, transitivity of the generated group. Kept free of any search
// machinery on purpose.
bool verify_witness(const MonodromyWitness& w, int target_genus,
                    const std::vector<std::vector<int>>& expected_types,
                    std::string* why = nullptr);

struct OracleLimits {
    int max_degree = 6;
    int max_branch_points = 8;
};

// Hurwitz existence for cycle-type data (degree d, target genus h, one cycle
// type per branch point, each padded with 1s to sum d). Deterministic; results
// are cached by (d, h, sorted types). Throws Error("search_bound_exceeded")
// when the configured limits are passed.
std::optional<MonodromyWitness> find_monodromy(
    int d, int target_genus, const std::vector<std::vector<int>>& types,
    const OracleLimits& limits = {});

// Cycle types of the listed fibers of b, padded to sum b.degree.
std::vector<std::vector<int>> fiber_cycle_types(const BranchDatum& b);

// Realizability of a branch datum (labels are irrelevant to existence).
// Requires validate_rh(b).ok.
std::optional<MonodromyWitness> is_realizable(const BranchDatum& b,
                                              const OracleLimits& limits = {});

} // namespace admcover

#endif

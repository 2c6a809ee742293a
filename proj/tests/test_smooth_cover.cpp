#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "admcover/branch_datum.hpp"
#include "admcover/error.hpp"
#include "admcover/monodromy.hpp"

using namespace admcover;

namespace {

BranchDatum make_datum(int d, int gs, int gt,
                       const std::vector<std::vector<int>>& fiber_indices) {
    BranchDatum b;
    b.degree = d;
    b.source_genus = gs;
    b.target_genus = gt;
    int k = 0;
    for (const auto& idx : fiber_indices) {
        Fiber f;
        f.point = "q" + std::to_string(++k);
        for (int e : idx) f.preimages.push_back({std::nullopt, e});
        b.fibers.push_back(f);
    }
    return b;
}

} // namespace

TEST_CASE("riemann-hurwitz validation on two-point double covers") {
    // Degree 2, elliptic target, two simple branch points: genus 2 source.
    CHECK(validate_rh(make_datum(2, 2, 1, {{2}, {2}})).ok);
    // Three branch points break parity.
    CHECK_FALSE(validate_rh(make_datum(2, 2, 1, {{2}, {2}, {2}})).ok);
    // Hyperelliptic genus 2: six branch points over a rational target.
    CHECK(validate_rh(make_datum(2, 2, 0, {{2}, {2}, {2}, {2}, {2}, {2}})).ok);
}

TEST_CASE("riemann-hurwitz validation structural failures") {
    CHECK_FALSE(validate_rh(make_datum(0, 0, 0, {})).ok); // degree < 1
    CHECK_FALSE(validate_rh(make_datum(2, -1, 0, {})).ok);

    // Fiber must sum exactly to the degree.
    BranchDatum b = make_datum(3, 1, 0, {{3}, {3}});
    b.fibers.push_back({"q3", {{std::nullopt, 2}}}); // sums to 2 < 3
    CHECK_FALSE(validate_rh(b).ok);

    // Index out of range.
    BranchDatum c = make_datum(2, 0, 0, {{2}, {2}});
    c.fibers[0].preimages[0].e = 3;
    CHECK_FALSE(validate_rh(c).ok);

    // Duplicate fiber points.
    BranchDatum dup = make_datum(2, 1, 1, {{2}, {2}});
    dup.fibers[1].point = dup.fibers[0].point;
    CHECK_FALSE(validate_rh(dup).ok);

    // Duplicate preimage labels.
    BranchDatum lab = make_datum(2, 1, 1, {{2}, {2}});
    lab.fibers[0].preimages[0].label = "x";
    lab.fibers[1].preimages[0].label = "x";
    CHECK_FALSE(validate_rh(lab).ok);
}

TEST_CASE("branch datum queries") {
    BranchDatum b = make_datum(3, 1, 0, {{3}, {3}, {2, 1}, {2, 1}});
    b.fibers[0].preimages[0].label = "t1";
    b.fibers[1].preimages[0].label = "t2";
    b.fibers[2].preimages[1].label = "u";
    REQUIRE(validate_rh(b).ok);

    CHECK(b.fiber_at("q1") != nullptr);
    CHECK(b.fiber_at("missing") == nullptr);
    CHECK(b.fiber_with_label("u") == b.fiber_at("q3"));
    CHECK(b.fiber_with_label("nope") == nullptr);
    CHECK(b.index_of_label("t1") == 3);
    CHECK(b.index_of_label("u") == 1);
    CHECK_FALSE(b.index_of_label("nope").has_value());
    CHECK(b.total_ramification() == 2 + 2 + 1 + 1);
    CHECK(totally_ramified_labels(b) == std::set<PointLabel>{"t1", "t2"});
}

TEST_CASE("permutation composition is right-to-left") {
    Perm p({1, 0, 2}); // (0 1)
    Perm q({0, 2, 1}); // (1 2)
    // (p*q)(x) = p(q(x)): 0->0->1, 1->2->2, 2->1->0.
    CHECK((p * q).images() == std::vector<int>{1, 2, 0});
    CHECK((q * p).images() == std::vector<int>{2, 0, 1});
    CHECK((p * p.inverse()).is_identity());
    CHECK(p.cycle_type() == std::vector<int>{2, 1});
    CHECK_FALSE(p.is_even());
    CHECK((p * q).is_even());
    CHECK(Perm::class_rep(4, {2, 2}).cycle_type() == std::vector<int>{2, 2});
    CHECK(Perm::all(3).size() == 6);
}

TEST_CASE("witness checker catches each defect independently") {
    // Valid: genus 1 target, degree 2, two simple branch points.
    MonodromyWitness w;
    w.degree = 2;
    Perm t({1, 0});
    w.handles = {t, Perm::identity(2)}; // [a,b] = id since a,b commute? no:
    // [t, id] = t * id * t^-1 * id = id. Branch product must be id on its own.
    w.branch = {t, t};
    std::string why;
    CHECK(verify_witness(w, 1, {{2}, {2}}, &why));

    // Wrong number of branch permutations.
    MonodromyWitness bad = w;
    bad.branch.pop_back();
    CHECK_FALSE(verify_witness(bad, 1, {{2}, {2}}, &why));

    // Wrong cycle type.
    bad = w;
    bad.branch[0] = Perm::identity(2);
    CHECK_FALSE(verify_witness(bad, 1, {{2}, {2}}, &why));

    // Product relation fails.
    bad = w;
    bad.branch = {t, t, t};
    CHECK_FALSE(verify_witness(bad, 1, {{2}, {2}, {2}}, &why));

    // Intransitive action: degree 2, no branching, trivial handles.
    MonodromyWitness split;
    split.degree = 2;
    split.handles = {Perm::identity(2), Perm::identity(2)};
    CHECK_FALSE(verify_witness(split, 1, {}, &why));
    CHECK(why.find("transitive") != std::string::npos);

    // Handle count must be 2 * target_genus.
    CHECK_FALSE(verify_witness(w, 2, {{2}, {2}}, &why));
}

TEST_CASE("monodromy search finds and rejects correctly") {
    // Degree 2 over an elliptic curve with two simple branch points: exists.
    auto w = find_monodromy(2, 1, {{2}, {2}});
    REQUIRE(w.has_value());
    CHECK(verify_witness(*w, 1, {{2}, {2}}));

    // Odd number of transpositions has no solution.
    CHECK_FALSE(find_monodromy(2, 0, {{2}, {2}, {2}}).has_value());

    // The classical non-realizable datum: degree 4, genus 0 target, cycle
    // types (2,2), (2,2), (3,1) satisfy Riemann-Hurwitz but carry no
    // transitive monodromy.
    BranchDatum exceptional = make_datum(4, 0, 0, {{2, 2}, {2, 2}, {3, 1}});
    REQUIRE(validate_rh(exceptional).ok);
    CHECK_FALSE(is_realizable(exceptional).has_value());

    // Same shapes over genus 1 become realizable (handles absorb the defect).
    auto w1 = find_monodromy(4, 1, {{2, 2}, {2, 2}, {3, 1}});
    REQUIRE(w1.has_value());
    CHECK(verify_witness(*w1, 1, {{2, 2}, {2, 2}, {3, 1}}));
}

TEST_CASE("degree two covers of the line: parity and genus law") {
    // b simple branch points exist over genus 0 iff b is even and >= 2,
    // with source genus (b - 2) / 2.
    for (int b = 1; b <= 8; ++b) {
        std::vector<std::vector<int>> types(b, std::vector<int>{2});
        auto w = find_monodromy(2, 0, types);
        if (b % 2 == 0) {
            REQUIRE(w.has_value());
            CHECK(verify_witness(*w, 0, types));
            BranchDatum dat = make_datum(2, (b - 2) / 2, 0,
                                         std::vector<std::vector<int>>(
                                             b, std::vector<int>{2}));
            CHECK(validate_rh(dat).ok);
        } else {
            CHECK_FALSE(w.has_value());
        }
    }
}

TEST_CASE("unbranched covers") {
    // Degree 1 always works; higher degree over genus 0 cannot be connected.
    CHECK(find_monodromy(1, 0, {}).has_value());
    CHECK_FALSE(find_monodromy(3, 0, {}).has_value());
    auto w = find_monodromy(3, 2, {});
    REQUIRE(w.has_value());
    CHECK(verify_witness(*w, 2, {}));
}

TEST_CASE("oracle inputs are validated and bounded") {
    CHECK_THROWS_AS(find_monodromy(0, 0, {}), Error);
    CHECK_THROWS_AS(find_monodromy(2, -1, {}), Error);
    CHECK_THROWS_AS(find_monodromy(2, 0, {{3}}), Error); // cycle beyond degree

    try {
        find_monodromy(7, 0, {{2}, {2}});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "search_bound_exceeded");
    }
    try {
        find_monodromy(2, 0, std::vector<std::vector<int>>(9, {{2}}));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.code()) == "search_bound_exceeded");
    }

    OracleLimits wide;
    wide.max_branch_points = 10;
    auto w = find_monodromy(2, 0, std::vector<std::vector<int>>(10, {{2}}),
                            wide);
    REQUIRE(w.has_value());
    CHECK(verify_witness(*w, 0, std::vector<std::vector<int>>(10, {{2}})));
}

TEST_CASE("cached queries repeat the same answer") {
    auto a = find_monodromy(3, 0, {{3}, {2, 1}, {2, 1}, {3}});
    auto b = find_monodromy(3, 0, {{3}, {3}, {2, 1}, {2, 1}}); // sorted alike
    REQUIRE(a.has_value() == b.has_value());
    if (a) {
        CHECK(verify_witness(*a, 0, {{3}, {2, 1}, {2, 1}, {3}}));
        CHECK(a->branch.size() == b->branch.size());
    }
}

TEST_CASE("realizability from a branch datum") {
    BranchDatum good = make_datum(2, 2, 1, {{2}, {2}});
    auto w = is_realizable(good);
    REQUIRE(w.has_value());
    CHECK(verify_witness(*w, 1, fiber_cycle_types(good)));

    BranchDatum broken = make_datum(2, 3, 1, {{2}, {2}});
    CHECK_THROWS_AS(is_realizable(broken), Error);

    // Fiber cycle types pad with fixed points.
    BranchDatum part = make_datum(3, 1, 0, {{2, 1}, {2, 1}, {3}, {3}});
    auto types = fiber_cycle_types(part);
    REQUIRE(types.size() == 4);
    CHECK(types[0] == std::vector<int>{2, 1});
    CHECK(types[2] == std::vector<int>{3});
}

#include "admcover/ellipticity.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <set>
#include <thread>

#include "admcover/error.hpp"

namespace admcover {

void validate_curve_data(const IrreducibleCurveData& c) {
    if (c.normalization_genus < 0)
        throw Error("bad_curve", "negative normalization genus");
    std::set<std::string> ids;
    std::set<PointLabel> labels;
    for (const auto& n : c.nodes) {
        if (!ids.insert(n.id).second)
            throw Error("bad_curve", "duplicate node id " + n.id);
        if (!labels.insert(n.b1).second || !labels.insert(n.b2).second)
            throw Error("bad_curve", "duplicate branch label on node " + n.id);
    }
    const int delta = static_cast<int>(c.nodes.size());
    if (2 * c.normalization_genus - 2 + 2 * delta <= 0)
        throw Error("bad_curve", "curve is not stable");
}

VerifyReport verify_certificate(const IrreducibleCurveData& c, int d, int h,
                                const EllipticityCertificate& cert) {
    VerifyReport r;
    auto fail = [&](const std::string& p) {
        r.ok = false;
        r.problems.push_back(p);
    };

    if (d < 2) fail("degree must be at least 2");
    if (h < 1) fail("target genus must be at least 1");
    try {
        validate_curve_data(c);
    } catch (const Error& e) {
        fail(std::string("curve: ") + e.what());
        return r;
    }

    const int delta = static_cast<int>(c.nodes.size());
    const int hp = cert.cover.target_genus;
    const int s = h - hp;
    if (s < 0) fail("cover target genus exceeds h");
    if (static_cast<int>(cert.groups.size()) != std::max(s, 0))
        fail("group count disagrees with s = h - h'");
    if (cert.point_pairs.size() != cert.groups.size())
        fail("one point pair per group required");
    if (cert.cover.degree != d) fail("cover degree disagrees with d");
    if (cert.cover.source_genus != c.normalization_genus)
        fail("cover source genus disagrees with the normalization");
    if (cert.delta0 < 0 || cert.delta0 > delta) fail("delta0 out of range");

    RhReport rh = validate_rh(cert.cover);
    if (!rh.ok) {
        fail("cover: " + rh.reason);
        return r;
    }

    // All 2*delta branches must be placed.
    for (const auto& n : c.nodes)
        for (const PointLabel* l : {&n.b1, &n.b2})
            if (!cert.cover.fiber_with_label(*l))
                fail("branch " + *l + " is not placed in any fiber");
    if (!r.ok) return r;

    // The delta0-block is the leading run of nodes; groups partition the rest.
    std::set<std::string> rest;
    for (int i = cert.delta0; i < delta; ++i) rest.insert(c.nodes[i].id);
    std::set<std::string> seen;
    for (const auto& g : cert.groups) {
        if (g.empty()) fail("empty group");
        for (const auto& id : g) {
            if (!rest.count(id)) fail("group node " + id + " outside the tail block");
            if (!seen.insert(id).second) fail("node " + id + " in two groups");
        }
    }
    if (seen.size() != rest.size()) fail("groups do not cover nodes past delta0");
    if (!r.ok) return r;

    std::map<std::string, const CurveNode*> by_id;
    for (const auto& n : c.nodes) by_id[n.id] = &n;

    // (a): leading nodes keep both branches in one fiber.
    for (int i = 0; i < cert.delta0; ++i) {
        const CurveNode& n = c.nodes[i];
        const Fiber* f1 = cert.cover.fiber_with_label(n.b1);
        const Fiber* f2 = cert.cover.fiber_with_label(n.b2);
        if (f1 != f2)
            fail("(a) fails: branches of " + n.id + " lie in different fibers");
    }

    // (b): group fibers are exactly the matching branches; (c): equal indices.
    std::set<PointLabel> qs;
    for (size_t k = 0; k < cert.groups.size(); ++k) {
        const auto& [q1, q2] = cert.point_pairs[k];
        if (!qs.insert(q1).second || !qs.insert(q2).second)
            fail("point pair entries are not pairwise distinct");
        for (int side = 0; side < 2; ++side) {
            const PointLabel& q = side == 0 ? q1 : q2;
            const Fiber* f = cert.cover.fiber_at(q);
            if (!f) {
                fail("(b) fails: no fiber at " + q);
                continue;
            }
            std::set<PointLabel> want, got;
            for (const auto& id : cert.groups[k]) {
                const CurveNode* n = by_id.at(id);
                want.insert(side == 0 ? n->b1 : n->b2);
            }
            for (const auto& pre : f->preimages) {
                if (!pre.label) {
                    fail("(b) fails: unlabeled preimage over " + q);
                    continue;
                }
                got.insert(*pre.label);
            }
            if (want != got)
                fail("(b) fails: fiber over " + q +
                     " is not exactly group " + std::to_string(k + 1));
        }
        for (const auto& id : cert.groups[k]) {
            const CurveNode* n = by_id.at(id);
            auto e1 = cert.cover.index_of_label(n->b1);
            auto e2 = cert.cover.index_of_label(n->b2);
            if (!e1 || !e2 || *e1 != *e2)
                fail("(c) fails: unequal indices at node " + id);
        }
    }

    if (cert.witness.degree != d) fail("witness degree disagrees with d");
    std::string why;
    if (!verify_witness(cert.witness, hp, fiber_cycle_types(cert.cover), &why))
        fail("witness: " + why);

    return r;
}

namespace {

// Nonincreasing positive sequences with the given sum; optionally an exact
// part count.
void partitions_rec(int n, int maxpart, int parts_left, bool exact,
                    std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
    if (n == 0) {
        if (!exact || parts_left == 0) out.push_back(cur);
        return;
    }
    if (exact && parts_left == 0) return;
    int hi = std::min(n, maxpart);
    if (exact) hi = std::min(hi, n - (parts_left - 1)); // leave room for the rest
    for (int p = hi; p >= 1; --p) {
        if (exact && n - p > (parts_left - 1) * p) continue; // nonincreasing cap
        cur.push_back(p);
        partitions_rec(n - p, p, parts_left - 1, exact, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> partitions(int n, int maxpart) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    partitions_rec(n, maxpart, 0, false, cur, out);
    return out;
}

std::vector<std::vector<int>> partitions_exact(int n, int parts, int maxpart) {
    std::vector<std::vector<int>> out;
    if (parts == 0) {
        if (n == 0) out.push_back({});
        return out;
    }
    std::vector<int> cur;
    partitions_rec(n, maxpart, parts, true, cur, out);
    return out;
}

// Nonincreasing sequences of exactly `len` values in 1..maxv with sum <= cap.
void bounded_seqs_rec(int len, int maxv, int cap, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
    if (len == 0) {
        out.push_back(cur);
        return;
    }
    for (int v = std::min(maxv, cap - (len - 1)); v >= 1; --v) {
        cur.push_back(v);
        bounded_seqs_rec(len - 1, v, cap - v, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> bounded_seqs(int len, int maxv, int cap) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    bounded_seqs_rec(len, maxv, cap, cur, out);
    return out;
}

struct BranchOutcome {
    std::optional<EllipticityCertificate> certificate;
    std::optional<Refutation> refutation;
    bool bound_hit = false;
};

// All candidate certificates for one value of h', in deterministic order:
// delta0 increasing, then canonical (nonincreasing) partitions throughout.
BranchOutcome try_h_prime(const IrreducibleCurveData& c, int d, int h, int hp,
                          const OracleLimits& limits) {
    BranchOutcome out;
    const int delta = static_cast<int>(c.nodes.size());
    const int s = h - hp;
    const int g = c.normalization_genus;

    if (s > delta) {
        out.refutation = {hp, "s", "needs " + std::to_string(s) +
                                       " groups but the curve has only " +
                                       std::to_string(delta) + " nodes"};
        return out;
    }

    // 0 = nothing enumerable, 1 = RH always fails, 2 = monodromy always fails.
    int reached = 0;

    std::vector<int> delta0s;
    if (s == 0) {
        delta0s.push_back(delta);
    } else {
        for (int delta0 = 0; delta0 + s <= delta; ++delta0)
            delta0s.push_back(delta0);
    }

    for (int delta0 : delta0s) {
        for (const auto& gsizes : partitions_exact(delta - delta0, s, d)) {
            // Index assignments per group: partitions of d with |group| parts.
            std::vector<std::vector<std::vector<int>>> gchoices;
            bool possible = true;
            for (int m : gsizes) {
                auto ps = partitions_exact(d, m, d);
                if (ps.empty()) possible = false;
                gchoices.push_back(std::move(ps));
            }
            if (!possible) continue;

            for (const auto& csizes :
                 delta0 == 0 ? std::vector<std::vector<int>>{{}}
                             : partitions(delta0, delta0)) {
                // Per same-fiber class: 2c labeled indices + filler partition.
                std::vector<std::vector<std::pair<std::vector<int>,
                                                  std::vector<int>>>>
                    cchoices;
                bool cpossible = true;
                for (int cs : csizes) {
                    std::vector<std::pair<std::vector<int>, std::vector<int>>>
                        opts;
                    for (const auto& vals : bounded_seqs(2 * cs, d, d)) {
                        int sum = 0;
                        for (int v : vals) sum += v;
                        for (const auto& fill : partitions(d - sum, d))
                            opts.emplace_back(vals, fill);
                    }
                    if (opts.empty()) cpossible = false;
                    cchoices.push_back(std::move(opts));
                }
                if (!cpossible) continue;

                // Walk the Cartesian product of all per-group and per-class
                // choices.
                std::vector<size_t> gi(gchoices.size(), 0), ci(cchoices.size(), 0);
                for (;;) {
                    BranchDatum datum;
                    datum.degree = d;
                    datum.source_genus = g;
                    datum.target_genus = hp;

                    std::vector<std::vector<std::string>> groups;
                    std::vector<std::pair<PointLabel, PointLabel>> pairs;
                    int at = delta0;
                    for (size_t k = 0; k < gchoices.size(); ++k) {
                        const auto& es = gchoices[k][gi[k]];
                        const PointLabel q1 = "q" + std::to_string(k + 1) + "^1";
                        const PointLabel q2 = "q" + std::to_string(k + 1) + "^2";
                        Fiber f1{q1, {}}, f2{q2, {}};
                        std::vector<std::string> ids;
                        for (size_t j = 0; j < es.size(); ++j) {
                            const CurveNode& n = c.nodes[at + j];
                            ids.push_back(n.id);
                            f1.preimages.push_back({n.b1, es[j]});
                            f2.preimages.push_back({n.b2, es[j]});
                        }
                        at += static_cast<int>(es.size());
                        datum.fibers.push_back(std::move(f1));
                        datum.fibers.push_back(std::move(f2));
                        groups.push_back(std::move(ids));
                        pairs.emplace_back(q1, q2);
                    }

                    int bat = 0;
                    for (size_t j = 0; j < cchoices.size(); ++j) {
                        const auto& [vals, fill] = cchoices[j][ci[j]];
                        Fiber f{"p" + std::to_string(j + 1), {}};
                        const int cs = static_cast<int>(vals.size()) / 2;
                        for (int i = 0; i < cs; ++i) {
                            const CurveNode& n = c.nodes[bat + i];
                            f.preimages.push_back({n.b1, vals[2 * i]});
                            f.preimages.push_back({n.b2, vals[2 * i + 1]});
                        }
                        bat += cs;
                        for (int v : fill)
                            f.preimages.push_back({std::nullopt, v});
                        datum.fibers.push_back(std::move(f));
                    }

                    int r0 = 0;
                    for (const auto& f : datum.fibers)
                        for (const auto& pre : f.preimages) r0 += pre.e - 1;
                    const int m = (2 * g - 2) - d * (2 * hp - 2) - r0;

                    if (m < 0) {
                        reached = std::max(reached, 1);
                    } else if (static_cast<int>(datum.fibers.size()) + m >
                                   limits.max_branch_points ||
                               d > limits.max_degree) {
                        out.bound_hit = true;
                    } else {
                        for (int i = 1; i <= m; ++i) {
                            Fiber f{"s" + std::to_string(i), {}};
                            f.preimages.push_back({std::nullopt, 2});
                            for (int u = 0; u < d - 2; ++u)
                                f.preimages.push_back({std::nullopt, 1});
                            datum.fibers.push_back(std::move(f));
                        }
                        if (validate_rh(datum).ok) {
                            reached = std::max(reached, 2);
                            try {
                                auto w = is_realizable(datum, limits);
                                if (w) {
                                    EllipticityCertificate cert;
                                    cert.cover = datum;
                                    cert.delta0 = delta0;
                                    cert.groups = groups;
                                    cert.point_pairs = pairs;
                                    cert.witness = *w;
                                    out.certificate = cert;
                                    return out;
                                }
                            } catch (const Error& e) {
                                if (e.code() != "search_bound_exceeded") throw;
                                out.bound_hit = true;
                            }
                        } else {
                            reached = std::max(reached, 1);
                        }
                    }

                    // Advance the product.
                    size_t pos = 0;
                    const size_t total = gi.size() + ci.size();
                    for (; pos < total; ++pos) {
                        size_t* idx = pos < gi.size() ? &gi[pos] : &ci[pos - gi.size()];
                        size_t n = pos < gi.size() ? gchoices[pos].size()
                                                   : cchoices[pos - gi.size()].size();
                        if (++*idx < n) break;
                        *idx = 0;
                    }
                    if (pos == total) break;
                }
            }
        }
    }

    if (reached == 2)
        out.refutation = {hp, "monodromy",
                          "no candidate datum admits a monodromy witness"};
    else if (reached == 1)
        out.refutation = {hp, "rh",
                          "no index assignment satisfies Riemann-Hurwitz"};
    else
        out.refutation = {hp, "b",
                          "no full-fiber group structure fits degree " +
                              std::to_string(d)};
    return out;
}

int thread_budget() {
    const char* env = std::getenv("ADMCOVER_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    return n > 0 ? n : 1;
}

Verdict run_branches(const IrreducibleCurveData& c, int d, int h,
                     const std::vector<int>& h_primes,
                     const OracleLimits& limits) {
    std::vector<BranchOutcome> outcomes(h_primes.size());

    const int threads = std::min<int>(thread_budget(),
                                      static_cast<int>(h_primes.size()));
    if (threads > 1) {
        std::vector<std::thread> pool;
        std::atomic<size_t> next{0};
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= h_primes.size()) return;
                    outcomes[i] = try_h_prime(c, d, h, h_primes[i], limits);
                }
            });
        for (auto& t : pool) t.join();
    } else {
        for (size_t i = 0; i < h_primes.size(); ++i) {
            outcomes[i] = try_h_prime(c, d, h, h_primes[i], limits);
            if (outcomes[i].certificate) break; // later branches are moot
        }
    }

    // Deterministic merge: the smallest h' with a certificate wins, exactly
    // as in the sequential order.
    Verdict v;
    bool bound_hit = false;
    for (size_t i = 0; i < h_primes.size(); ++i) {
        if (outcomes[i].certificate) {
            v.decision = Decision::CertifiedYes;
            v.certificate = outcomes[i].certificate;
            return v;
        }
        bound_hit = bound_hit || outcomes[i].bound_hit;
        if (outcomes[i].refutation) v.refutations.push_back(*outcomes[i].refutation);
    }
    if (bound_hit)
        throw Error("search_bound_exceeded",
                    "verdict depends on candidates beyond the oracle limits");
    v.decision = Decision::NoCertificateFound;
    return v;
}

} // namespace

Verdict decide(const IrreducibleCurveData& c, int d, int h,
               const OracleLimits& limits) {
    if (d < 2 || h < 1)
        throw Error("bad_input", "decide requires d >= 2 and h >= 1");
    validate_curve_data(c);
    if (d > limits.max_degree)
        throw Error("search_bound_exceeded", "degree beyond oracle limits");
    std::vector<int> hps;
    for (int hp = 0; hp <= h; ++hp) hps.push_back(hp);
    return run_branches(c, d, h, hps, limits);
}

Verdict decide_one_node(const IrreducibleCurveData& c, int d, int h,
                        RouteFilter filter, const OracleLimits& limits) {
    if (c.nodes.size() != 1)
        throw Error("bad_input", "decide_one_node requires exactly one node");
    if (d < 2 || h < 1)
        throw Error("bad_input", "decide requires d >= 2 and h >= 1");
    validate_curve_data(c);
    if (d > limits.max_degree)
        throw Error("search_bound_exceeded", "degree beyond oracle limits");
    std::vector<int> hps;
    if (filter != RouteFilter::SameFiberOnly && h - 1 >= 0) hps.push_back(h - 1);
    if (filter != RouteFilter::TotalRamificationOnly) hps.push_back(h);
    return run_branches(c, d, h, hps, limits);
}

HyperellipticClass classify_hyperelliptic_one_node(int g_n, BranchRelation rel) {
    if (g_n < 2)
        throw Error("ambiguous_hyperelliptic_structure",
                    "needs genus >= 2 for a unique degree-2 map");
    switch (rel) {
    case BranchRelation::ConjugatePair:
        return HyperellipticClass::Hyperelliptic;
    case BranchRelation::TwoWeierstrass:
        return HyperellipticClass::Bielliptic;
    default:
        return HyperellipticClass::Neither;
    }
}

} // namespace admcover

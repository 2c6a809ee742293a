#include "admcover/monodromy.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace admcover {

Perm::Perm(std::vector<int> images) : img_(std::move(images)) {
    std::vector<char> seen(img_.size(), 0);
    for (int x : img_) {
        if (x < 0 || x >= static_cast<int>(img_.size()) || seen[x])
            throw Error("bad_permutation", "image vector is not a bijection");
        seen[x] = 1;
    }
}

Perm Perm::identity(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Perm(std::move(v));
}

std::vector<Perm> Perm::all(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::vector<Perm> out;
    do {
        out.push_back(Perm(v));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

Perm Perm::class_rep(int n, const std::vector<int>& type) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    int at = 0;
    for (int len : type) {
        for (int i = 0; i < len; ++i) v[at + i] = at + (i + 1) % len;
        at += len;
    }
    if (at != n) throw Error("bad_cycle_type", "cycle type does not sum to n");
    return Perm(std::move(v));
}

Perm Perm::operator*(const Perm& o) const {
    std::vector<int> v(img_.size());
    for (size_t x = 0; x < img_.size(); ++x) v[x] = img_[o.img_[x]];
    return Perm(std::move(v));
}

Perm Perm::inverse() const {
    std::vector<int> v(img_.size());
    for (size_t x = 0; x < img_.size(); ++x) v[img_[x]] = static_cast<int>(x);
    return Perm(std::move(v));
}

bool Perm::is_identity() const {
    for (size_t x = 0; x < img_.size(); ++x)
        if (img_[x] != static_cast<int>(x)) return false;
    return true;
}

bool Perm::is_even() const {
    int transpositions = 0;
    for (int len : cycle_type()) transpositions += len - 1;
    return transpositions % 2 == 0;
}

std::vector<int> Perm::cycle_type() const {
    std::vector<char> seen(img_.size(), 0);
    std::vector<int> type;
    for (size_t x = 0; x < img_.size(); ++x) {
        if (seen[x]) continue;
        int len = 0;
        for (int y = static_cast<int>(x); !seen[y]; y = img_[y]) {
            seen[y] = 1;
            ++len;
        }
        type.push_back(len);
    }
    std::sort(type.rbegin(), type.rend());
    return type;
}

namespace {

bool tuple_transitive(int d, const std::vector<const Perm*>& perms) {
    if (d <= 1) return true;
    std::vector<int> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Perm* p : perms)
        for (int x = 0; x < d; ++x) {
            int a = find(x), b = find((*p)(x));
            if (a != b) parent[a] = b;
        }
    for (int x = 1; x < d; ++x)
        if (find(x) != find(0)) return false;
    return true;
}

std::vector<int> padded_type(std::vector<int> t, int d) {
    int sum = std::accumulate(t.begin(), t.end(), 0);
    while (sum < d) {
        t.push_back(1);
        ++sum;
    }
    std::sort(t.rbegin(), t.rend());
    return t;
}

Perm commutator(const Perm& a, const Perm& b) {
    return a * b * a.inverse() * b.inverse();
}

// Finds handles a_1,b_1,...,a_h,b_h with [a_1,b_1]...[a_h,b_h] = target and,
// together with `fixed`, a transitive tuple. Lexicographic first hit.
bool find_handles(int d, int h, const Perm& target,
                  const std::vector<Perm>& all_perms,
                  const std::vector<const Perm*>& fixed,
                  std::vector<Perm>& out) {
    if (h == 0) {
        if (!target.is_identity()) return false;
        return tuple_transitive(d, fixed);
    }
    for (const Perm& a : all_perms)
        for (const Perm& b : all_perms) {
            Perm c = commutator(a, b);
            if (h == 1) {
                if (!(c == target)) continue;
                std::vector<const Perm*> full = fixed;
                full.push_back(&a);
                full.push_back(&b);
                if (!tuple_transitive(d, full)) continue;
                out.push_back(a);
                out.push_back(b);
                return true;
            }
            std::vector<const Perm*> full = fixed;
            full.push_back(&a);
            full.push_back(&b);
            std::vector<Perm> rest;
            if (find_handles(d, h - 1, c.inverse() * target, all_perms, full, rest)) {
                out.push_back(a);
                out.push_back(b);
                for (auto& p : rest) out.push_back(std::move(p));
                return true;
            }
        }
    return false;
}

// Two keys per query: witnesses depend on the fiber order (the branch
// permutations are listed in it), so positive answers are cached under the
// ordered key only; non-existence is order-invariant and cached under the
// sorted key.
std::string cache_key(int d, int h, std::vector<std::vector<int>> types,
                      bool sorted) {
    if (sorted) std::sort(types.begin(), types.end());
    std::ostringstream os;
    os << d << "|" << h;
    for (const auto& t : types) {
        os << "|";
        for (int x : t) os << x << ",";
    }
    return os.str();
}

std::mutex g_cache_mutex;
std::map<std::string, std::optional<MonodromyWitness>>& cache() {
    static std::map<std::string, std::optional<MonodromyWitness>> c;
    return c;
}

} // namespace

bool verify_witness(const MonodromyWitness& w, int target_genus,
                    const std::vector<std::vector<int>>& expected_types,
                    std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    const int d = w.degree;
    if (static_cast<int>(w.handles.size()) != 2 * target_genus)
        return fail("expected " + std::to_string(2 * target_genus) + " handle permutations");
    if (w.branch.size() != expected_types.size())
        return fail("branch permutation count mismatch");
    for (const Perm& p : w.handles)
        if (p.size() != d) return fail("handle permutation on wrong letter count");
    for (size_t j = 0; j < w.branch.size(); ++j) {
        if (w.branch[j].size() != d)
            return fail("branch permutation on wrong letter count");
        if (w.branch[j].cycle_type() != padded_type(expected_types[j], d))
            return fail("cycle type mismatch at branch point " + std::to_string(j));
    }

    Perm prod = Perm::identity(d);
    for (size_t i = 0; i + 1 < w.handles.size(); i += 2)
        prod = prod * commutator(w.handles[i], w.handles[i + 1]);
    for (const Perm& s : w.branch) prod = prod * s;
    if (!prod.is_identity()) return fail("product relation fails");

    std::vector<const Perm*> gens;
    for (const Perm& p : w.handles) gens.push_back(&p);
    for (const Perm& p : w.branch) gens.push_back(&p);
    if (!tuple_transitive(d, gens)) return fail("action is not transitive");
    return true;
}

std::optional<MonodromyWitness> find_monodromy(
    int d, int target_genus, const std::vector<std::vector<int>>& raw_types,
    const OracleLimits& limits) {
    if (d < 1 || target_genus < 0)
        throw Error("bad_input", "degree must be >= 1 and genus >= 0");
    if (d > limits.max_degree)
        throw Error("search_bound_exceeded",
                    "degree " + std::to_string(d) + " exceeds bound " +
                        std::to_string(limits.max_degree));
    if (static_cast<int>(raw_types.size()) > limits.max_branch_points)
        throw Error("search_bound_exceeded",
                    "branch point count exceeds bound " +
                        std::to_string(limits.max_branch_points));

    std::vector<std::vector<int>> types;
    for (const auto& t : raw_types) {
        for (int x : t)
            if (x < 1 || x > d)
                throw Error("bad_input", "cycle length out of range");
        if (std::accumulate(t.begin(), t.end(), 0) > d)
            throw Error("bad_input", "cycle type sums beyond degree");
        types.push_back(padded_type(t, d));
    }

    const std::string okey = cache_key(d, target_genus, types, false);
    const std::string skey = cache_key(d, target_genus, types, true);
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = cache().find(okey);
        if (it != cache().end()) return it->second;
        auto ns = cache().find(skey);
        if (ns != cache().end() && !ns->second.has_value()) return std::nullopt;
    }

    auto store = [&](std::optional<MonodromyWitness> w) {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        if (w)
            cache()[okey] = w;
        else
            cache()[skey] = std::nullopt;
        return w;
    };

    // Parity: commutators are even, so the branch permutations must multiply
    // to an even element.
    int odd = 0;
    for (const auto& t : types) {
        int tr = 0;
        for (int len : t) tr += len - 1;
        odd += tr;
    }
    if (odd % 2 != 0) return store(std::nullopt);

    const std::vector<Perm> all_perms = Perm::all(d);
    auto class_of = [&](const std::vector<int>& type) {
        std::vector<Perm> cls;
        for (const Perm& p : all_perms)
            if (p.cycle_type() == type) cls.push_back(p);
        return cls;
    };

    const int k = static_cast<int>(types.size());
    MonodromyWitness w;
    w.degree = d;

    if (k == 0) {
        // No branching: a_1 = b_1 = d-cycle closes the relation and acts
        // transitively; further handles are identity.
        if (target_genus == 0) {
            if (d != 1) return store(std::nullopt);
            return store(w);
        }
        std::vector<int> cyc(1, d);
        w.handles.push_back(Perm::class_rep(d, cyc));
        w.handles.push_back(Perm::class_rep(d, cyc));
        for (int i = 1; i < target_genus; ++i) {
            w.handles.push_back(Perm::identity(d));
            w.handles.push_back(Perm::identity(d));
        }
        return store(w);
    }

    // Conjugating a solution tuple is free, so the branch point with the
    // largest class is pinned to its canonical representative. With genus 0
    // the second-largest class is left determined by the product relation.
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<size_t> class_sizes(k);
    for (int j = 0; j < k; ++j) class_sizes[j] = class_of(types[j]).size();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return class_sizes[a] > class_sizes[b];
    });

    const int pinned = order[0];
    const int determined = (target_genus == 0 && k >= 2) ? order[1] : -1;

    std::vector<int> free_slots;
    for (int j : order)
        if (j != pinned && j != determined) free_slots.push_back(j);

    // Keep the exhaustive search honest about its size.
    double est = 1.0;
    for (int j : free_slots) est *= static_cast<double>(class_sizes[j]);
    if (target_genus >= 1) est *= static_cast<double>(all_perms.size()) * all_perms.size();
    if (est > 5e7)
        throw Error("search_bound_exceeded", "search space too large");

    std::vector<Perm> chosen(k, Perm::identity(d));
    chosen[pinned] = Perm::class_rep(d, types[pinned]);
    std::vector<std::vector<Perm>> free_classes;
    for (int j : free_slots) free_classes.push_back(class_of(types[j]));

    std::optional<MonodromyWitness> found;
    std::function<void(size_t)> dfs = [&](size_t i) {
        if (found) return;
        if (i == free_slots.size()) {
            if (determined >= 0) {
                // prefix * x * suffix = id with x in slot `determined`; solve
                // for x by splitting the product around it.
                Perm prefix = Perm::identity(d);
                for (int j = 0; j < determined; ++j) prefix = prefix * chosen[j];
                Perm suffix = Perm::identity(d);
                for (int j = determined + 1; j < k; ++j) suffix = suffix * chosen[j];
                Perm x = prefix.inverse() * suffix.inverse();
                if (x.cycle_type() != types[determined]) return;
                chosen[determined] = x;
            }

            if (target_genus == 0) {
                Perm total = Perm::identity(d);
                for (int j = 0; j < k; ++j) total = total * chosen[j];
                if (!total.is_identity()) return;
                std::vector<const Perm*> gens;
                for (const Perm& p : chosen) gens.push_back(&p);
                if (!tuple_transitive(d, gens)) return;
                MonodromyWitness cand = w;
                cand.branch = chosen;
                found = cand;
                return;
            }

            Perm total = Perm::identity(d);
            for (int j = 0; j < k; ++j) total = total * chosen[j];
            std::vector<const Perm*> fixed;
            for (const Perm& p : chosen) fixed.push_back(&p);
            std::vector<Perm> handles;
            if (find_handles(d, target_genus, total.inverse(), all_perms, fixed,
                             handles)) {
                MonodromyWitness cand = w;
                // find_handles emits a_1,b_1 first.
                cand.handles = handles;
                cand.branch = chosen;
                found = cand;
            }
            return;
        }
        for (const Perm& p : free_classes[i]) {
            chosen[free_slots[i]] = p;
            dfs(i + 1);
            if (found) return;
        }
    };
    dfs(0);

    return store(found);
}

std::vector<std::vector<int>> fiber_cycle_types(const BranchDatum& b) {
    std::vector<std::vector<int>> types;
    for (const auto& f : b.fibers) {
        std::vector<int> t;
        for (const auto& pre : f.preimages) t.push_back(pre.e);
        std::sort(t.rbegin(), t.rend());
        types.push_back(std::move(t));
    }
    return types;
}

std::optional<MonodromyWitness> is_realizable(const BranchDatum& b,
                                              const OracleLimits& limits) {
    RhReport rh = validate_rh(b);
    if (!rh.ok)
        throw Error("rh_invalid", "datum fails Riemann-Hurwitz: " + rh.reason);
    return find_monodromy(b.degree, b.target_genus, fiber_cycle_types(b), limits);
}

} // namespace admcover

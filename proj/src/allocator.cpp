#include "laas/allocator.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>

#include "laas/error.hpp"

namespace laas {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::Laas: return "laas";
        case Algorithm::Simple: return "simple";
        case Algorithm::ExtendedSimple: return "extended-simple";
        case Algorithm::Unconstrained: return "unconstrained";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(const std::string& s) {
    if (s == "laas") return Algorithm::Laas;
    if (s == "simple") return Algorithm::Simple;
    if (s == "extended-simple" || s == "extendedSimple" || s == "ext") return Algorithm::ExtendedSimple;
    if (s == "unconstrained") return Algorithm::Unconstrained;
    return std::nullopt;
}

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// D values from `hi` down to 1; with a slimmed level the ones divisible by
// the rounded ratio go first.
std::vector<int> divisor_order(int hi, int ratio) {
    std::vector<int> out;
    if (ratio > 1) {
        for (int d = hi; d >= 1; --d)
            if (d % ratio == 0) out.push_back(d);
        for (int d = hi; d >= 1; --d)
            if (d % ratio != 0) out.push_back(d);
    } else {
        for (int d = hi; d >= 1; --d) out.push_back(d);
    }
    return out;
}

struct Unit {
    int id;
    int capacity;  // free hosts (leaf) or whole free leaves (sub-tree)
    PortMask mask;
};

struct Search {
    const std::vector<Unit>& units;  // most-used first
    int d, q, r, s, rs;
    std::vector<int> chosen;  // positions into units
    std::vector<char> used;

    struct Found {
        std::vector<int> repeated;
        PortMask common;
        int unique = -1;
        PortMask unique_mask;
    };

    std::optional<Found> finish(const PortMask& inter) const {
        Found f;
        for (int p : chosen) f.repeated.push_back(units[static_cast<std::size_t>(p)].id);
        if (r == 0) {
            f.common = inter.lowest(static_cast<std::size_t>(s));
            return f;
        }
        for (std::size_t i = 0; i < units.size(); ++i) {
            if (used[i] || units[i].capacity < r) continue;
            PortMask cand = units[i].mask & inter;
            if (static_cast<int>(cand.count()) < rs) continue;
            f.unique = units[i].id;
            f.unique_mask = cand.lowest(static_cast<std::size_t>(rs));
            f.common = f.unique_mask | inter.minus(f.unique_mask).lowest(static_cast<std::size_t>(s - rs));
            return f;
        }
        return std::nullopt;
    }

    std::optional<Found> dfs(std::size_t from, const PortMask& inter) {
        if (static_cast<int>(chosen.size()) == q) return finish(inter);
        std::set<std::pair<std::uint64_t, int>> tried;
        for (std::size_t i = from; i < units.size(); ++i) {
            const Unit& u = units[i];
            if (u.capacity < d) continue;
            // Leave room for the remaining picks.
            if (units.size() - i < static_cast<std::size_t>(q) - chosen.size()) break;
            PortMask next = inter & u.mask;
            if (static_cast<int>(next.count()) < s) continue;
            // Candidates with the same free pattern are interchangeable; if
            // one failed here the other fails too.
            if (!tried.emplace(next.fingerprint(), u.capacity).second) continue;
            chosen.push_back(static_cast<int>(i));
            used[i] = 1;
            auto res = dfs(i + 1, next);
            if (res) return res;
            used[i] = 0;
            chosen.pop_back();
        }
        return std::nullopt;
    }

    std::optional<Found> run(std::size_t width) {
        used.assign(units.size(), 0);
        chosen.clear();
        return dfs(0, PortMask(width, true));
    }
};

std::vector<int> lowest_free_hosts(const LinkTable& t, int leaf, int count) {
    std::vector<int> out;
    int base = t.topology().first_host_of_leaf(leaf);
    for (int k : t.free_hosts(leaf).lowest(static_cast<std::size_t>(count)).ports()) out.push_back(base + k);
    return out;
}

std::vector<int> whole_free_leaves(const LinkTable& t, int subtree) {
    const Topology& topo = t.topology();
    std::vector<int> out;
    int first = topo.first_leaf_of_subtree(subtree);
    for (int l = first; l < first + topo.leaves_per_subtree(); ++l)
        if (t.leaf_whole_free(l)) out.push_back(l);
    return out;
}

void take_whole_leaf(const Topology& topo, int leaf, TenantAllocation& a) {
    int base = topo.first_host_of_leaf(leaf);
    for (int h = 0; h < topo.hosts_per_leaf(); ++h) a.hosts.push_back(base + h);
    for (int k = 0; k < topo.leaf_up_ports(); ++k) a.l1_links.push_back({leaf, k});
}

void take_subtree_groups(const Topology& topo, int subtree, const std::vector<int>& groups, TenantAllocation& a) {
    for (int k = 0; k < topo.leaf_up_ports(); ++k)
        for (int t : groups) a.l2_links.push_back({topo.l2_switch(subtree, k), t});
}

std::vector<int> all_groups(const Topology& topo) {
    std::vector<int> g(static_cast<std::size_t>(topo.l2_up_ports()));
    std::iota(g.begin(), g.end(), 0);
    return g;
}

// Sub-trees in most-used order: ascending free hosts, then free groups, then index.
std::vector<int> most_used_subtrees(const LinkTable& t) {
    std::vector<int> order(static_cast<std::size_t>(t.topology().subtree_count()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::tuple(t.subtree_free_hosts(a), t.free_groups(a).count(), a) <
               std::tuple(t.subtree_free_hosts(b), t.free_groups(b).count(), b);
    });
    return order;
}

}  // namespace

std::vector<int> most_used_leaves(const LinkTable& table, int first_leaf, int count) {
    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), first_leaf);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::tuple(table.free_host_count(a), table.free_up_ports(a).count(), a) <
               std::tuple(table.free_host_count(b), table.free_up_ports(b).count(), b);
    });
    return order;
}

std::vector<SearchPlan> level2_plans(const Topology& topo, int n, const AllocOptions& opt) {
    std::vector<SearchPlan> plans;
    if (n < 2 || n > topo.subtree_capacity(2)) return plans;
    int ratio = opt.oversub_aware ? topo.oversubscription_ceil(1) : 1;
    for (int d : divisor_order(std::min(n, topo.hosts_per_leaf()), ratio)) {
        int q = n / d, r = n % d;
        if (q == 1 && r == 0) continue;  // a single leaf is the level-1 case
        if (q + (r > 0 ? 1 : 0) > topo.leaves_per_subtree()) continue;
        int s = ceil_div(d, ratio), rs = ceil_div(r, ratio);
        if (s > topo.leaf_up_ports()) continue;
        plans.push_back({2, d, q, r, s, rs});
    }
    return plans;
}

std::vector<SearchPlan> level3_plans(const Topology& topo, int n, const AllocOptions& opt) {
    std::vector<SearchPlan> plans;
    if (topo.has_dummy_top() || n < 1 || n > topo.host_count()) return plans;
    int u = ceil_div(n, topo.hosts_per_leaf());
    int ratio = opt.oversub_aware ? topo.oversubscription_ceil(2) : 1;
    for (int d : divisor_order(std::min(u, topo.leaves_per_subtree()), ratio)) {
        int q = u / d, r = u % d;
        if (q + (r > 0 ? 1 : 0) > topo.subtree_count()) continue;
        int s = ceil_div(d, ratio), rs = ceil_div(r, ratio);
        // A single sub-tree needs no upper groups.
        if (q == 1 && r == 0) s = rs = 0;
        if (s > topo.l2_up_ports()) continue;
        plans.push_back({3, d, q, r, s, rs});
    }
    return plans;
}

std::optional<LinkAssignment> flap(const LinkTable& table, int d, int q, int r, std::span<const int> leaves, int s,
                                   int rs) {
    if (d < 1 || q < 1 || r < 0 || s < 0 || s > d || rs > s) return std::nullopt;
    std::vector<Unit> units;
    units.reserve(leaves.size());
    for (int l : leaves) units.push_back({l, table.free_host_count(l), table.free_up_ports(l)});
    Search search{units, d, q, r, s, rs, {}, {}};
    auto found = search.run(static_cast<std::size_t>(table.topology().leaf_up_ports()));
    if (!found) return std::nullopt;
    return LinkAssignment{found->repeated, found->common, found->unique, found->unique_mask};
}

std::optional<SubtreeAssignment> flap2(const LinkTable& table, int d, int q, int r, int s, int rs) {
    if (d < 1 || q < 1 || r < 0 || s < 0 || rs > s) return std::nullopt;
    const Topology& topo = table.topology();
    std::vector<Unit> units;
    for (int st : most_used_subtrees(table)) {
        int whole = static_cast<int>(whole_free_leaves(table, st).size());
        units.push_back({st, whole, table.free_groups(st)});
    }
    Search search{units, d, q, r, s, rs, {}, {}};
    auto found = search.run(static_cast<std::size_t>(topo.l2_up_ports()));
    if (!found) return std::nullopt;
    return SubtreeAssignment{found->repeated, found->common, found->unique, found->unique_mask};
}

std::optional<TenantAllocation> try_plan(const LinkTable& table, const SearchPlan& plan, TenantId id, int n) {
    const Topology& topo = table.topology();
    TenantAllocation a;
    a.id = id;
    a.requested = n;
    a.shape = {plan.level, plan.q, plan.d, plan.r};

    if (plan.level == 2) {
        for (int st : most_used_subtrees(table)) {
            if (table.subtree_free_hosts(st) < n) continue;
            auto leaves = most_used_leaves(table, topo.first_leaf_of_subtree(st), topo.leaves_per_subtree());
            auto found = flap(table, plan.d, plan.q, plan.r, leaves, plan.s, plan.rs);
            if (!found) continue;
            auto ports = found->common.ports();
            for (int leaf : found->repeated) {
                for (int h : lowest_free_hosts(table, leaf, plan.d)) a.hosts.push_back(h);
                for (int k : ports) a.l1_links.push_back({leaf, k});
            }
            if (found->unique >= 0) {
                for (int h : lowest_free_hosts(table, found->unique, plan.r)) a.hosts.push_back(h);
                for (int k : found->unique_ports.ports()) a.l1_links.push_back({found->unique, k});
            }
            a.canonicalize();
            return a;
        }
        return std::nullopt;
    }

    if (plan.level == 3) {
        auto found = flap2(table, plan.d, plan.q, plan.r, plan.s, plan.rs);
        if (!found) return std::nullopt;
        bool spread = found->repeated.size() > 1 || found->unique >= 0;
        auto place = [&](int st, int leaves, const PortMask& groups) {
            auto whole = whole_free_leaves(table, st);
            for (int i = 0; i < leaves; ++i) take_whole_leaf(topo, whole[static_cast<std::size_t>(i)], a);
            if (spread) take_subtree_groups(topo, st, groups.ports(), a);
        };
        for (int st : found->repeated) place(st, plan.d, found->common);
        if (found->unique >= 0) place(found->unique, plan.r, found->unique_groups);
        a.canonicalize();
        return a;
    }
    return std::nullopt;
}

std::optional<TenantAllocation> propose_laas(const LinkTable& table, TenantId id, int n, const AllocOptions& opt) {
    const Topology& topo = table.topology();
    if (n < 1 || n > table.free_host_total()) return std::nullopt;

    if (n <= topo.hosts_per_leaf()) {
        for (int leaf : most_used_leaves(table, 0, topo.leaf_count())) {
            if (table.free_host_count(leaf) < n) continue;
            TenantAllocation a;
            a.id = id;
            a.requested = n;
            a.hosts = lowest_free_hosts(table, leaf, n);
            a.shape = {1, 1, n, 0};
            return a;
        }
    }
    for (const auto& plan : level2_plans(topo, n, opt))
        if (auto a = try_plan(table, plan, id, n)) return a;
    for (const auto& plan : level3_plans(topo, n, opt))
        if (auto a = try_plan(table, plan, id, n)) return a;
    return std::nullopt;
}

std::optional<TenantAllocation> propose_simple(const LinkTable& table, TenantId id, int n) {
    const Topology& topo = table.topology();
    if (n < 1 || n > topo.host_count()) return std::nullopt;
    MinLevel ml = topo.min_level(n);
    TenantAllocation a;
    a.id = id;
    a.requested = n;
    a.shape = {ml.level, ml.subtrees, ml.level == 1 ? n : topo.subtree_capacity(ml.level - 1), 0};

    if (ml.level == 1) {
        // One empty leaf, kept whole.
        for (int leaf = 0; leaf < topo.leaf_count(); ++leaf) {
            if (table.free_host_count(leaf) != topo.hosts_per_leaf()) continue;
            int base = topo.first_host_of_leaf(leaf);
            for (int h = 0; h < topo.hosts_per_leaf(); ++h) a.hosts.push_back(base + h);
            a.shape = {1, 1, topo.hosts_per_leaf(), 0};
            return a;
        }
        return std::nullopt;
    }
    if (ml.level == 2) {
        for (int st : most_used_subtrees(table)) {
            auto whole = whole_free_leaves(table, st);
            if (static_cast<int>(whole.size()) < ml.subtrees) continue;
            for (int i = 0; i < ml.subtrees; ++i) take_whole_leaf(topo, whole[static_cast<std::size_t>(i)], a);
            a.canonicalize();
            return a;
        }
        return std::nullopt;
    }
    std::vector<int> empty;
    for (int st = 0; st < topo.subtree_count() && static_cast<int>(empty.size()) < ml.subtrees; ++st) {
        if (static_cast<int>(whole_free_leaves(table, st).size()) == topo.leaves_per_subtree() &&
            static_cast<int>(table.free_groups(st).count()) == topo.l2_up_ports())
            empty.push_back(st);
    }
    if (static_cast<int>(empty.size()) < ml.subtrees) return std::nullopt;
    for (int st : empty) {
        for (int l : whole_free_leaves(table, st)) take_whole_leaf(topo, l, a);
        if (ml.subtrees > 1) take_subtree_groups(topo, st, all_groups(topo), a);
    }
    a.canonicalize();
    return a;
}

namespace {

// Extended Simple inside one 2-level sub-tree: whole empty leaves plus one
// leaf without an expander (all its up-links free) for the remainder. The
// tenant owns every up-link of every leaf it touches.
bool ext_leaves(const LinkTable& table, int subtree, int n, TenantAllocation& a) {
    const Topology& topo = table.topology();
    int full = n / topo.hosts_per_leaf();
    int rem = n % topo.hosts_per_leaf();
    auto whole = whole_free_leaves(table, subtree);
    if (static_cast<int>(whole.size()) < full) return false;
    std::vector<int> take(whole.begin(), whole.begin() + full);
    int partial = -1;
    if (rem > 0) {
        for (int leaf : most_used_leaves(table, topo.first_leaf_of_subtree(subtree), topo.leaves_per_subtree())) {
            if (std::find(take.begin(), take.end(), leaf) != take.end()) continue;
            if (table.free_host_count(leaf) < rem) continue;
            if (static_cast<int>(table.free_up_ports(leaf).count()) != topo.leaf_up_ports()) continue;
            partial = leaf;
            break;
        }
        if (partial < 0) return false;
    }
    for (int leaf : take) take_whole_leaf(topo, leaf, a);
    if (partial >= 0) {
        for (int h : lowest_free_hosts(table, partial, rem)) a.hosts.push_back(h);
        for (int k = 0; k < topo.leaf_up_ports(); ++k) a.l1_links.push_back({partial, k});
    }
    return true;
}

bool subtree_empty(const LinkTable& table, int st) {
    const Topology& topo = table.topology();
    return static_cast<int>(whole_free_leaves(table, st).size()) == topo.leaves_per_subtree() &&
           static_cast<int>(table.free_groups(st).count()) == topo.l2_up_ports();
}

}  // namespace

std::optional<TenantAllocation> propose_extended_simple(const LinkTable& table, TenantId id, int n) {
    const Topology& topo = table.topology();
    if (n < 1 || n > table.free_host_total()) return std::nullopt;
    MinLevel ml = topo.min_level(n);
    TenantAllocation a;
    a.id = id;
    a.requested = n;
    a.shape = {ml.level, ml.subtrees, ml.level == 1 ? n : topo.subtree_capacity(ml.level - 1), 0};

    if (ml.level == 1) {
        // Fits a leaf: share any leaf, no links.
        for (int leaf : most_used_leaves(table, 0, topo.leaf_count())) {
            if (table.free_host_count(leaf) < n) continue;
            a.hosts = lowest_free_hosts(table, leaf, n);
            return a;
        }
        return std::nullopt;
    }
    if (ml.level == 2) {
        for (int st : most_used_subtrees(table)) {
            if (table.subtree_free_hosts(st) < n) continue;
            TenantAllocation cand = a;
            if (ext_leaves(table, st, n, cand)) {
                cand.canonicalize();
                return cand;
            }
        }
        return std::nullopt;
    }

    int per = topo.subtree_capacity(2);
    int full = n / per, rem = n % per;
    std::vector<int> empty;
    for (int st = 0; st < topo.subtree_count(); ++st)
        if (subtree_empty(table, st)) empty.push_back(st);
    if (static_cast<int>(empty.size()) < full) return std::nullopt;
    std::vector<int> take(empty.begin(), empty.begin() + full);
    int partial = -1;
    TenantAllocation rest;
    if (rem > 0) {
        // The partial sub-tree must not already have an expander: all of its
        // level-2 up-links free.
        for (int st : most_used_subtrees(table)) {
            if (std::find(take.begin(), take.end(), st) != take.end()) continue;
            if (static_cast<int>(table.free_groups(st).count()) != topo.l2_up_ports()) continue;
            if (table.subtree_free_hosts(st) < rem) continue;
            TenantAllocation cand;
            if (!ext_leaves(table, st, rem, cand)) continue;
            partial = st;
            rest = std::move(cand);
            break;
        }
        if (partial < 0) return std::nullopt;
    }
    for (int st : take) {
        for (int l = topo.first_leaf_of_subtree(st); l < topo.first_leaf_of_subtree(st) + topo.leaves_per_subtree(); ++l)
            take_whole_leaf(topo, l, a);
        take_subtree_groups(topo, st, all_groups(topo), a);
    }
    if (partial >= 0) {
        a.hosts.insert(a.hosts.end(), rest.hosts.begin(), rest.hosts.end());
        a.l1_links.insert(a.l1_links.end(), rest.l1_links.begin(), rest.l1_links.end());
        take_subtree_groups(topo, partial, all_groups(topo), a);
    }
    a.canonicalize();
    return a;
}

std::optional<TenantAllocation> propose_unconstrained(const LinkTable& table, TenantId id, int n) {
    const Topology& topo = table.topology();
    if (n < 1 || n > table.free_host_total()) return std::nullopt;
    TenantAllocation a;
    a.id = id;
    a.requested = n;
    int need = n;
    for (int leaf : most_used_leaves(table, 0, topo.leaf_count())) {
        int take = std::min(need, table.free_host_count(leaf));
        if (take == 0) continue;
        for (int h : lowest_free_hosts(table, leaf, take)) a.hosts.push_back(h);
        need -= take;
        if (need == 0) break;
    }
    a.canonicalize();
    return a;
}

std::optional<TenantAllocation> propose(const LinkTable& table, Algorithm alg, TenantId id, int n,
                                        const AllocOptions& opt) {
    switch (alg) {
        case Algorithm::Laas: return propose_laas(table, id, n, opt);
        case Algorithm::Simple: return propose_simple(table, id, n);
        case Algorithm::ExtendedSimple: return propose_extended_simple(table, id, n);
        case Algorithm::Unconstrained: return propose_unconstrained(table, id, n);
    }
    return std::nullopt;
}

std::optional<TenantAllocation> allocate(LinkTable& table, Algorithm alg, TenantId id, int n, std::int64_t time,
                                         const AllocOptions& opt) {
    if (table.find(id)) throw ConflictError("tenant " + to_string(id) + " is already registered");
    auto a = propose(table, alg, id, n, opt);
    if (!a) return std::nullopt;
    table.commit(*a, time);
    return a;
}

}  // namespace laas

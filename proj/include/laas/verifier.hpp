#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "laas/allocation.hpp"
#include "laas/link_table.hpp"
#include "laas/topology.hpp"

namespace laas {

struct Verdict {
    bool ok = true;
    std::string rule;     ///< empty on pass
    std::string witness;  ///< offending leaf / spine / permutation

    static Verdict pass() { return {}; }
    static Verdict fail(std::string rule, std::string witness) { return {false, std::move(rule), std::move(witness)}; }
    explicit operator bool() const { return ok; }
};

/// Per-leaf host counts must read N_1 <= N_2 = ... = N_t once sorted.
Verdict check_placement(std::vector<int> per_leaf_counts);

/// Placement rule on a concrete allocation. Allocations spanning several
/// 2-level sub-trees must use whole leaves and obey the rule at sub-tree
/// granularity (leaf counts per sub-tree).
Verdict check_placement(const TenantAllocation& a, const Topology& topo);

/// Link rule: per-leaf up-link count matches the leaf's host count (slimmed
/// on oversubscribed levels; a whole leaf may hold all its up-links), the
/// repeated leaves share one spine set and the remainder leaf uses a subset
/// of it. Multi-sub-tree allocations get the same check on the upper groups,
/// which must also be replicated identically on every level-2 switch.
Verdict check_links(const TenantAllocation& a, const Topology& topo, bool oversub_aware = true);

enum class OracleMode { Exhaustive, Sampled };

struct OracleOptions {
    OracleMode mode = OracleMode::Exhaustive;
    int samples = 1000;
    std::uint64_t seed = 0x5eed;
    int link_capacity = 1;  ///< flows one directed link may carry
    int exhaustive_limit = 8;
};

/// Decides for each tested permutation of the tenant's hosts whether all
/// flows can be routed over the tenant's own links with no directed link
/// over capacity. Exact (backtracking over path choices).
Verdict routability_oracle(const Topology& topo, const TenantAllocation& a, const OracleOptions& opt = {});

/// True when the given leaf-to-leaf flows (source leaf, destination leaf)
/// route over the allocation's links.
bool routes(const Topology& topo, const TenantAllocation& a, const std::vector<std::pair<int, int>>& flows,
            int link_capacity = 1);

/// Exhaustive search for any host set and link assignment of `n` hosts on
/// the free resources of a 2-level tree that passes check_placement and
/// check_links. Intended for trees of a handful of hosts.
std::optional<TenantAllocation> brute_force_feasible(const LinkTable& table, int n);

struct LogSummary {
    long long adds = 0;
    long long rems = 0;
    long long l1_added = 0;
    long long l1_removed = 0;
    long long l2_added = 0;
    long long l2_removed = 0;
};

/// Replays a transaction log on an empty table, asserting disjointness and
/// link conservation at every record and, for logs produced by an isolating
/// algorithm (laas or simple, or no "# alg" header), both theorem checks on
/// every ADD. Throws ValidationError naming the line on the first violation.
LogSummary check_log(std::istream& log, const Topology& topo);

/// The two summary lines printed by the checker.
std::string format_summary(const LogSummary& s);

/// Rebuilds the topology from the checker's counts: hosts per leaf, leaves
/// per 2-level sub-tree, and the switch totals of levels 1..3. A single
/// level-3 switch over a single sub-tree denotes a 2-level tree.
Topology topology_from_counts(int hosts_per_leaf, int leaves_per_subtree, int total_l1, int total_l2, int total_l3);

}  // namespace laas

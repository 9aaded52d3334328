#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laas/allocation.hpp"
#include "laas/link_table.hpp"
#include "laas/port_mask.hpp"

namespace laas {

enum class Algorithm { Laas, Simple, ExtendedSimple, Unconstrained };

std::string to_string(Algorithm a);
/// Accepts "laas", "simple", "extended-simple" (or "extendedSimple", "ext"),
/// "unconstrained".
std::optional<Algorithm> parse_algorithm(const std::string& s);

struct AllocOptions {
    /// Slim the number of common spines on oversubscribed levels.
    bool oversub_aware = true;
};

/// One (D, Q, R) decomposition. Level 2 counts hosts per leaf, level 3
/// counts whole leaves per sub-tree. `s` spines (level 2) or upper groups
/// (level 3) are required for the repeated units and `rs` for the remainder.
struct SearchPlan {
    int level = 2;
    int d = 0;
    int q = 0;
    int r = 0;
    int s = 0;
    int rs = 0;
    bool operator==(const SearchPlan&) const = default;
};

/// Plans in the order laas_allocate tries them.
std::vector<SearchPlan> level2_plans(const Topology& topo, int n, const AllocOptions& opt = {});
std::vector<SearchPlan> level3_plans(const Topology& topo, int n, const AllocOptions& opt = {});

/// Result of a leaf-level search: `repeated` leaves share `common`
/// (|common| = S); the optional `unique` leaf uses `unique_ports` within it.
struct LinkAssignment {
    std::vector<int> repeated;
    PortMask common;
    int unique = -1;
    PortMask unique_ports;
};

/// Depth-first search for Q leaves with >= D free hosts whose free up-ports
/// share S common spines, plus (R > 0) one more leaf with >= R free hosts and
/// `rs` free ports inside that set. `leaves` is searched most-used first.
std::optional<LinkAssignment> flap(const LinkTable& table, int d, int q, int r, std::span<const int> leaves, int s,
                                   int rs);

/// Same search at sub-tree granularity: units are 2-level sub-trees, their
/// capacity is the number of whole free leaves and their mask the free
/// upper groups.
struct SubtreeAssignment {
    std::vector<int> repeated;
    PortMask common;
    int unique = -1;
    PortMask unique_groups;
};

std::optional<SubtreeAssignment> flap2(const LinkTable& table, int d, int q, int r, int s, int rs);

/// Expands one plan into a concrete allocation, or nothing when the plan
/// has no assignment in the current table.
std::optional<TenantAllocation> try_plan(const LinkTable& table, const SearchPlan& plan, TenantId id, int n);

/// Pure searches over the table; nothing is committed.
std::optional<TenantAllocation> propose_laas(const LinkTable& table, TenantId id, int n, const AllocOptions& opt = {});
std::optional<TenantAllocation> propose_simple(const LinkTable& table, TenantId id, int n);
std::optional<TenantAllocation> propose_extended_simple(const LinkTable& table, TenantId id, int n);
std::optional<TenantAllocation> propose_unconstrained(const LinkTable& table, TenantId id, int n);

std::optional<TenantAllocation> propose(const LinkTable& table, Algorithm alg, TenantId id, int n,
                                        const AllocOptions& opt = {});

/// Searches and, on success, commits. Returns the committed allocation or
/// nothing; the table is untouched on failure.
std::optional<TenantAllocation> allocate(LinkTable& table, Algorithm alg, TenantId id, int n, std::int64_t time = 0,
                                         const AllocOptions& opt = {});

inline std::optional<TenantAllocation> laas_allocate(LinkTable& t, TenantId id, int n, const AllocOptions& opt = {}) {
    return allocate(t, Algorithm::Laas, id, n, 0, opt);
}
inline std::optional<TenantAllocation> simple_allocate(LinkTable& t, TenantId id, int n) {
    return allocate(t, Algorithm::Simple, id, n);
}
inline std::optional<TenantAllocation> extended_simple_allocate(LinkTable& t, TenantId id, int n) {
    return allocate(t, Algorithm::ExtendedSimple, id, n);
}
inline std::optional<TenantAllocation> unconstrained_allocate(LinkTable& t, TenantId id, int n) {
    return allocate(t, Algorithm::Unconstrained, id, n);
}

/// Leaves of one 2-level sub-tree, most-used first: ascending free hosts,
/// then free up-ports, then index.
std::vector<int> most_used_leaves(const LinkTable& table, int first_leaf, int count);

}  // namespace laas

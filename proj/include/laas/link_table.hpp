#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "laas/allocation.hpp"
#include "laas/port_mask.hpp"
#include "laas/topology.hpp"
#include "laas/transaction_log.hpp"

namespace laas {

/// Mutable allocation state of one cloud: host ownership, leaf up-link
/// ownership, level-2 up-link ownership, faulty links and the tenant
/// registry. Single writer; copies are cheap consistent snapshots.
///
/// Free masks:
///   free_up_ports(leaf)     bit k set when leaf up-port k is unowned and healthy
///   free_groups(subtree)    bit t set when up-port t is unowned and healthy on
///                           every level-2 switch of the sub-tree (the
///                           representative mask of the upper groups)
class LinkTable {
public:
    explicit LinkTable(Topology topo);

    const Topology& topology() const { return topo_; }

    const PortMask& free_hosts(int leaf) const { return free_hosts_[static_cast<std::size_t>(leaf)]; }
    int free_host_count(int leaf) const { return static_cast<int>(free_hosts(leaf).count()); }
    const PortMask& free_up_ports(int leaf) const { return free_l1_[static_cast<std::size_t>(leaf)]; }
    const PortMask& free_groups(int subtree) const { return free_l2_[static_cast<std::size_t>(subtree)]; }

    /// Leaf with every host free and every up-port free.
    bool leaf_whole_free(int leaf) const;
    int subtree_free_hosts(int subtree) const { return subtree_free_[static_cast<std::size_t>(subtree)]; }

    bool host_free(int host) const;
    std::optional<TenantId> host_owner(int host) const;
    std::optional<TenantId> link_owner(const LinkRef& ref) const;
    bool is_faulty(const LinkRef& ref) const;

    int free_host_total() const { return free_host_total_; }
    int owned_l1_links() const { return owned_l1_; }
    int owned_l2_links() const { return owned_l2_; }
    int faulty_links() const { return static_cast<int>(faulty_.size()); }
    /// Links that are neither owned nor faulty.
    int free_l1_links() const;
    int free_l2_links() const;

    const std::map<TenantId, TenantAllocation>& tenants() const { return tenants_; }
    const TenantAllocation* find(TenantId id) const;
    /// Sum of requested host counts over registered tenants.
    long long requested_hosts() const { return requested_total_; }

    /// Registers the allocation atomically. Throws ConflictError naming the
    /// first host or link that is not free, or a malformed allocation;
    /// the table is unchanged on error.
    void commit(const TenantAllocation& alloc, std::int64_t time = 0);

    /// Frees everything owned by the tenant. Throws NotFoundError.
    TenantAllocation release(TenantId id, std::int64_t time = 0);

    /// Excludes the link from future allocations. A link already owned stays
    /// with its tenant and a warning is recorded.
    void mark_faulty(const LinkRef& ref);
    void unmark_faulty(const LinkRef& ref);

    const std::vector<std::string>& warnings() const { return warnings_; }

    /// Every commit and release appends a record while logging is enabled.
    void set_logging(bool on) { logging_ = on; }
    const std::vector<LogRecord>& log() const { return log_; }
    void clear_log() { log_.clear(); }

private:
    static constexpr std::uint64_t kFree = ~std::uint64_t{0};

    void validate_link(const LinkRef& ref) const;
    std::size_t slot(const LinkRef& ref) const;
    void refresh_leaf(int leaf);
    void refresh_subtree_groups(int subtree);

    Topology topo_;
    std::vector<std::uint64_t> host_owner_;
    std::vector<std::uint64_t> l1_owner_;
    std::vector<std::uint64_t> l2_owner_;
    std::vector<bool> l1_faulty_;
    std::vector<bool> l2_faulty_;
    std::vector<LinkRef> faulty_;

    std::vector<PortMask> free_hosts_;
    std::vector<PortMask> free_l1_;
    std::vector<PortMask> free_l2_;
    std::vector<int> subtree_free_;
    int free_host_total_ = 0;
    int owned_l1_ = 0;
    int owned_l2_ = 0;
    long long requested_total_ = 0;

    std::map<TenantId, TenantAllocation> tenants_;
    std::vector<std::string> warnings_;
    bool logging_ = false;
    std::vector<LogRecord> log_;
};

}  // namespace laas

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "laas/allocation.hpp"
#include "laas/name_map.hpp"
#include "laas/topology.hpp"

namespace laas {

/// Cloud-controller script creating the tenant's isolation aggregate and
/// adding its hosts; `k` numbers the script (cmd-<k>.log).
std::string openstack_add_script(TenantId id, const std::vector<std::string>& hosts, int k);

/// Script removing the hosts, then the aggregate and the tenant.
std::string openstack_remove_script(TenantId id, const std::vector<std::string>& hosts, int k);

/// Physical host names of an allocation, in host-index order.
std::vector<std::string> host_names(const TenantAllocation& a, const NameMap& names);

/// One switch entry of a tenant's switch group.
struct SwitchPorts {
    std::string name;
    std::vector<int> ports;  ///< physical, ascending
};

/// Switches whose up-ports the tenant owns, leaves first then level-2
/// switches; within a level, fewer ports first, then by index.
std::vector<SwitchPorts> switch_ports(const TenantAllocation& a, const Topology& topo, const NameMap& names);

/// SDN port groups (groups.conf) for every registered tenant, by id.
std::string groups_conf(const std::map<TenantId, TenantAllocation>& tenants, const Topology& topo,
                        const NameMap& names);

/// Writes `content` to a temporary file next to `path` and renames it over.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace laas

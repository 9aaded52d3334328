#pragma once

#include <doctest.h>

#include <vector>

#include "laas/allocation.hpp"
#include "laas/link_table.hpp"

namespace laas::test {

inline TenantAllocation make_alloc(std::uint64_t id, const std::vector<int>& hosts,
                                   const std::vector<UpLink>& l1 = {}, const std::vector<UpLink>& l2 = {},
                                   int requested = 0) {
    TenantAllocation a;
    a.id = tenant_id(id);
    a.hosts = hosts;
    a.requested = requested ? requested : static_cast<int>(hosts.size());
    a.l1_links = l1;
    a.l2_links = l2;
    a.canonicalize();
    return a;
}

/// Hosts [first, first + n).
inline std::vector<int> host_range(int first, int n) {
    std::vector<int> v;
    for (int i = 0; i < n; ++i) v.push_back(first + i);
    return v;
}

/// Links of one switch to the listed ports.
inline std::vector<UpLink> links(int sw, const std::vector<int>& ports) {
    std::vector<UpLink> v;
    for (int p : ports) v.push_back({sw, p});
    return v;
}

inline std::vector<UpLink> operator+(std::vector<UpLink> a, const std::vector<UpLink>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

/// Every observable field of the table.
inline bool same_state(const LinkTable& a, const LinkTable& b) {
    const Topology& t = a.topology();
    if (a.free_host_total() != b.free_host_total() || a.owned_l1_links() != b.owned_l1_links() ||
        a.owned_l2_links() != b.owned_l2_links() || a.faulty_links() != b.faulty_links() ||
        a.requested_hosts() != b.requested_hosts() || a.tenants().size() != b.tenants().size()) {
        return false;
    }
    for (int l = 0; l < t.leaf_count(); ++l) {
        if (!(a.free_hosts(l) == b.free_hosts(l)) || !(a.free_up_ports(l) == b.free_up_ports(l))) return false;
        for (int p = 0; p < t.leaf_up_ports(); ++p) {
            if (a.link_owner({1, {l, p}}) != b.link_owner({1, {l, p}})) return false;
        }
    }
    for (int s = 0; s < t.subtree_count(); ++s) {
        if (!(a.free_groups(s) == b.free_groups(s)) || a.subtree_free_hosts(s) != b.subtree_free_hosts(s)) return false;
    }
    for (int sw = 0; sw < t.l2_count(); ++sw) {
        for (int p = 0; p < t.l2_up_ports(); ++p) {
            if (a.link_owner({2, {sw, p}}) != b.link_owner({2, {sw, p}})) return false;
        }
    }
    for (int h = 0; h < t.host_count(); ++h) {
        if (a.host_owner(h) != b.host_owner(h)) return false;
    }
    return true;
}

/// Free + owned + unowned-faulty accounts for every link, and free + owned
/// for every host.
inline void check_conservation(const LinkTable& t) {
    const Topology& topo = t.topology();
    int dead1 = 0, dead2 = 0;
    for (int l = 0; l < topo.leaf_count(); ++l)
        for (int p = 0; p < topo.leaf_up_ports(); ++p)
            dead1 += t.is_faulty({1, {l, p}}) && !t.link_owner({1, {l, p}}) ? 1 : 0;
    for (int sw = 0; sw < topo.l2_count(); ++sw)
        for (int p = 0; p < topo.l2_up_ports(); ++p)
            dead2 += t.is_faulty({2, {sw, p}}) && !t.link_owner({2, {sw, p}}) ? 1 : 0;
    CHECK(t.free_l1_links() + t.owned_l1_links() + dead1 == topo.total_l1_links());
    CHECK(t.free_l2_links() + t.owned_l2_links() + dead2 == topo.total_l2_links());
    long long hosts = 0, l1 = 0, l2 = 0;
    for (const auto& [id, a] : t.tenants()) {
        hosts += static_cast<long long>(a.hosts.size());
        l1 += static_cast<long long>(a.l1_links.size());
        l2 += static_cast<long long>(a.l2_links.size());
    }
    CHECK(hosts + t.free_host_total() == topo.host_count());
    CHECK(l1 == t.owned_l1_links());
    CHECK(l2 == t.owned_l2_links());
}

}  // namespace laas::test

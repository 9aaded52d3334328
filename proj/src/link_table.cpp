#include "laas/link_table.hpp"

#include <algorithm>
#include <set>

#include "laas/error.hpp"

namespace laas {

LinkTable::LinkTable(Topology topo) : topo_(std::move(topo)) {
    const auto hosts = static_cast<std::size_t>(topo_.host_count());
    const auto leaves = static_cast<std::size_t>(topo_.leaf_count());
    const auto subtrees = static_cast<std::size_t>(topo_.subtree_count());
    host_owner_.assign(hosts, kFree);
    l1_owner_.assign(static_cast<std::size_t>(topo_.total_l1_links()), kFree);
    l2_owner_.assign(static_cast<std::size_t>(topo_.total_l2_links()), kFree);
    l1_faulty_.assign(l1_owner_.size(), false);
    l2_faulty_.assign(l2_owner_.size(), false);
    free_hosts_.assign(leaves, PortMask(static_cast<std::size_t>(topo_.hosts_per_leaf()), true));
    free_l1_.assign(leaves, PortMask(static_cast<std::size_t>(topo_.leaf_up_ports()), true));
    free_l2_.assign(subtrees, PortMask(static_cast<std::size_t>(topo_.l2_up_ports()), true));
    subtree_free_.assign(subtrees, topo_.hosts_per_leaf() * topo_.leaves_per_subtree());
    free_host_total_ = topo_.host_count();
}

bool LinkTable::leaf_whole_free(int leaf) const {
    return free_host_count(leaf) == topo_.hosts_per_leaf() &&
           static_cast<int>(free_up_ports(leaf).count()) == topo_.leaf_up_ports();
}

bool LinkTable::host_free(int host) const { return host_owner_.at(static_cast<std::size_t>(host)) == kFree; }

std::optional<TenantId> LinkTable::host_owner(int host) const {
    auto o = host_owner_.at(static_cast<std::size_t>(host));
    if (o == kFree) return std::nullopt;
    return tenant_id(o);
}

void LinkTable::validate_link(const LinkRef& ref) const {
    if (ref.level == 1) {
        if (ref.link.sw < 0 || ref.link.sw >= topo_.leaf_count() || ref.link.port < 0 ||
            ref.link.port >= topo_.leaf_up_ports()) {
            throw NotFoundError("no such link " + to_string(ref));
        }
        return;
    }
    if (ref.level == 2) {
        if (ref.link.sw < 0 || ref.link.sw >= topo_.l2_count() || ref.link.port < 0 ||
            ref.link.port >= topo_.l2_up_ports()) {
            throw NotFoundError("no such link " + to_string(ref));
        }
        return;
    }
    throw NotFoundError("no such link " + to_string(ref));
}

std::size_t LinkTable::slot(const LinkRef& ref) const {
    int width = ref.level == 1 ? topo_.leaf_up_ports() : topo_.l2_up_ports();
    return static_cast<std::size_t>(ref.link.sw * width + ref.link.port);
}

std::optional<TenantId> LinkTable::link_owner(const LinkRef& ref) const {
    validate_link(ref);
    auto o = ref.level == 1 ? l1_owner_[slot(ref)] : l2_owner_[slot(ref)];
    if (o == kFree) return std::nullopt;
    return tenant_id(o);
}

bool LinkTable::is_faulty(const LinkRef& ref) const {
    validate_link(ref);
    return ref.level == 1 ? l1_faulty_[slot(ref)] : l2_faulty_[slot(ref)];
}

int LinkTable::free_l1_links() const {
    int n = 0;
    for (std::size_t i = 0; i < l1_owner_.size(); ++i) n += (l1_owner_[i] == kFree && !l1_faulty_[i]) ? 1 : 0;
    return n;
}

int LinkTable::free_l2_links() const {
    int n = 0;
    for (std::size_t i = 0; i < l2_owner_.size(); ++i) n += (l2_owner_[i] == kFree && !l2_faulty_[i]) ? 1 : 0;
    return n;
}

const TenantAllocation* LinkTable::find(TenantId id) const {
    auto it = tenants_.find(id);
    return it == tenants_.end() ? nullptr : &it->second;
}

void LinkTable::refresh_leaf(int leaf) {
    const int width = topo_.leaf_up_ports();
    PortMask m(static_cast<std::size_t>(width));
    for (int k = 0; k < width; ++k) {
        auto s = static_cast<std::size_t>(leaf * width + k);
        if (l1_owner_[s] == kFree && !l1_faulty_[s]) m.set(static_cast<std::size_t>(k));
    }
    free_l1_[static_cast<std::size_t>(leaf)] = m;
}

void LinkTable::refresh_subtree_groups(int subtree) {
    const int width = topo_.l2_up_ports();
    PortMask m(static_cast<std::size_t>(width), true);
    for (int k = 0; k < topo_.leaf_up_ports(); ++k) {
        int sw = topo_.l2_switch(subtree, k);
        for (int t = 0; t < width; ++t) {
            auto s = static_cast<std::size_t>(sw * width + t);
            if (l2_owner_[s] != kFree || l2_faulty_[s]) m.reset(static_cast<std::size_t>(t));
        }
    }
    free_l2_[static_cast<std::size_t>(subtree)] = m;
}

void LinkTable::commit(const TenantAllocation& alloc, std::int64_t time) {
    const std::string who = "tenant " + to_string(alloc.id);
    if (tenants_.count(alloc.id)) throw ConflictError(who + " is already registered");
    if (alloc.hosts.empty()) throw ConflictError(who + " has no hosts");
    if (alloc.requested < 1) throw ConflictError(who + " requests fewer than one host");

    std::set<int> seen_hosts;
    for (int h : alloc.hosts) {
        if (h < 0 || h >= topo_.host_count()) throw ConflictError(who + ": host " + std::to_string(h) + " does not exist");
        if (!seen_hosts.insert(h).second) throw ConflictError(who + ": host " + std::to_string(h) + " listed twice");
        auto owner = host_owner_[static_cast<std::size_t>(h)];
        if (owner != kFree) {
            throw ConflictError(who + ": host " + std::to_string(h) + " is owned by tenant " + std::to_string(owner));
        }
    }
    auto check_links = [&](const std::vector<UpLink>& links, int level) {
        std::set<UpLink> seen;
        for (const auto& l : links) {
            LinkRef ref{level, l};
            try {
                validate_link(ref);
            } catch (const NotFoundError& e) {
                throw ConflictError(who + ": " + e.what());
            }
            if (!seen.insert(l).second) throw ConflictError(who + ": link " + to_string(ref) + " listed twice");
            auto s = slot(ref);
            auto owner = level == 1 ? l1_owner_[s] : l2_owner_[s];
            if (owner != kFree) {
                throw ConflictError(who + ": link " + to_string(ref) + " is owned by tenant " + std::to_string(owner));
            }
            if (level == 1 ? l1_faulty_[s] : l2_faulty_[s]) {
                throw ConflictError(who + ": link " + to_string(ref) + " is faulty");
            }
        }
    };
    check_links(alloc.l1_links, 1);
    check_links(alloc.l2_links, 2);

    // Level-2 up-links must be replicated identically over every level-2
    // switch of a sub-tree, and only whole leaves may use them.
    if (!alloc.l2_links.empty()) {
        std::map<int, std::vector<std::set<int>>> per_subtree;
        for (const auto& l : alloc.l2_links) {
            auto& v = per_subtree[topo_.subtree_of_l2(l.sw)];
            v.resize(static_cast<std::size_t>(topo_.leaf_up_ports()));
            v[static_cast<std::size_t>(topo_.group_of_l2(l.sw))].insert(l.port);
        }
        std::map<int, int> hosts_on_leaf;
        for (int h : alloc.hosts) ++hosts_on_leaf[topo_.leaf_of_host(h)];
        for (const auto& [subtree, groups] : per_subtree) {
            for (const auto& g : groups) {
                if (g != groups.front()) {
                    throw ConflictError(who + ": level-2 up-links of sub-tree " + std::to_string(subtree) +
                                        " differ between upper groups");
                }
            }
            // A partially used leaf is tolerated only when the tenant takes
            // every up-link of it, so no other tenant on that leaf can reach
            // the upper groups.
            for (const auto& [leaf, n] : hosts_on_leaf) {
                if (topo_.subtree_of_leaf(leaf) != subtree || n == topo_.hosts_per_leaf()) continue;
                int owned = 0;
                for (const auto& l : alloc.l1_links) owned += l.sw == leaf ? 1 : 0;
                if (owned != topo_.leaf_up_ports()) {
                    throw ConflictError(who + ": leaf " + std::to_string(leaf) +
                                        " is partially used by a tenant holding level-2 up-links");
                }
            }
        }
    }

    // Apply.
    const auto raw = static_cast<std::uint64_t>(alloc.id);
    std::set<int> leaves, subtrees;
    for (int h : alloc.hosts) {
        host_owner_[static_cast<std::size_t>(h)] = raw;
        int leaf = topo_.leaf_of_host(h);
        free_hosts_[static_cast<std::size_t>(leaf)].reset(static_cast<std::size_t>(h - topo_.first_host_of_leaf(leaf)));
        --subtree_free_[static_cast<std::size_t>(topo_.subtree_of_leaf(leaf))];
    }
    free_host_total_ -= static_cast<int>(alloc.hosts.size());
    for (const auto& l : alloc.l1_links) {
        l1_owner_[slot({1, l})] = raw;
        leaves.insert(l.sw);
    }
    for (const auto& l : alloc.l2_links) {
        l2_owner_[slot({2, l})] = raw;
        subtrees.insert(topo_.subtree_of_l2(l.sw));
    }
    for (int leaf : leaves) refresh_leaf(leaf);
    for (int s : subtrees) refresh_subtree_groups(s);
    owned_l1_ += static_cast<int>(alloc.l1_links.size());
    owned_l2_ += static_cast<int>(alloc.l2_links.size());
    requested_total_ += alloc.requested;

    auto [it, inserted] = tenants_.emplace(alloc.id, alloc);
    it->second.canonicalize();
    if (logging_) log_.push_back(LogRecord::add(it->second, time));
}

TenantAllocation LinkTable::release(TenantId id, std::int64_t time) {
    auto it = tenants_.find(id);
    if (it == tenants_.end()) throw NotFoundError("tenant " + to_string(id) + " is not registered");
    TenantAllocation alloc = std::move(it->second);
    tenants_.erase(it);

    std::set<int> leaves, subtrees;
    for (int h : alloc.hosts) {
        host_owner_[static_cast<std::size_t>(h)] = kFree;
        int leaf = topo_.leaf_of_host(h);
        free_hosts_[static_cast<std::size_t>(leaf)].set(static_cast<std::size_t>(h - topo_.first_host_of_leaf(leaf)));
        ++subtree_free_[static_cast<std::size_t>(topo_.subtree_of_leaf(leaf))];
    }
    free_host_total_ += static_cast<int>(alloc.hosts.size());
    for (const auto& l : alloc.l1_links) {
        l1_owner_[slot({1, l})] = kFree;
        leaves.insert(l.sw);
    }
    for (const auto& l : alloc.l2_links) {
        l2_owner_[slot({2, l})] = kFree;
        subtrees.insert(topo_.subtree_of_l2(l.sw));
    }
    for (int leaf : leaves) refresh_leaf(leaf);
    for (int s : subtrees) refresh_subtree_groups(s);
    owned_l1_ -= static_cast<int>(alloc.l1_links.size());
    owned_l2_ -= static_cast<int>(alloc.l2_links.size());
    requested_total_ -= alloc.requested;

    if (logging_) log_.push_back(LogRecord::rem(id, time));
    return alloc;
}

void LinkTable::mark_faulty(const LinkRef& ref) {
    validate_link(ref);
    auto s = slot(ref);
    auto& flags = ref.level == 1 ? l1_faulty_ : l2_faulty_;
    if (flags[s]) return;
    flags[s] = true;
    faulty_.push_back(ref);
    auto owner = ref.level == 1 ? l1_owner_[s] : l2_owner_[s];
    if (owner != kFree) {
        warnings_.push_back("faulty link " + to_string(ref) + " remains with tenant " + std::to_string(owner));
    }
    if (ref.level == 1) {
        refresh_leaf(ref.link.sw);
    } else {
        refresh_subtree_groups(topo_.subtree_of_l2(ref.link.sw));
    }
}

void LinkTable::unmark_faulty(const LinkRef& ref) {
    validate_link(ref);
    auto s = slot(ref);
    auto& flags = ref.level == 1 ? l1_faulty_ : l2_faulty_;
    if (!flags[s]) return;
    flags[s] = false;
    faulty_.erase(std::remove(faulty_.begin(), faulty_.end(), ref), faulty_.end());
    if (ref.level == 1) {
        refresh_leaf(ref.link.sw);
    } else {
        refresh_subtree_groups(topo_.subtree_of_l2(ref.link.sw));
    }
}

}  // namespace laas

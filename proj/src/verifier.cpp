#include "laas/verifier.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "laas/error.hpp"
#include "laas/random.hpp"
#include "laas/transaction_log.hpp"

namespace laas {

namespace {

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return "{" + s + "}";
}

std::map<int, int> hosts_per_leaf(const TenantAllocation& a, const Topology& topo) {
    std::map<int, int> out;
    for (int h : a.hosts) ++out[topo.leaf_of_host(h)];
    return out;
}

bool is_subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Shared by both granularities: `units` maps a unit to (size, sorted set).
// Repeated units (the largest size) must share one set; the remainder unit's
// set must lie inside it.
Verdict common_set_rule(const std::map<int, std::pair<int, std::vector<int>>>& units, const char* unit_name,
                        const char* set_name) {
    if (units.size() < 2) return Verdict::pass();
    int top = 0;
    for (const auto& [id, v] : units) top = std::max(top, v.first);
    const std::vector<int>* common = nullptr;
    int common_unit = -1;
    for (const auto& [id, v] : units) {
        if (v.first != top) continue;
        if (!common) {
            common = &v.second;
            common_unit = id;
        } else if (v.second != *common) {
            return Verdict::fail("common-" + std::string(set_name),
                                 std::string(unit_name) + " " + std::to_string(common_unit) + " uses " + join(*common) +
                                     " but " + unit_name + " " + std::to_string(id) + " uses " + join(v.second));
        }
    }
    for (const auto& [id, v] : units) {
        if (v.first == top) continue;
        if (!is_subset(v.second, *common)) {
            return Verdict::fail("remainder-subset", std::string(unit_name) + " " + std::to_string(id) + " uses " +
                                                         join(v.second) + " outside " + join(*common));
        }
    }
    return Verdict::pass();
}

}  // namespace

Verdict check_placement(std::vector<int> counts) {
    counts.erase(std::remove(counts.begin(), counts.end(), 0), counts.end());
    if (counts.size() <= 1) return Verdict::pass();
    std::sort(counts.begin(), counts.end());
    for (std::size_t i = 2; i < counts.size(); ++i) {
        if (counts[i] != counts[1]) {
            return Verdict::fail("placement", "N_2=" + std::to_string(counts[1]) + " != N_" + std::to_string(i + 1) +
                                                  "=" + std::to_string(counts[i]) + " in " + join(counts));
        }
    }
    return Verdict::pass();
}

Verdict check_placement(const TenantAllocation& a, const Topology& topo) {
    auto per_leaf = hosts_per_leaf(a, topo);
    std::map<int, int> leaves_per_subtree;
    for (const auto& [leaf, n] : per_leaf) ++leaves_per_subtree[topo.subtree_of_leaf(leaf)];
    if (leaves_per_subtree.size() <= 1) {
        std::vector<int> counts;
        for (const auto& [leaf, n] : per_leaf) counts.push_back(n);
        return check_placement(counts);
    }
    for (const auto& [leaf, n] : per_leaf) {
        if (n != topo.hosts_per_leaf()) {
            return Verdict::fail("whole-leaf", "leaf " + std::to_string(leaf) + " holds " + std::to_string(n) + " of " +
                                                   std::to_string(topo.hosts_per_leaf()) + " hosts");
        }
    }
    std::vector<int> counts;
    for (const auto& [st, n] : leaves_per_subtree) counts.push_back(n);
    auto v = check_placement(counts);
    if (!v) v.rule = "subtree-placement";
    return v;
}

Verdict check_links(const TenantAllocation& a, const Topology& topo, bool oversub_aware) {
    auto per_leaf = hosts_per_leaf(a, topo);
    std::map<int, std::vector<int>> ports;
    for (const auto& l : a.l1_links) {
        if (!per_leaf.count(l.sw)) {
            return Verdict::fail("link-without-host", "leaf " + std::to_string(l.sw) + " port " +
                                                          std::to_string(l.port) + " but no tenant host on it");
        }
        ports[l.sw].push_back(l.port);
    }
    for (auto& [leaf, p] : ports) std::sort(p.begin(), p.end());

    std::map<int, int> leaves_per_subtree;
    for (const auto& [leaf, n] : per_leaf) ++leaves_per_subtree[topo.subtree_of_leaf(leaf)];

    auto expected = [&](int flows, int level) { return oversub_aware ? topo.spines_for(flows, level) : flows; };

    if (leaves_per_subtree.size() <= 1) {
        if (!a.l2_links.empty()) {
            return Verdict::fail("unneeded-l2", "tenant within one sub-tree holds " +
                                                    std::to_string(a.l2_links.size()) + " level-2 up-links");
        }
        if (per_leaf.size() <= 1) {
            if (!a.l1_links.empty()) {
                return Verdict::fail("single-leaf-links", "single-leaf tenant holds " +
                                                              std::to_string(a.l1_links.size()) + " up-links");
            }
            return Verdict::pass();
        }
        std::map<int, std::pair<int, std::vector<int>>> units;
        for (const auto& [leaf, n] : per_leaf) {
            const auto& p = ports[leaf];
            int have = static_cast<int>(p.size());
            bool whole = n == topo.hosts_per_leaf() && have == topo.leaf_up_ports();
            if (have != expected(n, 1) && !whole) {
                return Verdict::fail("links-per-leaf", "leaf " + std::to_string(leaf) + " has " + std::to_string(n) +
                                                           " hosts and " + std::to_string(have) + " up-links");
            }
            units[leaf] = {n, p};
        }
        return common_set_rule(units, "leaf", "spines");
    }

    // Spread over several sub-trees: whole leaves holding all their
    // up-links, level-2 links replicated across the upper groups.
    for (const auto& [leaf, n] : per_leaf) {
        if (static_cast<int>(ports[leaf].size()) != topo.leaf_up_ports()) {
            return Verdict::fail("links-per-leaf", "leaf " + std::to_string(leaf) + " of a multi-sub-tree tenant has " +
                                                       std::to_string(ports[leaf].size()) + " of " +
                                                       std::to_string(topo.leaf_up_ports()) + " up-links");
        }
    }
    std::map<int, std::vector<std::set<int>>> groups;
    for (const auto& l : a.l2_links) {
        int st = topo.subtree_of_l2(l.sw);
        if (!leaves_per_subtree.count(st)) {
            return Verdict::fail("link-without-host", "level-2 switch " + std::to_string(l.sw) + " port " +
                                                          std::to_string(l.port) + " in a sub-tree without tenant hosts");
        }
        auto& g = groups[st];
        g.resize(static_cast<std::size_t>(topo.leaf_up_ports()));
        g[static_cast<std::size_t>(topo.group_of_l2(l.sw))].insert(l.port);
    }
    std::map<int, std::pair<int, std::vector<int>>> units;
    for (const auto& [st, n] : leaves_per_subtree) {
        auto it = groups.find(st);
        std::vector<int> rep;
        if (it != groups.end()) {
            for (std::size_t k = 0; k < it->second.size(); ++k) {
                if (it->second[k] != it->second.front()) {
                    return Verdict::fail("replication", "sub-tree " + std::to_string(st) + " upper group " +
                                                            std::to_string(k) + " differs from group 0");
                }
            }
            rep.assign(it->second.front().begin(), it->second.front().end());
        }
        int have = static_cast<int>(rep.size());
        bool whole = n == topo.leaves_per_subtree() && have == topo.l2_up_ports();
        if (have != expected(n, 2) && !whole) {
            return Verdict::fail("links-per-subtree", "sub-tree " + std::to_string(st) + " has " + std::to_string(n) +
                                                          " leaves and " + std::to_string(have) + " upper groups");
        }
        units[st] = {n, rep};
    }
    return common_set_rule(units, "sub-tree", "groups");
}

namespace {

// Directed capacities of the tenant's links.
struct Capacity {
    const Topology& topo;
    std::vector<int> up1, down1, up2, down2;

    Capacity(const Topology& t, const TenantAllocation& a, int cap) : topo(t) {
        up1.assign(static_cast<std::size_t>(t.total_l1_links()), 0);
        down1 = up1;
        up2.assign(static_cast<std::size_t>(t.total_l2_links()), 0);
        down2 = up2;
        for (const auto& l : a.l1_links) {
            auto s = static_cast<std::size_t>(l.sw * t.leaf_up_ports() + l.port);
            up1[s] = down1[s] = cap;
        }
        for (const auto& l : a.l2_links) {
            auto s = static_cast<std::size_t>(l.sw * t.l2_up_ports() + l.port);
            up2[s] = down2[s] = cap;
        }
    }
    std::size_t l1(int leaf, int k) const { return static_cast<std::size_t>(leaf * topo.leaf_up_ports() + k); }
    std::size_t l2(int sw, int t) const { return static_cast<std::size_t>(sw * topo.l2_up_ports() + t); }
};

struct Router {
    const Topology& topo;
    Capacity cap;
    std::vector<std::pair<int, int>> flows;

    // Option index of each flow; equal consecutive flows take non-decreasing
    // options to skip symmetric assignments.
    bool assign(std::size_t i, int min_option) {
        if (i == flows.size()) return true;
        auto [a, b] = flows[i];
        int sa = topo.subtree_of_leaf(a), sb = topo.subtree_of_leaf(b);
        int w2 = topo.leaf_up_ports();
        int w3 = sa == sb ? 1 : topo.l2_up_ports();
        for (int opt = min_option; opt < w2 * w3; ++opt) {
            int k = opt / w3, t = opt % w3;
            auto ua = cap.l1(a, k), db = cap.l1(b, k);
            if (cap.up1[ua] == 0 || cap.down1[db] == 0) continue;
            std::size_t u2 = 0, d2 = 0;
            if (sa != sb) {
                u2 = cap.l2(topo.l2_switch(sa, k), t);
                d2 = cap.l2(topo.l2_switch(sb, k), t);
                if (cap.up2[u2] == 0 || cap.down2[d2] == 0) continue;
                --cap.up2[u2];
                --cap.down2[d2];
            }
            --cap.up1[ua];
            --cap.down1[db];
            bool same_next = i + 1 < flows.size() && flows[i + 1] == flows[i];
            if (assign(i + 1, same_next ? opt : 0)) return true;
            ++cap.up1[ua];
            ++cap.down1[db];
            if (sa != sb) {
                ++cap.up2[u2];
                ++cap.down2[d2];
            }
        }
        return false;
    }
};

std::string perm_witness(const std::vector<int>& hosts, const std::vector<int>& dst) {
    std::string s;
    for (std::size_t i = 0; i < hosts.size(); ++i) {
        if (hosts[i] == dst[i]) continue;
        if (!s.empty()) s += ',';
        s += std::to_string(hosts[i]) + "->" + std::to_string(dst[i]);
    }
    return s.empty() ? "identity" : s;
}

}  // namespace

bool routes(const Topology& topo, const TenantAllocation& a, const std::vector<std::pair<int, int>>& flows,
            int link_capacity) {
    Router r{topo, Capacity(topo, a, link_capacity), {}};
    for (auto f : flows)
        if (f.first != f.second) r.flows.push_back(f);
    std::sort(r.flows.begin(), r.flows.end());
    return r.assign(0, 0);
}

Verdict routability_oracle(const Topology& topo, const TenantAllocation& a, const OracleOptions& opt) {
    std::vector<int> hosts = a.hosts;
    std::sort(hosts.begin(), hosts.end());
    const std::size_t n = hosts.size();
    if (opt.mode == OracleMode::Exhaustive && static_cast<int>(n) > opt.exhaustive_limit) {
        throw ValidationError("exhaustive oracle is limited to " + std::to_string(opt.exhaustive_limit) +
                              " hosts; tenant has " + std::to_string(n));
    }
    std::map<std::vector<std::pair<int, int>>, bool> cache;
    auto check = [&](const std::vector<int>& dst) {
        std::vector<std::pair<int, int>> flows;
        for (std::size_t i = 0; i < n; ++i) {
            int la = topo.leaf_of_host(hosts[i]), lb = topo.leaf_of_host(dst[i]);
            if (la != lb) flows.emplace_back(la, lb);
        }
        std::sort(flows.begin(), flows.end());
        auto it = cache.find(flows);
        if (it != cache.end()) return it->second;
        bool ok = routes(topo, a, flows, opt.link_capacity);
        cache.emplace(std::move(flows), ok);
        return ok;
    };

    if (opt.mode == OracleMode::Exhaustive) {
        std::vector<int> dst = hosts;
        do {
            if (!check(dst)) return Verdict::fail("unroutable", perm_witness(hosts, dst));
        } while (std::next_permutation(dst.begin(), dst.end()));
        return Verdict::pass();
    }
    Rng rng(opt.seed);
    std::vector<int> dst = hosts;
    for (int i = 0; i < opt.samples; ++i) {
        rng.shuffle(dst);
        if (!check(dst)) return Verdict::fail("unroutable", perm_witness(hosts, dst));
    }
    return Verdict::pass();
}

std::optional<TenantAllocation> brute_force_feasible(const LinkTable& table, int n) {
    const Topology& topo = table.topology();
    // Without a real top level every leaf is in one sub-tree; otherwise the
    // search stays inside one sub-tree.
    const int groups = topo.has_dummy_top() ? 1 : topo.subtree_count();
    const int span = topo.has_dummy_top() ? topo.leaf_count() : topo.leaves_per_subtree();

    for (int g = 0; g < groups; ++g) {
        const int first = g * span;
        std::vector<int> count(static_cast<std::size_t>(span), 0);
        std::optional<TenantAllocation> found;

        // Enumerate subsets of free up-ports of the required size per leaf.
        std::function<bool(std::size_t, TenantAllocation&)> links = [&](std::size_t i, TenantAllocation& a) -> bool {
            if (i == count.size()) {
                if (check_links(a, topo)) {
                    found = a;
                    return true;
                }
                return false;
            }
            int c = count[i];
            int leaf = first + static_cast<int>(i);
            if (c == 0) return links(i + 1, a);
            auto free = table.free_up_ports(leaf).ports();
            int need = topo.spines_for(c, 1);
            if (need > static_cast<int>(free.size())) return false;
            std::vector<char> pick(free.size(), 0);
            std::fill(pick.end() - need, pick.end(), 1);
            do {
                auto mark = a.l1_links.size();
                for (std::size_t j = 0; j < free.size(); ++j)
                    if (pick[j]) a.l1_links.push_back({leaf, free[j]});
                if (links(i + 1, a)) return true;
                a.l1_links.resize(mark);
            } while (std::next_permutation(pick.begin(), pick.end()));
            return false;
        };

        std::function<bool(std::size_t, int)> hosts = [&](std::size_t i, int left) -> bool {
            if (i == count.size()) {
                if (left != 0) return false;
                if (!check_placement(count)) return false;
                TenantAllocation a;
                a.requested = n;
                int used = 0;
                for (std::size_t j = 0; j < count.size(); ++j) {
                    if (count[j] == 0) continue;
                    ++used;
                    int leaf = first + static_cast<int>(j);
                    int base = topo.first_host_of_leaf(leaf);
                    for (int k : table.free_hosts(leaf).lowest(static_cast<std::size_t>(count[j])).ports())
                        a.hosts.push_back(base + k);
                }
                if (used == 1) {
                    found = a;
                    return true;
                }
                return links(0, a);
            }
            int leaf = first + static_cast<int>(i);
            for (int c = std::min(left, table.free_host_count(leaf)); c >= 0; --c) {
                count[i] = c;
                if (hosts(i + 1, left - c)) return true;
            }
            count[i] = 0;
            return false;
        };
        if (hosts(0, n)) {
            found->canonicalize();
            return found;
        }
    }
    return std::nullopt;
}

LogSummary check_log(std::istream& in, const Topology& topo) {
    ParsedLog parsed = read_log(in);
    const bool theorems = !parsed.algorithm || *parsed.algorithm == "laas" || *parsed.algorithm == "simple";
    LinkTable table(topo);
    LogSummary s;
    auto violation = [](int line, const std::string& what) {
        throw ValidationError("log line " + std::to_string(line) + ": " + what);
    };
    for (const auto& [line, rec] : parsed.records) {
        if (rec.kind == LogRecord::Kind::Add) {
            TenantAllocation a = rec.allocation();
            if (theorems) {
                if (auto v = check_placement(a, topo); !v) violation(line, "tenant " + to_string(a.id) + " " + v.rule + ": " + v.witness);
                if (auto v = check_links(a, topo); !v) violation(line, "tenant " + to_string(a.id) + " " + v.rule + ": " + v.witness);
            }
            try {
                table.commit(a, rec.time);
            } catch (const Error& e) {
                violation(line, e.what());
            }
            ++s.adds;
            s.l1_added += static_cast<long long>(a.l1_links.size());
            s.l2_added += static_cast<long long>(a.l2_links.size());
        } else {
            const TenantAllocation* a = table.find(rec.id);
            if (!a) violation(line, "REM of tenant " + to_string(rec.id) + " without a prior ADD");
            s.l1_removed += static_cast<long long>(a->l1_links.size());
            s.l2_removed += static_cast<long long>(a->l2_links.size());
            table.release(rec.id, rec.time);
            ++s.rems;
        }
        if (table.free_l1_links() + table.owned_l1_links() + table.faulty_links() != topo.total_l1_links() ||
            table.free_l2_links() + table.owned_l2_links() != topo.total_l2_links()) {
            violation(line, "link conservation broken");
        }
    }
    return s;
}

std::string format_summary(const LogSummary& s) {
    std::ostringstream os;
    os << "-I- Checked " << s.adds << " ADD and " << s.rems << " REM jobs\n"
       << "-I- Added/Rem " << s.l1_added << '/' << s.l1_removed << " L1PORTS and " << s.l2_added << '/' << s.l2_removed
       << " L2PORTS\n";
    return os.str();
}

Topology topology_from_counts(int n, int k, int t1, int t2, int t3) {
    if (n < 1 || k < 1 || t1 < 1 || t2 < 1 || t3 < 1) throw TopologyError("all counts must be positive");
    if (t1 % k) throw TopologyError("total L1 switches must be a multiple of the leaves per sub-tree");
    int m3 = t1 / k;
    if (t2 % m3) throw TopologyError("total L2 switches must be a multiple of the sub-tree count");
    int w2 = t2 / m3;
    if (m3 == 1 && (t3 == 1 || t3 == w2)) return Topology::build_xgft({n, k}, {1, w2});
    if (t3 % w2) throw TopologyError("total L3 switches must be a multiple of the L2 switches per sub-tree");
    return Topology::build_xgft({n, k, m3}, {1, w2, t3 / w2});
}

}  // namespace laas

#pragma once

#include <array>
#include <string>
#include <vector>

namespace laas {

/// Level arities of an XGFT. Index 0 is level 1.
struct XgftShape {
    std::vector<int> m;  ///< children per switch at each level
    std::vector<int> w;  ///< parents per node at each level
};

/// Result of the Simple heuristic's containment computation.
struct MinLevel {
    int level = 1;       ///< smallest level whose sub-tree holds N hosts
    int subtrees = 1;    ///< level-(level-1) sub-trees needed; 1 when level == 1
};

/// A 3-level XGFT fat-tree. Two-level requests are normalized by appending a
/// dummy top level (m3 = w3 = 1) whose links do not exist physically.
///
/// Canonical numbering (all 0-based, left to right):
///   host h       sits on leaf h / m1
///   leaf l       belongs to 2-level sub-tree l / m2
///   level-2 sw   s = subtree * w2 + k; leaf up-port k reaches it
///   level-3 sw   k * w3 + t; level-2 switch (subtree, k) up-port t reaches it
///
/// The upper bipartite graph formed by level-2 switches of index k and the
/// level-3 switches k * w3 .. k * w3 + w3 - 1 is "upper group" k.
class Topology {
public:
    static Topology build_xgft(const std::vector<int>& m, const std::vector<int>& w);

    const XgftShape& shape() const { return shape_; }
    bool has_dummy_top() const { return dummy_top_; }
    int original_levels() const { return dummy_top_ ? 2 : 3; }

    int m(int level) const { return shape_.m.at(static_cast<std::size_t>(level - 1)); }
    int w(int level) const { return shape_.w.at(static_cast<std::size_t>(level - 1)); }

    int hosts_per_leaf() const { return m(1); }
    int leaves_per_subtree() const { return m(2); }
    int subtree_count() const { return m(3); }
    /// Up-ports per leaf (= level-2 switches per sub-tree).
    int leaf_up_ports() const { return w(2); }
    /// Up-ports per level-2 switch; zero under a dummy top.
    int l2_up_ports() const { return dummy_top_ ? 0 : w(3); }

    int host_count() const { return host_count_; }
    int leaf_count() const { return switch_count_[0]; }
    int l2_count() const { return switch_count_[1]; }
    int l3_count() const { return switch_count_[2]; }
    /// Switch count at level 1..3: prod(m[level+1..h]) * prod(w[1..level]).
    int switch_count(int level) const { return switch_count_.at(static_cast<std::size_t>(level - 1)); }

    int total_l1_links() const { return leaf_count() * leaf_up_ports(); }
    int total_l2_links() const { return l2_count() * l2_up_ports(); }

    /// Hosts under one level-l sub-tree; R_0 = 0.
    int subtree_capacity(int level) const { return capacity_.at(static_cast<std::size_t>(level)); }

    /// Ratio of down-links to up-links at level i (i = 1, 2). The dummy
    /// top reports 1.
    double oversubscription(int level) const;
    /// ceil(O_i), at least 1.
    int oversubscription_ceil(int level) const;
    bool full_bisection() const;

    /// Parent switches needed at `level + 1` to carry `flows` flows crossing
    /// level `level` without sharing more than ceil(O_level) per link.
    int spines_for(int flows, int level) const;

    MinLevel min_level(int hosts) const;

    int leaf_of_host(int host) const { return host / hosts_per_leaf(); }
    int first_host_of_leaf(int leaf) const { return leaf * hosts_per_leaf(); }
    int subtree_of_leaf(int leaf) const { return leaf / leaves_per_subtree(); }
    int first_leaf_of_subtree(int subtree) const { return subtree * leaves_per_subtree(); }
    int l2_switch(int subtree, int k) const { return subtree * leaf_up_ports() + k; }
    int subtree_of_l2(int sw) const { return sw / leaf_up_ports(); }
    int group_of_l2(int sw) const { return sw % leaf_up_ports(); }
    int l3_switch(int group, int t) const { return group * w(3) + t; }

    std::string describe() const;

private:
    XgftShape shape_;
    bool dummy_top_ = false;
    int host_count_ = 0;
    std::array<int, 3> switch_count_{};
    std::array<int, 4> capacity_{};
};

}  // namespace laas

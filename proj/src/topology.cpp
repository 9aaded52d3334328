#include "laas/topology.hpp"

#include <sstream>

#include "laas/error.hpp"
#include "laas/port_mask.hpp"

namespace laas {

namespace {

std::string join(const std::vector<int>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

Topology Topology::build_xgft(const std::vector<int>& m, const std::vector<int>& w) {
    if (m.size() != w.size()) {
        throw TopologyError("m and w must have the same length (got " + std::to_string(m.size()) + " and " +
                            std::to_string(w.size()) + ")");
    }
    if (m.size() > 3) throw TopologyError("fat-trees with more than 3 levels are not supported");
    if (m.size() < 2) throw TopologyError("fat-trees need at least 2 levels");
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 1 || w[i] < 1) {
            throw TopologyError("level " + std::to_string(i + 1) + " has a zero or negative arity");
        }
    }
    if (w[0] != 1) throw TopologyError("w_1 must be 1: every host has a single up-link");

    Topology t;
    t.shape_ = XgftShape{m, w};
    if (m.size() == 2) {
        t.shape_.m.push_back(1);
        t.shape_.w.push_back(1);
        t.dummy_top_ = true;
    } else if (m[2] == 1 && w[2] == 1) {
        // Already written in the normalized form.
        t.dummy_top_ = true;
    }
    const auto& sm = t.shape_.m;
    const auto& sw = t.shape_.w;
    if (static_cast<std::size_t>(sm[0]) > PortMask::kMaxWidth || static_cast<std::size_t>(sw[1]) > PortMask::kMaxWidth ||
        static_cast<std::size_t>(sw[2]) > PortMask::kMaxWidth) {
        throw TopologyError("switch radix exceeds " + std::to_string(PortMask::kMaxWidth) + " ports per side");
    }

    long long hosts = 1;
    for (int v : sm) hosts *= v;
    if (hosts > 50'000'000) throw TopologyError("topology too large");
    t.host_count_ = static_cast<int>(hosts);

    for (int level = 1; level <= 3; ++level) {
        long long count = 1;
        for (int i = level + 1; i <= 3; ++i) count *= sm[static_cast<std::size_t>(i - 1)];
        for (int i = 1; i <= level; ++i) count *= sw[static_cast<std::size_t>(i - 1)];
        t.switch_count_[static_cast<std::size_t>(level - 1)] = static_cast<int>(count);
    }

    t.capacity_[0] = 0;
    int r = 1;
    for (int level = 1; level <= 3; ++level) {
        r *= sm[static_cast<std::size_t>(level - 1)];
        t.capacity_[static_cast<std::size_t>(level)] = r;
    }
    return t;
}

double Topology::oversubscription(int level) const {
    if (level < 1 || level > 2) throw TopologyError("oversubscription is defined for levels 1 and 2");
    if (level == 2 && dummy_top_) return 1.0;
    return static_cast<double>(m(level)) / static_cast<double>(w(level + 1));
}

int Topology::oversubscription_ceil(int level) const {
    if (level < 1 || level > 2) throw TopologyError("oversubscription is defined for levels 1 and 2");
    if (level == 2 && dummy_top_) return 1;
    int up = w(level + 1);
    int c = (m(level) + up - 1) / up;
    return c < 1 ? 1 : c;
}

bool Topology::full_bisection() const {
    if (m(1) != w(2)) return false;
    return dummy_top_ || m(2) == w(3);
}

int Topology::spines_for(int flows, int level) const {
    int o = oversubscription_ceil(level);
    return (flows + o - 1) / o;
}

MinLevel Topology::min_level(int hosts) const {
    if (hosts < 1) throw CapacityError("tenant size must be at least 1");
    if (hosts > host_count_) {
        throw CapacityError("tenant of " + std::to_string(hosts) + " hosts exceeds the " + std::to_string(host_count_) +
                            "-host cloud");
    }
    for (int level = 1; level <= 3; ++level) {
        if (subtree_capacity(level - 1) < hosts && subtree_capacity(level) >= hosts) {
            if (level == 1) return MinLevel{1, 1};
            int unit = subtree_capacity(level - 1);
            return MinLevel{level, (hosts + unit - 1) / unit};
        }
    }
    throw CapacityError("no containing level");  // unreachable: R_3 == host count
}

std::string Topology::describe() const {
    std::ostringstream os;
    os << "XGFT(3; " << join(shape_.m) << "; " << join(shape_.w) << ")";
    return os.str();
}

}  // namespace laas

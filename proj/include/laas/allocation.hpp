#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace laas {

enum class TenantId : std::uint64_t {};

inline std::string to_string(TenantId id) { return std::to_string(static_cast<std::uint64_t>(id)); }
inline TenantId tenant_id(std::uint64_t v) { return static_cast<TenantId>(v); }

/// One up-link: port `port` (0-based) of switch `sw`. For level-1 links `sw`
/// is a leaf index, for level-2 links a level-2 switch index.
struct UpLink {
    int sw = 0;
    int port = 0;
    auto operator<=>(const UpLink&) const = default;
};

/// Identifies an up-link together with the level it leaves from.
struct LinkRef {
    int level = 1;  ///< 1: leaf -> level-2, 2: level-2 -> level-3
    UpLink link;
    auto operator<=>(const LinkRef&) const = default;
};

std::string to_string(const LinkRef& ref);

/// How a placement decomposes. Level 1: one leaf (q = 1, d = N, r = 0).
/// Level 2: q leaves of d hosts plus an optional leaf of r < d hosts.
/// Level 3: q sub-trees of d whole leaves plus an optional sub-tree of r
/// whole leaves. Level 0 marks placements without that structure.
struct PlacementShape {
    int level = 0;
    int q = 0;
    int d = 0;
    int r = 0;
    bool operator==(const PlacementShape&) const = default;
};

struct TenantAllocation {
    TenantId id{};
    int requested = 0;  ///< hosts the tenant asked for
    std::vector<int> hosts;         ///< owned hosts (may exceed `requested` when rounded up)
    std::vector<UpLink> l1_links;   ///< leaf up-links
    std::vector<UpLink> l2_links;   ///< level-2 up-links, replicated over all upper groups
    PlacementShape shape;

    /// Sorts hosts and links into canonical order.
    void canonicalize();
};

}  // namespace laas

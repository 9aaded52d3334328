#pragma once

#include <bitset>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace laas {

/// Bit set over the ports (or hosts) of one switch. Bit k refers to the k-th
/// 0-based port. The width is fixed at construction and never exceeds
/// kMaxWidth; bits at or beyond the width are always clear.
class PortMask {
public:
    static constexpr std::size_t kMaxWidth = 128;

    PortMask() = default;
    explicit PortMask(std::size_t width, bool all_set = false);

    static PortMask from_ports(std::size_t width, const std::vector<int>& ports);

    std::size_t width() const { return width_; }
    std::size_t count() const { return bits_.count(); }
    bool empty() const { return bits_.none(); }

    bool test(std::size_t k) const { return k < width_ && bits_.test(k); }
    void set(std::size_t k);
    void reset(std::size_t k);

    /// Keeps only the lowest `n` set bits.
    PortMask lowest(std::size_t n) const;

    /// Indices of set bits, ascending.
    std::vector<int> ports() const;

    /// Lowest set bit, or -1.
    int first() const;

    PortMask operator&(const PortMask& o) const;
    PortMask operator|(const PortMask& o) const;
    /// Bits of this mask that are not in `o`.
    PortMask minus(const PortMask& o) const;
    PortMask& operator&=(const PortMask& o);
    PortMask& operator|=(const PortMask& o);

    /// True when every set bit of this mask is also set in `o`.
    bool subset_of(const PortMask& o) const { return (bits_ & ~o.bits_).none(); }

    bool operator==(const PortMask& o) const { return width_ == o.width_ && bits_ == o.bits_; }

    /// Binary string, most significant port first (debug output).
    std::string to_string() const;

    /// Stable hash of the bit pattern, used to collapse interchangeable
    /// search candidates.
    std::uint64_t fingerprint() const;

private:
    std::size_t width_ = 0;
    std::bitset<kMaxWidth> bits_;
};

/// Lowercase 0x-prefixed hex of the integer whose set bits are `bit_positions`
/// (no leading zeros; an empty set renders as 0x0).
std::string hex_mask(const std::vector<int>& bit_positions);

}  // namespace laas

#include "laas/port_mask.hpp"

#include <algorithm>
#include <stdexcept>

namespace laas {

PortMask::PortMask(std::size_t width, bool all_set) : width_(width) {
    if (width > kMaxWidth) {
        throw std::invalid_argument("port mask width " + std::to_string(width) + " exceeds " +
                                    std::to_string(kMaxWidth));
    }
    if (all_set) {
        for (std::size_t k = 0; k < width; ++k) bits_.set(k);
    }
}

PortMask PortMask::from_ports(std::size_t width, const std::vector<int>& ports) {
    PortMask m(width);
    for (int p : ports) m.set(static_cast<std::size_t>(p));
    return m;
}

void PortMask::set(std::size_t k) {
    if (k >= width_) throw std::out_of_range("port " + std::to_string(k) + " outside mask width");
    bits_.set(k);
}

void PortMask::reset(std::size_t k) {
    if (k >= width_) throw std::out_of_range("port " + std::to_string(k) + " outside mask width");
    bits_.reset(k);
}

PortMask PortMask::lowest(std::size_t n) const {
    PortMask out(width_);
    for (std::size_t k = 0; k < width_ && n > 0; ++k) {
        if (bits_.test(k)) {
            out.bits_.set(k);
            --n;
        }
    }
    return out;
}

std::vector<int> PortMask::ports() const {
    std::vector<int> out;
    out.reserve(count());
    for (std::size_t k = 0; k < width_; ++k) {
        if (bits_.test(k)) out.push_back(static_cast<int>(k));
    }
    return out;
}

int PortMask::first() const {
    for (std::size_t k = 0; k < width_; ++k) {
        if (bits_.test(k)) return static_cast<int>(k);
    }
    return -1;
}

PortMask PortMask::operator&(const PortMask& o) const {
    PortMask out(*this);
    out &= o;
    return out;
}

PortMask PortMask::operator|(const PortMask& o) const {
    PortMask out(*this);
    out |= o;
    return out;
}

PortMask PortMask::minus(const PortMask& o) const {
    PortMask out(*this);
    out.bits_ &= ~o.bits_;
    return out;
}

PortMask& PortMask::operator&=(const PortMask& o) {
    bits_ &= o.bits_;
    return *this;
}

PortMask& PortMask::operator|=(const PortMask& o) {
    bits_ |= o.bits_;
    width_ = std::max(width_, o.width_);
    return *this;
}

std::string PortMask::to_string() const {
    std::string s;
    s.reserve(width_);
    for (std::size_t k = width_; k-- > 0;) s.push_back(bits_.test(k) ? '1' : '0');
    return s;
}

std::uint64_t PortMask::fingerprint() const {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    for (std::size_t k = 0; k < 64 && k < width_; ++k) {
        if (bits_.test(k)) lo |= std::uint64_t{1} << k;
    }
    for (std::size_t k = 64; k < width_; ++k) {
        if (bits_.test(k)) hi |= std::uint64_t{1} << (k - 64);
    }
    return lo ^ (hi * 0x9e3779b97f4a7c15ULL);
}

std::string hex_mask(const std::vector<int>& bit_positions) {
    if (bit_positions.empty()) return "0x0";
    int top = *std::max_element(bit_positions.begin(), bit_positions.end());
    std::vector<int> nibbles(static_cast<std::size_t>(top / 4 + 1), 0);
    for (int b : bit_positions) {
        if (b < 0) throw std::invalid_argument("negative bit position");
        nibbles[static_cast<std::size_t>(b / 4)] |= 1 << (b % 4);
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out = "0x";
    for (std::size_t i = nibbles.size(); i-- > 0;) out.push_back(kDigits[nibbles[i]]);
    return out;
}

}  // namespace laas

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "laas/topology.hpp"

namespace laas {

/// Physical identity of one host or switch. Port numbers are the 1-based
/// numbers used by the cloud controller and the SDN controller.
struct DeviceName {
    std::string name;
    std::vector<int> up_ports;
    std::vector<int> down_ports;
};

struct DeviceRef {
    int level = 0;  ///< 0 = host, 1 = leaf, 2 = level-2, 3 = level-3
    int index = 0;
    bool operator==(const DeviceRef&) const = default;
};

/// Bidirectional map between canonical device indices and physical names.
///
/// CSV format, one row per device:
///
///     # lvl,swIdx,name,UP,upPorts,DN,dnPorts
///     0,10,comp-11,UP,1,,,,
///     1,3,SW_L1_3,UP,1,2,3,4,DN,5,6,7,8
///
/// Engine port k of a device maps to the k-th entry of its UP list. No rows
/// are expected for the dummy top level of a normalized 2-level tree.
class NameMap {
public:
    static NameMap load(std::istream& csv, const Topology& topo);
    static NameMap load_file(const std::string& path, const Topology& topo);

    /// comp-<h+1> hosts and SW_L<level>_<index> switches; up-ports first, then
    /// down-ports, numbered from 1.
    static NameMap generate(const Topology& topo);

    void write_csv(std::ostream& out) const;

    const DeviceName& device(int level, int index) const;
    const std::string& name(int level, int index) const { return device(level, index).name; }
    std::optional<DeviceRef> find(std::string_view name) const;

    /// Physical number of engine up-port `port` on the device.
    int physical_up_port(int level, int index, int port) const;

    int up_port_count() const { return up_ports_; }
    int down_port_count() const { return down_ports_; }
    int device_count() const { return static_cast<int>(by_name_.size()); }

private:
    std::vector<std::vector<DeviceName>> levels_;  // levels_[level][index]
    std::unordered_map<std::string, DeviceRef> by_name_;
    int up_ports_ = 0;
    int down_ports_ = 0;
};

}  // namespace laas

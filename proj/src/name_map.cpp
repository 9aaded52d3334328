#include "laas/name_map.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "laas/error.hpp"

namespace laas {

namespace {

struct Expected {
    int count;
    int up;
    int down;
};

std::vector<Expected> expected_devices(const Topology& t) {
    std::vector<Expected> e;
    e.push_back({t.host_count(), 1, 0});
    e.push_back({t.leaf_count(), t.leaf_up_ports(), t.hosts_per_leaf()});
    e.push_back({t.l2_count(), t.l2_up_ports(), t.leaves_per_subtree()});
    if (!t.has_dummy_top()) e.push_back({t.l3_count(), 0, t.subtree_count()});
    return e;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::optional<int> parse_int(const std::string& s) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

[[noreturn]] void fail(int line_no, const std::string& line, const std::string& why) {
    throw ValidationError("name map line " + std::to_string(line_no) + " (\"" + line + "\"): " + why);
}

}  // namespace

NameMap NameMap::load(std::istream& csv, const Topology& topo) {
    const auto expected = expected_devices(topo);
    NameMap nm;
    nm.levels_.resize(expected.size());
    std::vector<std::vector<bool>> seen(expected.size());
    for (std::size_t l = 0; l < expected.size(); ++l) {
        nm.levels_[l].resize(static_cast<std::size_t>(expected[l].count));
        seen[l].assign(static_cast<std::size_t>(expected[l].count), false);
    }

    std::string line;
    int line_no = 0;
    while (std::getline(csv, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;

        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(trim(f));
        if (fields.size() < 4) fail(line_no, line, "expected lvl,swIdx,name,UP,...");

        auto lvl = parse_int(fields[0]);
        auto idx = parse_int(fields[1]);
        if (!lvl || !idx) fail(line_no, line, "level and index must be integers");
        if (*lvl < 0 || *lvl >= static_cast<int>(expected.size())) {
            fail(line_no, line, "level " + fields[0] + " does not exist in " + topo.describe());
        }
        const auto& exp = expected[static_cast<std::size_t>(*lvl)];
        if (*idx < 0 || *idx >= exp.count) {
            fail(line_no, line, "index " + fields[1] + " out of range for level " + fields[0]);
        }
        if (seen[static_cast<std::size_t>(*lvl)][static_cast<std::size_t>(*idx)]) {
            fail(line_no, line, "duplicate entry for level " + fields[0] + " index " + fields[1]);
        }
        const std::string& name = fields[2];
        if (name.empty()) fail(line_no, line, "empty device name");
        if (nm.by_name_.count(name)) fail(line_no, line, "duplicate device name " + name);

        DeviceName dev{name, {}, {}};
        enum class Section { None, Up, Down } section = Section::None;
        for (std::size_t i = 3; i < fields.size(); ++i) {
            const std::string& v = fields[i];
            if (v.empty()) continue;
            if (v == "UP") {
                section = Section::Up;
                continue;
            }
            if (v == "DN") {
                section = Section::Down;
                continue;
            }
            auto port = parse_int(v);
            if (!port || *port < 1) fail(line_no, line, "bad port number '" + v + "'");
            if (section == Section::None) fail(line_no, line, "port listed before UP/DN keyword");
            (section == Section::Up ? dev.up_ports : dev.down_ports).push_back(*port);
        }
        std::set<int> uniq(dev.up_ports.begin(), dev.up_ports.end());
        uniq.insert(dev.down_ports.begin(), dev.down_ports.end());
        if (uniq.size() != dev.up_ports.size() + dev.down_ports.size()) {
            fail(line_no, line, "port number repeated");
        }
        if (static_cast<int>(dev.up_ports.size()) != exp.up) {
            fail(line_no, line,
                 "expected " + std::to_string(exp.up) + " up-ports, found " + std::to_string(dev.up_ports.size()));
        }
        if (static_cast<int>(dev.down_ports.size()) != exp.down) {
            fail(line_no, line,
                 "expected " + std::to_string(exp.down) + " down-ports, found " +
                     std::to_string(dev.down_ports.size()));
        }

        seen[static_cast<std::size_t>(*lvl)][static_cast<std::size_t>(*idx)] = true;
        nm.by_name_.emplace(name, DeviceRef{*lvl, *idx});
        nm.up_ports_ += static_cast<int>(dev.up_ports.size());
        nm.down_ports_ += static_cast<int>(dev.down_ports.size());
        nm.levels_[static_cast<std::size_t>(*lvl)][static_cast<std::size_t>(*idx)] = std::move(dev);
    }

    for (std::size_t l = 0; l < seen.size(); ++l) {
        for (std::size_t i = 0; i < seen[l].size(); ++i) {
            if (!seen[l][i]) {
                throw ValidationError("name map has no row for level " + std::to_string(l) + " index " +
                                      std::to_string(i));
            }
        }
    }
    return nm;
}

NameMap NameMap::load_file(const std::string& path, const Topology& topo) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open name map " + path);
    return load(in, topo);
}

NameMap NameMap::generate(const Topology& topo) {
    const auto expected = expected_devices(topo);
    NameMap nm;
    nm.levels_.resize(expected.size());
    for (std::size_t l = 0; l < expected.size(); ++l) {
        const auto& e = expected[l];
        for (int i = 0; i < e.count; ++i) {
            DeviceName dev;
            dev.name = l == 0 ? "comp-" + std::to_string(i + 1)
                              : "SW_L" + std::to_string(l) + "_" + std::to_string(i);
            int port = 1;
            for (int k = 0; k < e.up; ++k) dev.up_ports.push_back(port++);
            for (int k = 0; k < e.down; ++k) dev.down_ports.push_back(port++);
            nm.up_ports_ += e.up;
            nm.down_ports_ += e.down;
            nm.by_name_.emplace(dev.name, DeviceRef{static_cast<int>(l), i});
            nm.levels_[l].push_back(std::move(dev));
        }
    }
    return nm;
}

void NameMap::write_csv(std::ostream& out) const {
    out << "# lvl,swIdx,name,UP,upPorts,DN,dnPorts\n";
    for (std::size_t l = 0; l < levels_.size(); ++l) {
        for (std::size_t i = 0; i < levels_[l].size(); ++i) {
            const auto& d = levels_[l][i];
            out << l << ',' << i << ',' << d.name << ",UP";
            for (int p : d.up_ports) out << ',' << p;
            if (!d.down_ports.empty()) {
                out << ",DN";
                for (int p : d.down_ports) out << ',' << p;
            }
            out << '\n';
        }
    }
}

const DeviceName& NameMap::device(int level, int index) const {
    if (level < 0 || level >= static_cast<int>(levels_.size()) || index < 0 ||
        index >= static_cast<int>(levels_[static_cast<std::size_t>(level)].size())) {
        throw NotFoundError("no device at level " + std::to_string(level) + " index " + std::to_string(index));
    }
    return levels_[static_cast<std::size_t>(level)][static_cast<std::size_t>(index)];
}

std::optional<DeviceRef> NameMap::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

int NameMap::physical_up_port(int level, int index, int port) const {
    const auto& d = device(level, index);
    if (port < 0 || port >= static_cast<int>(d.up_ports.size())) {
        throw NotFoundError(d.name + " has no up-port " + std::to_string(port));
    }
    return d.up_ports[static_cast<std::size_t>(port)];
}

}  // namespace laas

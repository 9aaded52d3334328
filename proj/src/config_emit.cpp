#include "laas/config_emit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>
#include <tuple>

#include "laas/error.hpp"
#include "laas/port_mask.hpp"

namespace laas {

std::string openstack_add_script(TenantId id, const std::vector<std::string>& hosts, int k) {
    const std::string t = to_string(id);
    const std::string log = "cmd-" + std::to_string(k) + ".log";
    std::ostringstream os;
    os << "#!/bin/bash\n"
       << "#\n"
       << "# Adding tenant " << t << " to OpenStack\n"
       << "#\n"
       << "echo Adding tenant " << t << " to OpenStack > OSCfg/" << log << '\n'
       << "keystone tenant-create --name laas-tenant-" << t << " \\\n"
       << "  --description \"LaaS Tenant " << t << "\" >> OSCfg/" << log << '\n'
       << "tenantId=`keystone tenant-get laas-tenant-" << t << " | \\\n"
       << "  awk '/ id /{print $4}'` >> OSCfg/" << log << '\n'
       << "nova aggregate-create laas-aggr-" << t << " >> OSCfg/" << log << '\n'
       << "nova aggregate-set-metadata laas-aggr-" << t << " \\\n"
       << "  filter_tenant_id=$tenantId >> OSCfg/" << log << '\n';
    // The host lines append to a log in the working directory, as the
    // original tooling does.
    for (const auto& h : hosts) os << "nova aggregate-add-host laas-aggr-" << t << ' ' << h << " >> " << log << '\n';
    return os.str();
}

std::string openstack_remove_script(TenantId id, const std::vector<std::string>& hosts, int k) {
    const std::string t = to_string(id);
    const std::string log = "cmd-" + std::to_string(k) + ".log";
    std::ostringstream os;
    os << "#!/bin/bash\n"
       << "#\n"
       << "# Removing tenant " << t << " from OpenStack\n"
       << "#\n";
    for (const auto& h : hosts) os << "nova aggregate-remove-host laas-aggr-" << t << ' ' << h << " >> " << log << '\n';
    os << "nova aggregate-delete laas-aggr-" << t << " >> OSCfg/" << log << '\n'
       << "keystone tenant-delete laas-tenant-" << t << " >> OSCfg/" << log << '\n';
    return os.str();
}

std::vector<std::string> host_names(const TenantAllocation& a, const NameMap& names) {
    std::vector<int> hosts = a.hosts;
    std::sort(hosts.begin(), hosts.end());
    std::vector<std::string> out;
    out.reserve(hosts.size());
    for (int h : hosts) out.push_back(names.name(0, h));
    return out;
}

std::vector<SwitchPorts> switch_ports(const TenantAllocation& a, const Topology& topo, const NameMap& names) {
    std::vector<SwitchPorts> out;
    auto level = [&](const std::vector<UpLink>& links, int lvl) {
        std::map<int, std::vector<int>> per;
        for (const auto& l : links) per[l.sw].push_back(names.physical_up_port(lvl, l.sw, l.port));
        std::vector<std::pair<int, std::vector<int>>> v(per.begin(), per.end());
        std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
            return std::tuple(x.second.size(), x.first) < std::tuple(y.second.size(), y.first);
        });
        for (auto& [sw, ports] : v) {
            std::sort(ports.begin(), ports.end());
            out.push_back({names.name(lvl, sw), ports});
        }
    };
    level(a.l1_links, 1);
    if (!topo.has_dummy_top()) level(a.l2_links, 2);
    return out;
}

std::string groups_conf(const std::map<TenantId, TenantAllocation>& tenants, const Topology& topo,
                        const NameMap& names) {
    std::ostringstream os;
    bool first = true;
    auto block = [&](const std::string& name, const std::vector<std::string>& entries) {
        if (entries.empty()) return;
        if (!first) os << '\n';
        first = false;
        os << "port-group\n" << "name: " << name << '\n' << "obj_list:\n";
        for (std::size_t i = 0; i < entries.size(); ++i)
            os << "   " << entries[i] << (i + 1 == entries.size() ? ";" : "") << '\n';
        os << "end-port-group\n";
    };
    for (const auto& [id, a] : tenants) {
        std::vector<int> hosts = a.hosts;
        std::sort(hosts.begin(), hosts.end());
        std::vector<std::string> hcas;
        for (int h : hosts) {
            int port = names.physical_up_port(0, h, 0);
            hcas.push_back("name=" + names.name(0, h) + "/U1:P" + std::to_string(port));
        }
        block("T" + to_string(id) + "-hcas", hcas);
        std::vector<std::string> sws;
        for (const auto& sp : switch_ports(a, topo, names)) sws.push_back("name=" + sp.name + "/U1 pmask=" + hex_mask(sp.ports));
        block("T" + to_string(id) + "-switches", sws);
    }
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace laas

#include "laas/service.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "laas/config_emit.hpp"
#include "laas/error.hpp"
#include "laas/transaction_log.hpp"

namespace laas {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::optional<std::uint64_t> parse_id(const std::string& s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

Response message(int status, const std::string& text) { return {status, json{{"message", text}}.dump(4) + "\n"}; }

json summary(const TenantAllocation& a) {
    return json{{"N", a.requested},
                {"hosts", a.hosts.size()},
                {"l1Ports", a.l1_links.size()},
                {"l2Ports", a.l2_links.size()}};
}

}  // namespace

TenantService::TenantService(Topology topo, NameMap names, ServiceOptions opt)
    : topo_(std::move(topo)), names_(std::move(names)), opt_(std::move(opt)), table_(topo_) {
    if (opt_.emit_files) {
        fs::create_directories(opt_.work_dir / "OSCfg");
        fs::create_directories(opt_.work_dir / "SDNCfg");
        // Continue the script numbering of an earlier run.
        static const std::regex script(R"(cmd-(\d+)\.log)");
        for (const auto& e : fs::directory_iterator(opt_.work_dir / "OSCfg")) {
            std::smatch m;
            std::string name = e.path().filename().string();
            if (std::regex_match(name, m, script)) next_script_ = std::max(next_script_, std::stoi(m[1]) + 1);
        }
    }
    if (opt_.log_path && fs::exists(*opt_.log_path)) replay(*opt_.log_path);
    if (opt_.emit_files) emit_groups();
}

void TenantService::replay(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read transaction log " + path.string());
    ParsedLog parsed = read_log(in);
    for (const auto& [line, rec] : parsed.records) {
        try {
            if (rec.kind == LogRecord::Kind::Add) {
                table_.commit(rec.allocation(), rec.time);
            } else {
                table_.release(rec.id, rec.time);
            }
        } catch (const Error& e) {
            throw ValidationError(path.string() + " line " + std::to_string(line) + ": " + e.what());
        }
        clock_ = std::max(clock_, rec.time);
    }
}

std::string TenantService::startup_line() const {
    return "-I- Defined " + std::to_string(names_.up_port_count()) + " up ports and " +
           std::to_string(names_.down_port_count()) + " down port mappings";
}

void TenantService::emit_groups() {
    write_atomic(opt_.work_dir / "SDNCfg" / "groups.conf", groups_conf(table_.tenants(), topo_, names_));
}

void TenantService::append_log(const LogRecord& rec) {
    if (!opt_.log_path) return;
    bool fresh = !fs::exists(*opt_.log_path) || fs::file_size(*opt_.log_path) == 0;
    std::ofstream out(*opt_.log_path, std::ios::app);
    if (!out) throw Error("cannot append to " + opt_.log_path->string());
    if (fresh) out << "# alg laas\n";
    out << format_record(rec) << '\n';
}

Response TenantService::list() const {
    std::lock_guard lk(mu_);
    json out = json::object();
    for (const auto& [id, a] : table_.tenants()) out[to_string(id)] = summary(a);
    return {200, out.dump(4) + "\n"};
}

Response TenantService::create(const std::string& id_text, const std::string& n_text) {
    auto id = parse_id(id_text);
    if (!id) return message(400, "Bad tenant id '" + id_text + "'");
    auto n = parse_id(n_text);
    if (!n || *n < 1) return message(400, "Bad host count '" + n_text + "'");

    std::lock_guard lk(mu_);
    const TenantId tid = tenant_id(*id);
    if (table_.find(tid)) return message(409, "Tenant " + id_text + " already exists");
    std::optional<TenantAllocation> a;
    if (*n <= static_cast<std::uint64_t>(topo_.host_count())) {
        a = propose(table_, Algorithm::Laas, tid, static_cast<int>(*n), opt_.alloc);
    }
    if (!a) return message(422, "Fail to allocate tenant " + to_string(tid));

    const std::int64_t t = ++clock_;
    table_.commit(*a, t);
    append_log(LogRecord::add(*a, t));
    if (opt_.emit_files) {
        int k = next_script_++;
        write_atomic(opt_.work_dir / "OSCfg" / ("cmd-" + std::to_string(k) + ".log"),
                     openstack_add_script(tid, host_names(*a, names_), k));
        emit_groups();
    }
    return {200, summary(*a).dump(4) + "\n"};
}

Response TenantService::hosts(const std::string& id_text) const {
    auto id = parse_id(id_text);
    std::lock_guard lk(mu_);
    const TenantAllocation* a = id ? table_.find(tenant_id(*id)) : nullptr;
    if (!a) return message(404, "Tenant " + id_text + " not found");
    return {200, json(host_names(*a, names_)).dump(4) + "\n"};
}

Response TenantService::ports(const std::string& id_text, int level) const {
    auto id = parse_id(id_text);
    std::lock_guard lk(mu_);
    const TenantAllocation* a = id ? table_.find(tenant_id(*id)) : nullptr;
    if (!a) return message(404, "Tenant " + id_text + " not found");
    const auto& links = level == 1 ? a->l1_links : a->l2_links;
    if (links.empty()) return {200, "[]\n"};
    // One object per line, as the original service prints them.
    std::ostringstream os;
    os << "[\n";
    for (std::size_t i = 0; i < links.size(); ++i) {
        os << "    { \"pNum\": " << names_.physical_up_port(level, links[i].sw, links[i].port) << ", \"sName\": "
           << json(names_.name(level, links[i].sw)).dump() << " }" << (i + 1 < links.size() ? "," : "") << '\n';
    }
    os << "]\n";
    return {200, os.str()};
}

Response TenantService::l1_ports(const std::string& id) const { return ports(id, 1); }

Response TenantService::l2_ports(const std::string& id) const {
    if (topo_.has_dummy_top()) {
        auto r = ports(id, 1);
        return r.status == 200 ? Response{200, "[]\n"} : r;
    }
    return ports(id, 2);
}

Response TenantService::remove(const std::string& id_text) {
    auto id = parse_id(id_text);
    std::lock_guard lk(mu_);
    if (!id || !table_.find(tenant_id(*id))) return message(404, "Tenant " + id_text + " not found");
    const TenantId tid = tenant_id(*id);
    const std::int64_t t = ++clock_;
    TenantAllocation a = table_.release(tid, t);
    append_log(LogRecord::rem(tid, t));
    if (opt_.emit_files) {
        int k = next_script_++;
        write_atomic(opt_.work_dir / "OSCfg" / ("cmd-" + std::to_string(k) + ".log"),
                     openstack_remove_script(tid, host_names(a, names_), k));
        emit_groups();
    }
    return {204, ""};
}

void serve_http(TenantService& svc, const std::string& host, int port, const std::function<void(StopFn)>& on_ready) {
    httplib::Server server;
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        if (!r.body.empty()) res.set_content(r.body, "application/json");
    };
    server.Get("/tenants", [&](const httplib::Request&, httplib::Response& res) { reply(res, svc.list()); });
    server.Post("/tenants", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.create(req.get_param_value("id"), req.get_param_value("n")));
    });
    server.Get(R"(/tenants/([^/]+)/hosts)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.hosts(req.matches[1]));
    });
    server.Get(R"(/tenants/([^/]+)/l1Ports)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.l1_ports(req.matches[1]));
    });
    server.Get(R"(/tenants/([^/]+)/l2Ports)", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.l2_ports(req.matches[1]));
    });
    server.Delete(R"(/tenants/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.remove(req.matches[1]));
    });
    if (!server.bind_to_port(host, port)) throw Error("cannot listen on " + host + ":" + std::to_string(port));
    if (on_ready) on_ready([&server] { server.stop(); });
    server.listen_after_bind();
}

}  // namespace laas

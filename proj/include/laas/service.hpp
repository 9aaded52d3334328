#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>

#include "laas/allocator.hpp"
#include "laas/link_table.hpp"
#include "laas/name_map.hpp"
#include "laas/topology.hpp"

namespace laas {

struct ServiceOptions {
    /// OSCfg/ and SDNCfg/ are created below this directory.
    std::filesystem::path work_dir = ".";
    bool emit_files = true;
    /// Transaction log replayed at startup and appended on every change.
    std::optional<std::filesystem::path> log_path;
    AllocOptions alloc;
};

struct Response {
    int status = 200;
    std::string body;  ///< JSON, or empty for 204
};

/// Tenant lifecycle behind the REST interface. All operations are
/// serialized; the object is safe to call from several threads.
class TenantService {
public:
    TenantService(Topology topo, NameMap names, ServiceOptions opt = {});

    /// "-I- Defined <u> up ports and <d> down port mappings"
    std::string startup_line() const;

    Response list() const;
    Response create(const std::string& id, const std::string& n);
    Response hosts(const std::string& id) const;
    Response l1_ports(const std::string& id) const;
    Response l2_ports(const std::string& id) const;
    Response remove(const std::string& id);

    /// Number the next command script will carry.
    int next_script() const { return next_script_; }
    const LinkTable& table() const { return table_; }

private:
    void emit_groups();
    void append_log(const LogRecord& rec);
    void replay(const std::filesystem::path& path);
    Response ports(const std::string& id, int level) const;

    Topology topo_;
    NameMap names_;
    ServiceOptions opt_;
    LinkTable table_;
    int next_script_ = 1;
    std::int64_t clock_ = 0;
    mutable std::mutex mu_;
};

/// Serves the REST API until stopped. `on_ready` runs once the socket is
/// bound and receives a callable that stops the server from any thread.
using StopFn = std::function<void()>;
void serve_http(TenantService& svc, const std::string& host, int port,
                const std::function<void(StopFn)>& on_ready = {});

}  // namespace laas

#include "commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "laas/allocator.hpp"
#include "laas/error.hpp"
#include "laas/name_map.hpp"
#include "laas/service.hpp"
#include "laas/simulator.hpp"
#include "laas/topology.hpp"
#include "laas/transaction_log.hpp"
#include "laas/verifier.hpp"
#include "laas/workload.hpp"

namespace laas::cli {

namespace {

constexpr int kUsage = 1;
constexpr int kInvalid = 2;

struct TopoFlags {
    std::vector<int> m;
    std::vector<int> w;
};

void add_topology(CLI::App* cmd, TopoFlags& f) {
    cmd->add_option("-m,--m", f.m, "children per level, e.g. 18,18,36")->delimiter(',')->required();
    cmd->add_option("-w,--w", f.w, "parents per level, e.g. 1,18,18")->delimiter(',')->required();
}

// In test mode every randomized command must be given an explicit seed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    if (std::getenv("LAAS_TEST_MODE")) throw CLI::ValidationError("--seed", "required when LAAS_TEST_MODE is set");
    return static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());
}

Algorithm algorithm_flag(const std::string& s) {
    auto a = parse_algorithm(s);
    if (!a) throw CLI::ValidationError("--alg", "unknown algorithm '" + s + "'");
    return *a;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& s) {
    auto parts = split(s, ':');
    try {
        if (parts.size() == 2) {
            std::int64_t lo = std::stoll(parts[0]), hi = std::stoll(parts[1]);
            if (lo >= 1 && lo <= hi) return {lo, hi};
        }
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("-r", "expected lo:hi with 1 <= lo <= hi, got '" + s + "'");
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Tenant network isolation allocator for fat-tree clouds"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "random seed (used by gen and sweep)");

    // sim
    auto* sim = app.add_subcommand("sim", "replay a request trace under FIFO scheduling");
    TopoFlags sim_topo;
    add_topology(sim, sim_topo);
    std::string sim_trace, sim_alg = "laas", sim_log = "isol.log", sim_names, sim_csv;
    bool sim_verify = false, sim_no_oversub = false;
    sim->add_option("-c,--trace", sim_trace, "trace CSV (id,size,arrival,duration)")->required();
    sim->add_option("--alg", sim_alg, "laas | simple | extended-simple | unconstrained");
    sim->add_option("--log", sim_log, "transaction log output");
    sim->add_option("--name-map", sim_names, "validate this name-mapping CSV against the topology");
    sim->add_option("--csv", sim_csv, "also write the report as CSV");
    sim->add_flag("--verify", sim_verify, "re-check every allocation while simulating");
    sim->add_flag("--no-oversub", sim_no_oversub, "ignore oversubscription when sizing spine sets");
    sim->add_option("--seed", seed, "accepted for uniformity; the simulation is deterministic");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a request trace");
    int gen_n = 1, gen_cloud = 11664, gen_arrival = 0;
    double gen_mean = 8, gen_sigma = -1;
    std::string gen_range = "20:3000", gen_dist = "exp", gen_cdf, gen_out;
    gen->add_option("-n,--count", gen_n, "number of requests")->check(CLI::NonNegativeNumber);
    gen->add_option("-s,--size", gen_mean, "mean size parameter x");
    gen->add_option("-r,--runtime", gen_range, "duration range lo:hi");
    gen->add_option("-a,--arrival", gen_arrival, "0: all arrive at time 0; a>0: exponential gaps of mean a")
        ->check(CLI::NonNegativeNumber);
    gen->add_option("--dist", gen_dist, "exp | gauss | uniform | cdf");
    gen->add_option("--sigma", gen_sigma, "Gaussian standard deviation (default x/5)");
    gen->add_option("--cdf", gen_cdf, "size CDF CSV for --dist cdf");
    gen->add_option("--cloud", gen_cloud, "upper truncation bound (cloud size)")->check(CLI::PositiveNumber);
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");
    gen->add_option("--seed", seed, "random seed");

    // check
    auto* check = app.add_subcommand("check", "audit a transaction log");
    int ck_n = 0, ck_k = 0, ck_1 = 0, ck_2 = 0, ck_3 = 0;
    std::string ck_log;
    check->add_option("-n,--hosts-per-leaf", ck_n)->required();
    check->add_option("-k,--num-l1-per-l2", ck_k)->required();
    check->add_option("-1,--total-l1s", ck_1)->required();
    check->add_option("-2,--total-l2s", ck_2)->required();
    check->add_option("-3,--total-l3s", ck_3)->required();
    check->add_option("-l,--log", ck_log)->required();
    check->add_option("--seed", seed, "accepted for uniformity");

    // serve
    auto* serve = app.add_subcommand("serve", "run the REST tenant service");
    TopoFlags srv_topo;
    add_topology(serve, srv_topo);
    std::string srv_names, srv_host = "127.0.0.1", srv_dir = ".", srv_log;
    int srv_port = 12345;
    serve->add_option("-n,--name-map", srv_names, "name-mapping CSV (generated when omitted)");
    serve->add_option("--host", srv_host);
    serve->add_option("--port", srv_port);
    serve->add_option("--dir", srv_dir, "directory receiving OSCfg/ and SDNCfg/");
    serve->add_option("--log", srv_log, "transaction log to replay and append");
    serve->add_option("--seed", seed, "accepted for uniformity");

    // sweep
    auto* sw = app.add_subcommand("sweep", "utilization versus mean tenant size");
    TopoFlags sw_topo;
    add_topology(sw, sw_topo);
    std::string sw_family = "exp", sw_algs = "laas,simple,unconstrained", sw_out;
    std::vector<double> sw_means;
    std::vector<std::uint64_t> sw_seeds;
    int sw_count = 10000, sw_threads = 0;
    double sw_sigma = 0.2;
    std::string sw_range = "20:3000";
    sw->add_option("--family", sw_family, "exp | gauss | uniform");
    sw->add_option("--means", sw_means, "comma-separated means")->delimiter(',')->required();
    sw->add_option("--algs", sw_algs, "comma-separated algorithms");
    sw->add_option("--seeds", sw_seeds, "comma-separated seeds (default: --seed)")->delimiter(',');
    sw->add_option("--count", sw_count, "requests per run");
    sw->add_option("-r,--runtime", sw_range, "duration range lo:hi");
    sw->add_option("--sigma-factor", sw_sigma, "Gaussian sigma as a fraction of the mean");
    sw->add_option("--threads", sw_threads, "worker threads (0: all cores)");
    sw->add_option("-o,--out", sw_out, "CSV output (default stdout)");
    sw->add_option("--seed", seed, "seed when --seeds is omitted");

    // latency
    auto* lat = app.add_subcommand("latency", "time allocation calls over a trace");
    TopoFlags lat_topo;
    add_topology(lat, lat_topo);
    std::string lat_trace, lat_alg = "laas";
    lat->add_option("-c,--trace", lat_trace, "trace CSV")->required();
    lat->add_option("--alg", lat_alg);
    lat->add_option("--seed", seed, "accepted for uniformity");

    // namemap
    auto* nm = app.add_subcommand("namemap", "write a default name-mapping CSV");
    TopoFlags nm_topo;
    add_topology(nm, nm_topo);
    std::string nm_out;
    nm->add_option("-o,--out", nm_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    auto topo_of = [](const TopoFlags& f) { return Topology::build_xgft(f.m, f.w); };
    auto open_out = [](const std::string& path, std::ofstream& file) -> std::ostream& {
        if (path.empty() || path == "-") return std::cout;
        file.open(path);
        if (!file) throw ValidationError("cannot write " + path);
        return file;
    };

    try {
        if (*sim) {
            Topology topo = topo_of(sim_topo);
            if (!sim_names.empty()) NameMap::load_file(sim_names, topo);
            RequestTrace trace = read_trace_file(sim_trace);
            SimOptions so;
            so.algorithm = algorithm_flag(sim_alg);
            so.alloc.oversub_aware = !sim_no_oversub;
            so.verify = sim_verify;
            SimResult r = run_fifo(topo, trace, so);
            std::cout << format_report(r.report);
            std::ofstream log(sim_log);
            if (!log) throw ValidationError("cannot write " + sim_log);
            write_log(log, r.log, to_string(so.algorithm));
            if (!sim_csv.empty()) {
                std::ofstream csv(sim_csv);
                const auto& p = r.report;
                csv << "algorithm,obtained,placed,firstBlockTime,lastPlacementTime,hostUtilization,l1LinkUtilization,"
                       "l2LinkUtilization,totalLinkUtilization,powerOffLinkFraction,wallClock\n"
                    << to_string(so.algorithm) << ',' << p.obtained_jobs << ',' << p.placed_jobs << ','
                    << p.first_block_time << ',' << p.last_placement_time << ',' << p.host_utilization << ','
                    << p.l1_utilization << ',' << p.l2_utilization << ',' << p.total_link_utilization << ','
                    << p.power_off_fraction << ',' << p.wall_clock << '\n';
            }
            if (trace.empty()) std::cerr << "-W- empty trace: no jobs considered\n";
            return r.report.stalled ? kInvalid : 0;
        }
        if (*gen) {
            GenOptions g;
            g.count = gen_n;
            g.arrival_mode = gen_arrival;
            std::tie(g.duration_lo, g.duration_hi) = parse_range(gen_range);
            g.seed = resolve_seed(seed);
            if (gen_dist == "exp") {
                g.dist = SizeDistribution::exponential(gen_mean, gen_cloud);
            } else if (gen_dist == "gauss") {
                g.dist = SizeDistribution::gaussian(gen_mean, gen_cloud, gen_sigma);
            } else if (gen_dist == "uniform") {
                g.dist = SizeDistribution::uniform(gen_mean, gen_cloud);
            } else if (gen_dist == "cdf") {
                if (gen_cdf.empty()) throw CLI::ValidationError("--cdf", "required with --dist cdf");
                g.dist = load_empirical_cdf_file(gen_cdf, gen_cloud);
            } else {
                throw CLI::ValidationError("--dist", "unknown distribution '" + gen_dist + "'");
            }
            std::ofstream file;
            write_trace(open_out(gen_out, file), gen_requests(g));
            return 0;
        }
        if (*check) {
            Topology topo = topology_from_counts(ck_n, ck_k, ck_1, ck_2, ck_3);
            std::ifstream in(ck_log);
            if (!in) throw ValidationError("cannot read " + ck_log);
            std::cout << format_summary(check_log(in, topo));
            return 0;
        }
        if (*serve) {
            Topology topo = topo_of(srv_topo);
            NameMap names = srv_names.empty() ? NameMap::generate(topo) : NameMap::load_file(srv_names, topo);
            ServiceOptions so;
            so.work_dir = srv_dir;
            if (!srv_log.empty()) so.log_path = srv_log;
            TenantService svc(topo, std::move(names), so);
            std::cout << svc.startup_line() << std::endl;
            serve_http(svc, srv_host, srv_port, [&](StopFn) {
                std::cout << "* Running on http://" << srv_host << ':' << srv_port << '/' << std::endl;
            });
            return 0;
        }
        if (*sw) {
            Topology topo = topo_of(sw_topo);
            SweepOptions so;
            if (sw_family == "exp") so.family = DistKind::Exponential;
            else if (sw_family == "gauss") so.family = DistKind::Gaussian;
            else if (sw_family == "uniform") so.family = DistKind::Uniform;
            else throw CLI::ValidationError("--family", "unknown family '" + sw_family + "'");
            so.means = sw_means;
            for (const auto& a : split(sw_algs, ',')) so.algorithms.push_back(algorithm_flag(a));
            so.seeds = sw_seeds.empty() ? std::vector<std::uint64_t>{resolve_seed(seed)} : sw_seeds;
            so.count = sw_count;
            std::tie(so.duration_lo, so.duration_hi) = parse_range(sw_range);
            so.sigma_factor = sw_sigma;
            so.threads = sw_threads;
            std::ofstream file;
            write_sweep_csv(open_out(sw_out, file), sweep(topo, so));
            return 0;
        }
        if (*lat) {
            Topology topo = topo_of(lat_topo);
            LatencyReport r = measure_alloc_latency(topo, read_trace_file(lat_trace), algorithm_flag(lat_alg));
            std::cout << "sizeLo,sizeHi,calls,meanMs,maxMs\n" << std::fixed << std::setprecision(4);
            for (const auto& b : r.buckets)
                std::cout << b.lo << ',' << b.hi << ',' << b.calls << ',' << b.mean_ms << ',' << b.max_ms << '\n';
            std::cerr << "-I- " << r.calls << " allocation calls, mean " << r.mean_ms << " ms\n";
            return 0;
        }
        if (*nm) {
            Topology topo = topo_of(nm_topo);
            std::ofstream file;
            NameMap::generate(topo).write_csv(open_out(nm_out, file));
            return 0;
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const TopologyError& e) {
        std::cerr << "-E- " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "-E- " << e.what() << '\n';
        return kInvalid;
    }
    return kUsage;
}

}  // namespace laas::cli

#include "laas/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <iomanip>
#include <mutex>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <thread>

#include "laas/error.hpp"
#include "laas/link_table.hpp"
#include "laas/verifier.hpp"

namespace laas {

namespace {

using Clock = std::chrono::steady_clock;
using CallHook = std::function<void(int size, double ms)>;

struct Sample {
    std::int64_t t;
    long long hosts;
    long long l1;
    long long l2;
};

SimResult simulate(const Topology& topo, const RequestTrace& trace, const SimOptions& opt, const CallHook& hook) {
    const auto wall0 = Clock::now();
    SimResult res;
    SimReport& rep = res.report;
    rep.obtained_jobs = static_cast<int>(trace.size());

    LinkTable table(topo);
    table.set_logging(opt.keep_log);
    const bool theorems = opt.algorithm == Algorithm::Laas || opt.algorithm == Algorithm::Simple;

    std::vector<std::size_t> order(trace.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return trace[a].arrival < trace[b].arrival; });

    using Dep = std::pair<std::int64_t, std::uint64_t>;  // (time, tenant id)
    std::priority_queue<Dep, std::vector<Dep>, std::greater<>> departures;
    std::deque<std::size_t> waiting;
    std::vector<Sample> samples;
    std::vector<std::int64_t> placed_at;
    placed_at.reserve(trace.size());

    std::size_t next = 0;
    std::int64_t now = trace.empty() ? 0 : trace[order[0]].arrival;
    std::int64_t last_departure = now;

    while (true) {
        while (!departures.empty() && departures.top().first <= now) {
            table.release(tenant_id(departures.top().second), now);
            departures.pop();
        }
        while (next < order.size() && trace[order[next]].arrival <= now) waiting.push_back(order[next++]);

        bool blocked = false;
        while (!waiting.empty()) {
            const TenantRequest& req = trace[waiting.front()];
            const TenantId id = tenant_id(req.id);
            if (table.find(id)) throw ConflictError("trace reuses tenant id " + std::to_string(req.id));
            std::optional<TenantAllocation> a;
            if (req.size <= topo.host_count()) {
                auto c0 = Clock::now();
                a = propose(table, opt.algorithm, id, req.size, opt.alloc);
                if (hook) hook(req.size, std::chrono::duration<double, std::milli>(Clock::now() - c0).count());
            }
            if (!a) {
                blocked = true;
                if (rep.first_block_time < 0) rep.first_block_time = now;
                break;
            }
            if (opt.verify && theorems) {
                if (auto v = check_placement(*a, topo); !v)
                    throw ValidationError("tenant " + to_string(id) + " " + v.rule + ": " + v.witness);
                if (auto v = check_links(*a, topo, opt.alloc.oversub_aware); !v)
                    throw ValidationError("tenant " + to_string(id) + " " + v.rule + ": " + v.witness);
            }
            table.commit(*a, now);
            departures.emplace(now + req.duration, req.id);
            placed_at.push_back(now);
            rep.last_placement_time = now;
            waiting.pop_front();
        }
        if (opt.verify) {
            if (table.free_l1_links() + table.owned_l1_links() + table.faulty_links() != topo.total_l1_links() ||
                table.free_l2_links() + table.owned_l2_links() != topo.total_l2_links() ||
                table.free_host_total() + [&] {
                    long long h = 0;
                    for (const auto& [tid, al] : table.tenants()) h += static_cast<long long>(al.hosts.size());
                    return h;
                }() != topo.host_count()) {
                throw ValidationError("conservation broken at time " + std::to_string(now));
            }
        }
        samples.push_back({now, table.requested_hosts(), table.owned_l1_links(), table.owned_l2_links()});

        if (blocked && departures.empty()) {
            const TenantRequest& req = trace[waiting.front()];
            rep.stalled = true;
            rep.diagnostic = "request " + std::to_string(req.id) + " of " + std::to_string(req.size) +
                             " hosts can never be placed (no departures pending); " +
                             std::to_string(waiting.size() + (order.size() - next)) + " requests left unserved";
            break;
        }
        std::int64_t nt = std::numeric_limits<std::int64_t>::max();
        if (!departures.empty()) nt = departures.top().first;
        if (next < order.size()) nt = std::min(nt, trace[order[next]].arrival);
        if (nt == std::numeric_limits<std::int64_t>::max()) break;
        now = nt;
        last_departure = now;
    }
    rep.placed_jobs = static_cast<int>(placed_at.size());

    // Measurement window.
    std::int64_t w0 = rep.first_block_time, w1 = rep.last_placement_time;
    if (w0 < 0 || w1 <= w0) {
        rep.fallback_window = true;
        w0 = placed_at.empty() ? 0 : placed_at.front();
        w1 = last_departure;
    }
    rep.window_start = w0;
    rep.window_end = w1;
    const double len = static_cast<double>(w1 - w0);

    double host_t = 0, l1_t = 0, l2_t = 0;
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        std::int64_t a = std::max(samples[i].t, w0), b = std::min(samples[i + 1].t, w1);
        if (b <= a) continue;
        double dt = static_cast<double>(b - a);
        host_t += static_cast<double>(samples[i].hosts) * dt;
        l1_t += static_cast<double>(samples[i].l1) * dt;
        l2_t += static_cast<double>(samples[i].l2) * dt;
    }
    for (std::int64_t t : placed_at) {
        if (t < rep.first_block_time || rep.fallback_window) {
            if (!rep.fallback_window) ++rep.skip_first;
            else ++rep.considered_jobs;
        } else if (t >= rep.last_placement_time) {
            ++rep.skip_last;
        } else {
            ++rep.considered_jobs;
        }
    }
    rep.potential_host_time = static_cast<double>(topo.host_count()) * len;
    rep.actual_host_time = host_t;
    if (len > 0) {
        const double tl1 = topo.total_l1_links(), tl2 = topo.total_l2_links();
        rep.host_utilization = 100.0 * host_t / rep.potential_host_time;
        rep.l1_utilization = tl1 > 0 ? 100.0 * l1_t / (tl1 * len) : 0.0;
        rep.l2_utilization = tl2 > 0 ? 100.0 * l2_t / (tl2 * len) : 0.0;
        rep.total_link_utilization = 100.0 * (l1_t + l2_t) / ((tl1 + tl2) * len);
        rep.power_off_fraction = 100.0 - rep.total_link_utilization;
    } else if (rep.diagnostic.empty()) {
        rep.diagnostic = "empty measurement window; utilization reported as 0";
    }
    if (opt.keep_log) res.log = table.log();
    if (opt.keep_occupancy) {
        const double links = topo.total_l1_links() + topo.total_l2_links();
        res.occupancy.reserve(samples.size());
        for (const Sample& s : samples) {
            res.occupancy.push_back({s.t, 100.0 * static_cast<double>(s.hosts) / topo.host_count(),
                                     100.0 - 100.0 * static_cast<double>(s.l1 + s.l2) / links});
        }
    }
    rep.wall_clock = std::chrono::duration<double>(Clock::now() - wall0).count();
    return res;
}

}  // namespace

SimResult run_fifo(const Topology& topo, const RequestTrace& trace, const SimOptions& opt) {
    return simulate(topo, trace, opt, nullptr);
}

std::string format_report(const SimReport& r) {
    std::ostringstream os;
    os << "-I- Obtained " << r.obtained_jobs << " jobs\n";
    os << "-I- first waiting job at: " << r.first_block_time << " lastJobPlacementTime " << r.last_placement_time
       << '\n';
    if (r.fallback_window) {
        os << "-W- no blocked steady state; measuring over [" << r.window_start << ',' << r.window_end << "]\n";
    }
    os << "-I- Total potential hosts * time = " << r.potential_host_time << '\n';
    os << "-I- Total considered jobs: " << r.considered_jobs << " skip first: " << r.skip_first
       << " last: " << r.skip_last << '\n';
    os << "-I- Total actual hosts * time = " << r.actual_host_time << '\n';
    os << std::fixed << std::setprecision(2);
    os << "-I- Host Utilization = " << r.host_utilization << '\n';
    os << "-I- L1 Up Links Utilization  = " << r.l1_utilization << '\n';
    os << "-I- L2 Up Links Utilization  = " << r.l2_utilization << '\n';
    os << "-I- Total Links Utilization  = " << r.total_link_utilization << '\n';
    os << "-I- Unused Links (power-off) = " << r.power_off_fraction << '\n';
    os << std::setprecision(1) << "-I- Run Time = " << r.wall_clock << " sec\n";
    if (!r.diagnostic.empty()) os << (r.stalled ? "-E- " : "-W- ") << r.diagnostic << '\n';
    return os.str();
}

std::vector<SweepPoint> sweep(const Topology& topo, const SweepOptions& opt) {
    if (opt.means.empty() || opt.algorithms.empty() || opt.seeds.empty()) {
        throw ValidationError("sweep grids must be nonempty");
    }
    struct Job {
        std::size_t mean_i, seed_i;
    };
    std::vector<Job> jobs;
    for (std::size_t m = 0; m < opt.means.size(); ++m)
        for (std::size_t s = 0; s < opt.seeds.size(); ++s) jobs.push_back({m, s});

    const std::size_t na = opt.algorithms.size();
    std::vector<SweepPoint> points(jobs.size() * na);
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto worker = [&] {
        for (std::size_t j; (j = cursor.fetch_add(1)) < jobs.size();) {
            try {
                const double mean = opt.means[jobs[j].mean_i];
                const std::uint64_t seed = opt.seeds[jobs[j].seed_i];
                GenOptions g;
                g.count = opt.count;
                g.duration_lo = opt.duration_lo;
                g.duration_hi = opt.duration_hi;
                g.seed = seed;
                switch (opt.family) {
                    case DistKind::Exponential: g.dist = SizeDistribution::exponential(mean, topo.host_count()); break;
                    case DistKind::Gaussian:
                        g.dist = SizeDistribution::gaussian(mean, topo.host_count(), opt.sigma_factor * mean);
                        break;
                    case DistKind::Uniform: g.dist = SizeDistribution::uniform(mean, topo.host_count()); break;
                    case DistKind::Empirical: throw ValidationError("sweeps take a parametric family");
                }
                RequestTrace trace = gen_requests(g);
                for (std::size_t a = 0; a < na; ++a) {
                    SimOptions so;
                    so.algorithm = opt.algorithms[a];
                    so.keep_log = false;
                    SweepPoint& p = points[j * na + a];
                    p.mean = mean;
                    p.algorithm = so.algorithm;
                    p.seed = seed;
                    p.report = run_fifo(topo, trace, so).report;
                }
            } catch (...) {
                std::lock_guard lk(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    unsigned n = opt.threads > 0 ? static_cast<unsigned>(opt.threads) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(jobs.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "mean,algorithm,seed,hostUtilization,powerOffLinkFraction\n";
    for (const auto& p : points) {
        out << p.mean << ',' << to_string(p.algorithm) << ',' << p.seed << ',' << std::fixed << std::setprecision(4)
            << p.report.host_utilization << ',' << p.report.power_off_fraction << std::defaultfloat << '\n';
    }
}

LatencyReport measure_alloc_latency(const Topology& topo, const RequestTrace& trace, Algorithm alg,
                                    const AllocOptions& opt) {
    std::vector<long long> calls;
    std::vector<double> sum, mx;
    LatencyReport rep;
    double total = 0;
    auto hook = [&](int size, double ms) {
        std::size_t b = 0;
        while ((2 << b) <= size) ++b;  // bucket b holds [2^b, 2^(b+1))
        if (calls.size() <= b) {
            calls.resize(b + 1, 0);
            sum.resize(b + 1, 0.0);
            mx.resize(b + 1, 0.0);
        }
        ++calls[b];
        sum[b] += ms;
        mx[b] = std::max(mx[b], ms);
        ++rep.calls;
        total += ms;
    };
    SimOptions so;
    so.algorithm = alg;
    so.alloc = opt;
    so.keep_log = false;
    simulate(topo, trace, so, hook);
    for (std::size_t b = 0; b < calls.size(); ++b) {
        if (calls[b] == 0) continue;
        LatencyBucket lb;
        lb.lo = 1 << b;
        lb.hi = (2 << b) - 1;
        lb.calls = calls[b];
        lb.mean_ms = sum[b] / static_cast<double>(calls[b]);
        lb.max_ms = mx[b];
        rep.buckets.push_back(lb);
    }
    rep.mean_ms = rep.calls ? total / static_cast<double>(rep.calls) : 0.0;
    return rep;
}

}  // namespace laas

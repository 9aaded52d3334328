#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "laas/allocator.hpp"
#include "laas/topology.hpp"
#include "laas/transaction_log.hpp"
#include "laas/workload.hpp"

namespace laas {

struct SimOptions {
    Algorithm algorithm = Algorithm::Laas;
    AllocOptions alloc;
    /// Re-check every committed allocation (placement and link rules for
    /// laas/simple) and link conservation after every event. Slow.
    bool verify = false;
    bool keep_log = true;
    /// Record the occupancy after every event, for power-off plots.
    bool keep_occupancy = false;
};

/// Metrics over the measurement window [first_block_time,
/// last_placement_time]. Host utilization integrates the requested host
/// counts; link utilizations integrate owned up-links.
struct SimReport {
    int obtained_jobs = 0;
    int placed_jobs = 0;
    std::int64_t first_block_time = -1;
    std::int64_t last_placement_time = -1;
    std::int64_t window_start = 0;
    std::int64_t window_end = 0;
    bool fallback_window = false;  ///< no usable block; whole busy period used
    double potential_host_time = 0;
    double actual_host_time = 0;
    int considered_jobs = 0;
    int skip_first = 0;
    int skip_last = 0;
    double host_utilization = 0;
    double l1_utilization = 0;
    double l2_utilization = 0;
    double total_link_utilization = 0;
    double power_off_fraction = 0;  ///< percent of up-links owned by nobody
    double wall_clock = 0;          ///< seconds
    bool stalled = false;
    std::string diagnostic;
};

/// State after all changes at one instant, in percent of the cloud.
struct Occupancy {
    std::int64_t time = 0;
    double host_utilization = 0;
    double power_off_fraction = 0;
};

struct SimResult {
    SimReport report;
    std::vector<LogRecord> log;
    std::vector<Occupancy> occupancy;  ///< filled when keep_occupancy is set
};

/// Strict FIFO: the queue head blocks everything behind it. At each instant
/// departures are processed first, then the head is retried until it fails.
SimResult run_fifo(const Topology& topo, const RequestTrace& trace, const SimOptions& opt = {});

/// The "-I-" report lines.
std::string format_report(const SimReport& r);

struct SweepOptions {
    DistKind family = DistKind::Exponential;
    std::vector<double> means;
    std::vector<Algorithm> algorithms;
    std::vector<std::uint64_t> seeds;
    int count = 10000;
    std::int64_t duration_lo = 20;
    std::int64_t duration_hi = 3000;
    /// Gaussian spread as a fraction of the mean (0.2 gives x / 5).
    double sigma_factor = 0.2;
    int threads = 0;  ///< 0: hardware concurrency
};

struct SweepPoint {
    double mean = 0;
    Algorithm algorithm = Algorithm::Laas;
    std::uint64_t seed = 0;
    SimReport report;
};

/// One run per (mean, algorithm, seed); every algorithm sees the same trace
/// for a given (mean, seed). Points come back in grid order.
std::vector<SweepPoint> sweep(const Topology& topo, const SweepOptions& opt);
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

struct LatencyBucket {
    int lo = 0;  ///< smallest size in the bucket
    int hi = 0;  ///< largest size in the bucket
    long long calls = 0;
    double mean_ms = 0;
    double max_ms = 0;
};

struct LatencyReport {
    std::vector<LatencyBucket> buckets;  ///< power-of-two size buckets with calls
    long long calls = 0;
    double mean_ms = 0;
};

/// Runs the FIFO simulation timing every allocation call (successful or
/// not), bucketed by requested size.
LatencyReport measure_alloc_latency(const Topology& topo, const RequestTrace& trace, Algorithm alg,
                                    const AllocOptions& opt = {});

}  // namespace laas

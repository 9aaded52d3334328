#include <doctest.h>

#include <cmath>
#include <sstream>

#include "laas/error.hpp"
#include "laas/simulator.hpp"
#include "laas/verifier.hpp"

using namespace laas;

namespace {

Topology tiny() { return Topology::build_xgft({2, 2}, {1, 2}); }

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

RequestTrace exp_trace(double mean, int cloud, int count, std::uint64_t seed) {
    GenOptions g;
    g.count = count;
    g.dist = SizeDistribution::exponential(mean, cloud);
    g.seed = seed;
    return gen_requests(g);
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("hand-computed window on a 4-host tree") {
    // t=0: 1 placed, 2 blocks. t=10: 2 placed, 3 blocks. t=20: 3 placed.
    RequestTrace tr{{1, 4, 0, 10}, {2, 4, 0, 10}, {3, 2, 0, 5}};
    auto r = run_fifo(tiny(), tr).report;
    CHECK(r.obtained_jobs == 3);
    CHECK(r.placed_jobs == 3);
    CHECK(r.first_block_time == 0);
    CHECK(r.last_placement_time == 20);
    CHECK_FALSE(r.fallback_window);
    CHECK(r.potential_host_time == doctest::Approx(80));
    CHECK(r.actual_host_time == doctest::Approx(80));
    CHECK(r.host_utilization == doctest::Approx(100));
    CHECK(r.l1_utilization == doctest::Approx(100));
    CHECK(r.considered_jobs == 2);
    CHECK(r.skip_first == 0);
    CHECK(r.skip_last == 1);
    CHECK_FALSE(r.stalled);
}

TEST_CASE("jobs placed before the first block are skipped") {
    // 1 runs alone from 0; 2 blocks at 5 and gets in at 100; 3 follows at 110.
    RequestTrace tr{{1, 2, 0, 100}, {2, 4, 5, 10}, {3, 1, 6, 10}};
    auto r = run_fifo(tiny(), tr).report;
    CHECK(r.first_block_time == 5);
    CHECK(r.last_placement_time == 110);
    CHECK(r.skip_first == 1);
    CHECK(r.considered_jobs == 1);
    CHECK(r.skip_last == 1);
    // 2 hosts over [5,100), 4 hosts over [100,110).
    CHECK(r.host_utilization == doctest::Approx(100.0 * (2 * 95 + 4 * 10) / (4 * 105)));
    CHECK(format_report(r).find("-I- Total considered jobs: 1 skip first: 1 last: 1") != std::string::npos);
}

TEST_CASE("requested size counts toward utilization") {
    // 3 of 4 hosts busy over the whole window.
    RequestTrace tr{{1, 3, 0, 10}, {2, 4, 0, 10}};
    auto r = run_fifo(tiny(), tr).report;
    CHECK(r.first_block_time == 0);
    CHECK(r.last_placement_time == 10);
    CHECK(r.host_utilization == doctest::Approx(75));
}

TEST_CASE("no blocking falls back to the busy period") {
    RequestTrace tr{{1, 1, 0, 10}};
    auto r = run_fifo(tiny(), tr).report;
    CHECK(r.fallback_window);
    CHECK(r.window_start == 0);
    CHECK(r.window_end == 10);
    CHECK(r.host_utilization == doctest::Approx(25));
    CHECK(format_report(r).find("-W- no blocked steady state") != std::string::npos);
}

TEST_CASE("impossible head request stalls with a diagnostic") {
    RequestTrace tr{{1, 2, 0, 10}, {2, 5, 0, 10}, {3, 1, 0, 10}};
    auto r = run_fifo(tiny(), tr).report;
    CHECK(r.stalled);
    CHECK(r.placed_jobs == 1);
    CHECK(r.diagnostic.find("request 2") != std::string::npos);
    CHECK(r.diagnostic.find("2 requests left") != std::string::npos);
    CHECK(format_report(r).find("-E- ") != std::string::npos);
}

TEST_CASE("reused tenant id is a conflict") {
    RequestTrace tr{{1, 1, 0, 10}, {1, 1, 0, 10}};
    CHECK_THROWS_AS(run_fifo(tiny(), tr), ConflictError);
}

TEST_CASE("strict FIFO: a small job does not jump a blocked head") {
    RequestTrace tr{{1, 3, 0, 10}, {2, 4, 0, 10}, {3, 1, 0, 10}};
    auto res = run_fifo(tiny(), tr);
    // 3 would fit next to 1 at t=0 but waits behind 2.
    std::int64_t t3 = -1;
    for (const auto& rec : res.log)
        if (rec.kind == LogRecord::Kind::Add && rec.id == tenant_id(3)) t3 = rec.time;
    CHECK(t3 == 20);
}

TEST_CASE("simulator logs pass the checker for every algorithm") {
    for (auto m : std::vector<std::pair<std::vector<int>, std::vector<int>>>{{{4, 4}, {1, 4}}, {{4, 4, 4}, {1, 4, 4}}}) {
        Topology topo = Topology::build_xgft(m.first, m.second);
        auto tr = exp_trace(5, topo.host_count(), 400, 11);
        for (auto alg : {Algorithm::Laas, Algorithm::Simple, Algorithm::ExtendedSimple, Algorithm::Unconstrained}) {
            SimOptions so;
            so.algorithm = alg;
            so.verify = true;
            auto res = run_fifo(topo, tr, so);
            CHECK_FALSE(res.report.stalled);
            std::stringstream log;
            write_log(log, res.log, to_string(alg));
            auto s = check_log(log, topo);
            CHECK(s.adds == res.report.placed_jobs);
            CHECK(s.rems == s.adds);
        }
    }
}

TEST_CASE("utilization bounds") {
    Topology topo = Topology::build_xgft({4, 4, 4}, {1, 4, 4});
    auto tr = exp_trace(6, topo.host_count(), 500, 3);
    for (auto alg : {Algorithm::Laas, Algorithm::Simple, Algorithm::Unconstrained}) {
        SimOptions so;
        so.algorithm = alg;
        auto r = run_fifo(topo, tr, so).report;
        CHECK(r.host_utilization > 0);
        CHECK(r.host_utilization <= 100.0 + 1e-9);
        CHECK(r.total_link_utilization >= 0);
        CHECK(r.power_off_fraction == doctest::Approx(100 - r.total_link_utilization));
        CHECK(r.considered_jobs + r.skip_first + r.skip_last == r.placed_jobs);
        if (alg == Algorithm::Unconstrained) CHECK(r.total_link_utilization == 0);
    }
}

TEST_CASE("unused links fall as occupancy rises within a run") {
    Topology topo = Topology::build_xgft({4, 4, 4}, {1, 4, 4});
    GenOptions g;
    g.count = 800;
    g.dist = SizeDistribution::exponential(6, topo.host_count());
    g.arrival_mode = 20;
    g.seed = 5;
    SimOptions so;
    so.keep_occupancy = true;
    auto res = run_fifo(topo, gen_requests(g), so);
    REQUIRE(res.occupancy.size() > 50);
    std::vector<double> h, p;
    for (const auto& o : res.occupancy) {
        CHECK(o.host_utilization >= 0);
        CHECK(o.power_off_fraction <= 100);
        h.push_back(o.host_utilization);
        p.push_back(o.power_off_fraction);
    }
    // Negative, and far from zero for this many samples.
    const double r = pearson(h, p);
    const double t = r * std::sqrt(static_cast<double>(h.size()) - 2) / std::sqrt(1 - r * r);
    CHECK(r < 0);
    CHECK(t < -3);
}

TEST_CASE("a one-point sweep equals a direct run") {
    Topology topo = Topology::build_xgft({4, 4}, {1, 4});
    SweepOptions so;
    so.means = {3};
    so.algorithms = {Algorithm::Laas, Algorithm::Unconstrained};
    so.seeds = {7};
    so.count = 300;
    auto pts = sweep(topo, so);
    REQUIRE(pts.size() == 2);
    auto tr = exp_trace(3, topo.host_count(), 300, 7);
    SimOptions direct;
    direct.keep_log = false;
    CHECK(pts[0].report.host_utilization == run_fifo(topo, tr, direct).report.host_utilization);
    direct.algorithm = Algorithm::Unconstrained;
    CHECK(pts[1].report.host_utilization == run_fifo(topo, tr, direct).report.host_utilization);
    CHECK(pts[1].algorithm == Algorithm::Unconstrained);

    std::ostringstream csv;
    write_sweep_csv(csv, pts);
    CHECK(csv.str().rfind("mean,algorithm,seed,hostUtilization,powerOffLinkFraction\n", 0) == 0);

    so.means.clear();
    CHECK_THROWS_AS(sweep(topo, so), ValidationError);
}

TEST_CASE("sweep results do not depend on the thread count") {
    Topology topo = Topology::build_xgft({4, 4}, {1, 4});
    SweepOptions so;
    so.means = {2, 4};
    so.algorithms = {Algorithm::Laas, Algorithm::Simple};
    so.seeds = {1, 2};
    so.count = 200;
    so.threads = 1;
    auto a = sweep(topo, so);
    so.threads = 4;
    auto b = sweep(topo, so);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].mean == b[i].mean);
        CHECK(a[i].seed == b[i].seed);
        CHECK(a[i].report.host_utilization == b[i].report.host_utilization);
    }
}

TEST_CASE("latency buckets are powers of two") {
    RequestTrace tr{{1, 1, 0, 5}, {2, 2, 0, 5}, {3, 3, 0, 5}, {4, 4, 0, 5}, {5, 9, 0, 5}};
    auto r = measure_alloc_latency(Topology::build_xgft({4, 4}, {1, 4}), tr, Algorithm::Laas);
    REQUIRE(r.buckets.size() == 4);
    CHECK(r.buckets[0].lo == 1);
    CHECK(r.buckets[0].hi == 1);
    CHECK(r.buckets[1].lo == 2);
    CHECK(r.buckets[1].hi == 3);
    CHECK(r.buckets[1].calls >= 2);
    CHECK(r.buckets[2].lo == 4);
    CHECK(r.buckets[3].lo == 8);
    CHECK(r.buckets[3].hi == 15);
    long long calls = 0;
    for (const auto& b : r.buckets) {
        calls += b.calls;
        CHECK(b.max_ms >= b.mean_ms);
    }
    CHECK(calls == r.calls);
}

}

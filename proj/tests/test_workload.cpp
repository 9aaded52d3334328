#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "laas/error.hpp"
#include "laas/random.hpp"
#include "laas/workload.hpp"

using namespace laas;

namespace {

// Mean of ceil(E) for E exponential with mean x conditioned on E <= cloud.
double truncated_exp_mean(double x, int cloud) {
    double num = 0;
    for (int k = 1; k <= cloud; ++k) num += k * (std::exp(-(k - 1) / x) - std::exp(-k / x));
    return num / (1.0 - std::exp(-cloud / x));
}

struct Moments {
    double mean = 0;
    double var = 0;
    int lo = 1 << 30;
    int hi = 0;
};

Moments draw(const SizeDistribution& d, int n, std::uint64_t seed = 1) {
    Rng rng(seed);
    Moments m;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        int v = d.sample(rng);
        s += v;
        s2 += static_cast<double>(v) * v;
        m.lo = std::min(m.lo, v);
        m.hi = std::max(m.hi, v);
    }
    m.mean = s / n;
    m.var = s2 / n - m.mean * m.mean;
    return m;
}

}  // namespace

TEST_SUITE("workload") {

TEST_CASE("rng is reproducible and in range") {
    Rng a(5), b(5), c(6);
    for (int i = 0; i < 100; ++i) {
        auto x = a.next();
        CHECK(x == b.next());
        (void)c;
    }
    CHECK(Rng(5).next() != Rng(6).next());
    Rng r(1);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        auto v = r.uniform_int(-2, 3);
        CHECK(v >= -2);
        CHECK(v <= 3);
        seen.insert(v);
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    CHECK(seen.size() == 6);
    std::vector<int> v{1, 2, 3, 4, 5, 6, 7};
    r.shuffle(v);
    std::vector<int> s = v;
    std::sort(s.begin(), s.end());
    CHECK(s == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("rng transforms have the right moments") {
    Rng r(3);
    const int n = 200000;
    double sn = 0, sn2 = 0, se = 0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        sn += z;
        sn2 += z * z;
        se += r.exponential(4.0);
    }
    CHECK(sn / n == doctest::Approx(0.0).epsilon(0.01).scale(1.0));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(se / n == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("truncated exponential matches the analytic mean") {
    for (auto [x, cloud] : std::vector<std::pair<double, int>>{{8, 11664}, {4, 32}, {64, 100}, {0.5, 10}}) {
        auto d = SizeDistribution::exponential(x, cloud);
        const int n = 200000;
        auto m = draw(d, n);
        double expect = truncated_exp_mean(x, cloud);
        double se = std::sqrt(m.var / n);
        CHECK_MESSAGE(std::abs(m.mean - expect) < 4 * se + 1e-9, "x=", x, " mean=", m.mean, " expect=", expect);
        CHECK(m.lo >= 1);
        CHECK(m.hi <= cloud);
    }
}

TEST_CASE("gaussian sizes stay in range") {
    auto d = SizeDistribution::gaussian(50, 60);
    CHECK(d.sigma == doctest::Approx(10.0));
    auto m = draw(d, 50000);
    CHECK(m.lo >= 1);
    CHECK(m.hi <= 60);
    auto fixed = SizeDistribution::gaussian(7.2, 100, 0.0);
    auto f = draw(fixed, 100);
    CHECK(f.lo == 8);
    CHECK(f.hi == 8);
    auto wide = draw(SizeDistribution::gaussian(32, 11664, 0.0001), 1000);
    CHECK(wide.lo == 32);
    CHECK(wide.hi == 33);
}

TEST_CASE("uniform sizes cover [0.2x, 1.8x]") {
    auto d = SizeDistribution::uniform(10, 1000);
    auto m = draw(d, 100000);
    // 0.2x itself needs u = 0 exactly.
    CHECK(m.lo == 3);
    CHECK(m.hi == 18);
    // ceil adds half a unit on average.
    CHECK(m.mean == doctest::Approx(10.5).epsilon(0.01));
    auto clipped = draw(SizeDistribution::uniform(10, 12), 10000);
    CHECK(clipped.hi == 12);
}

TEST_CASE("empirical CDF sampling passes a chi-square test") {
    std::istringstream in("# size,cdf\n4,0.5\n8,1.0\n");
    auto d = load_empirical_cdf(in, 100);
    CHECK(d.x == doctest::Approx(6.0));
    Rng rng(2);
    std::map<int, int> counts;
    const int n = 20000;
    for (int i = 0; i < n; ++i) ++counts[d.sample(rng)];
    CHECK(counts.size() == 2);
    double chi = 0;
    for (int size : {4, 8}) {
        double e = 0.5 * n;
        chi += (counts[size] - e) * (counts[size] - e) / e;
    }
    // One degree of freedom, 99.9% quantile.
    CHECK(chi < 10.83);
}

TEST_CASE("empirical CDF validation") {
    auto load = [](const std::string& s) {
        std::istringstream in(s);
        return load_empirical_cdf(in, 100);
    };
    CHECK_THROWS_AS(load(""), ValidationError);
    CHECK_THROWS_AS(load("4,0.5\n8,0.9\n"), ValidationError);
    CHECK_THROWS_AS(load("4,0.5\n2,1.0\n"), ValidationError);
    CHECK_THROWS_AS(load("4,0.6\n8,0.5\n9,1\n"), ValidationError);
    CHECK_THROWS_WITH_AS(load("4,0.5\nx,1\n"), doctest::Contains("row 2"), ValidationError);
    // Sizes beyond the cloud are clamped.
    auto d = load("1,0.5\n500,1\n");
    Rng rng(1);
    for (int i = 0; i < 200; ++i) CHECK(d.sample(rng) <= 100);
}

TEST_CASE("shipped synthetic CDF") {
    auto d = load_empirical_cdf_file(LAAS_SOURCE_DIR "/data/julich_synthetic_cdf.csv", 11664);
    Rng rng(4);
    std::map<int, int> counts;
    for (int i = 0; i < 100000; ++i) ++counts[d.sample(rng)];
    // Powers of two are the most frequent sizes.
    std::vector<std::pair<int, int>> by_freq(counts.begin(), counts.end());
    std::sort(by_freq.begin(), by_freq.end(), [](auto a, auto b) { return a.second > b.second; });
    for (int i = 0; i < 6; ++i) {
        int s = by_freq[static_cast<std::size_t>(i)].first;
        CHECK_MESSAGE((s & (s - 1)) == 0, "size ", s);
    }
}

TEST_CASE("generator fields") {
    GenOptions g;
    g.count = 1000;
    g.dist = SizeDistribution::exponential(8, 11664);
    g.seed = 9;
    auto tr = gen_requests(g);
    REQUIRE(tr.size() == 1000);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr[i].id == i + 1);
        CHECK(tr[i].arrival == 0);
        CHECK(tr[i].duration >= 20);
        CHECK(tr[i].duration <= 3000);
    }
    CHECK(gen_requests(g) == tr);
    g.seed = 10;
    CHECK_FALSE(gen_requests(g) == tr);
}

TEST_CASE("exponential arrivals") {
    GenOptions g;
    g.count = 20000;
    g.dist = SizeDistribution::exponential(8, 100);
    g.arrival_mode = 5;
    auto tr = gen_requests(g);
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr[i].arrival >= tr[i - 1].arrival);
    double gap = static_cast<double>(tr.back().arrival) / static_cast<double>(tr.size() - 1);
    CHECK(gap == doctest::Approx(5.0).epsilon(0.03));
}

TEST_CASE("generator rejects bad options") {
    GenOptions g;
    g.dist = SizeDistribution::exponential(8, 10);
    g.duration_lo = 5;
    g.duration_hi = 4;
    CHECK_THROWS_AS(gen_requests(g), ValidationError);
    g.duration_hi = 9;
    g.dist.x = 0;
    CHECK_THROWS_AS(gen_requests(g), ValidationError);
    g.dist.x = 1;
    g.count = -1;
    CHECK_THROWS_AS(gen_requests(g), ValidationError);
}

TEST_CASE("trace round trip and row errors") {
    GenOptions g;
    g.count = 50;
    g.dist = SizeDistribution::uniform(6, 64);
    g.arrival_mode = 3;
    auto tr = gen_requests(g);
    std::stringstream ss;
    write_trace(ss, tr);
    CHECK(read_trace(ss) == tr);

    auto read = [](const std::string& s) {
        std::istringstream in(s);
        return read_trace(in);
    };
    CHECK(read("1,2,0,5\n\n# note\n2,1,3,4\n").size() == 2);
    CHECK_THROWS_WITH_AS(read("1,2,0,5\n2,x,0,5\n"), doctest::Contains("row 2"), ValidationError);
    CHECK_THROWS_WITH_AS(read("1,0,0,5\n"), doctest::Contains("size"), ValidationError);
    CHECK_THROWS_AS(read("1,2,0\n"), ValidationError);
    CHECK_THROWS_AS(read("1,2,-1,5\n"), ValidationError);
    CHECK_THROWS_AS(read("1,2,0,0\n"), ValidationError);
}

}

#include "laas/workload.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "laas/error.hpp"

namespace laas {

namespace {

int round_clamp(double v, int cloud) {
    double c = std::ceil(v);
    if (c < 1.0) return 1;
    if (c > cloud) return cloud;
    return static_cast<int>(c);
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(trim(f));
    return out;
}

template <class T>
bool parse_num(const std::string& s, T& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

}  // namespace

SizeDistribution SizeDistribution::exponential(double x, int cloud) {
    SizeDistribution d;
    d.kind = DistKind::Exponential;
    d.x = x;
    d.cloud = cloud;
    return d;
}

SizeDistribution SizeDistribution::gaussian(double x, int cloud, double sigma) {
    SizeDistribution d;
    d.kind = DistKind::Gaussian;
    d.x = x;
    d.sigma = sigma < 0 ? x / 5.0 : sigma;
    d.cloud = cloud;
    return d;
}

SizeDistribution SizeDistribution::uniform(double x, int cloud) {
    SizeDistribution d;
    d.kind = DistKind::Uniform;
    d.x = x;
    d.cloud = cloud;
    return d;
}

int SizeDistribution::sample(Rng& rng) const {
    switch (kind) {
        case DistKind::Exponential: {
            // Truncation by rejection keeps the conditional shape on (0, cloud].
            for (;;) {
                double v = rng.exponential(x);
                if (v <= cloud) return round_clamp(v, cloud);
            }
        }
        case DistKind::Gaussian: {
            if (sigma <= 0.0) return round_clamp(x, cloud);
            for (;;) {
                double v = x + sigma * rng.normal();
                if (v > 0.0 && v <= cloud) return round_clamp(v, cloud);
            }
        }
        case DistKind::Uniform: {
            double v = 0.2 * x + 1.6 * x * rng.uniform01();
            return round_clamp(v, cloud);
        }
        case DistKind::Empirical: {
            double u = rng.uniform01();
            for (const auto& [size, p] : cdf)
                if (u < p) return std::min(size, cloud);
            return std::min(cdf.back().first, cloud);
        }
    }
    return 1;
}

std::string to_string(DistKind k) {
    switch (k) {
        case DistKind::Exponential: return "exp";
        case DistKind::Gaussian: return "gauss";
        case DistKind::Uniform: return "uniform";
        case DistKind::Empirical: return "cdf";
    }
    return "?";
}

SizeDistribution load_empirical_cdf(std::istream& in, int cloud) {
    SizeDistribution d;
    d.kind = DistKind::Empirical;
    d.cloud = cloud;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto f = fields(t);
        int size = 0;
        double p = 0;
        if (f.size() != 2 || !parse_num(f[0], size) || !parse_num(f[1], p)) {
            throw ValidationError("CDF row " + std::to_string(row) + " (\"" + t + "\"): expected size,probability");
        }
        if (size < 1) throw ValidationError("CDF row " + std::to_string(row) + ": size must be at least 1");
        if (p < 0.0 || p > 1.0 + 1e-9) throw ValidationError("CDF row " + std::to_string(row) + ": probability out of [0,1]");
        if (!d.cdf.empty()) {
            if (size <= d.cdf.back().first) throw ValidationError("CDF row " + std::to_string(row) + ": sizes must increase");
            if (p < d.cdf.back().second) throw ValidationError("CDF row " + std::to_string(row) + ": CDF decreases");
        }
        d.cdf.emplace_back(size, p);
    }
    if (d.cdf.empty()) throw ValidationError("CDF has no rows");
    if (std::abs(d.cdf.back().second - 1.0) > 1e-9) throw ValidationError("CDF does not end at 1");
    d.cdf.back().second = 1.0;
    double mean = 0, prev = 0;
    for (const auto& [size, p] : d.cdf) {
        mean += size * (p - prev);
        prev = p;
    }
    d.x = mean;
    return d;
}

SizeDistribution load_empirical_cdf_file(const std::string& path, int cloud) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open CDF file " + path);
    return load_empirical_cdf(in, cloud);
}

RequestTrace gen_requests(const GenOptions& opt) {
    if (opt.count < 0) throw ValidationError("request count must not be negative");
    if (opt.duration_lo < 1 || opt.duration_hi < opt.duration_lo) {
        throw ValidationError("duration range must satisfy 1 <= lo <= hi");
    }
    if (opt.dist.cloud < 1) throw ValidationError("cloud size must be positive");
    if (opt.dist.kind != DistKind::Empirical && !(opt.dist.x > 0)) throw ValidationError("mean must be positive");
    Rng rng(opt.seed);
    RequestTrace out;
    out.reserve(static_cast<std::size_t>(opt.count));
    std::int64_t t = 0;
    for (int i = 0; i < opt.count; ++i) {
        TenantRequest r;
        r.id = static_cast<std::uint64_t>(i + 1);
        r.size = opt.dist.sample(rng);
        r.duration = rng.uniform_int(opt.duration_lo, opt.duration_hi);
        if (opt.arrival_mode > 0 && i > 0) t += static_cast<std::int64_t>(std::llround(rng.exponential(opt.arrival_mode)));
        r.arrival = t;
        out.push_back(r);
    }
    return out;
}

void write_trace(std::ostream& out, const RequestTrace& trace) {
    for (const auto& r : trace) out << r.id << ',' << r.size << ',' << r.arrival << ',' << r.duration << '\n';
}

RequestTrace read_trace(std::istream& in) {
    RequestTrace out;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto f = fields(t);
        TenantRequest r;
        if (f.size() != 4 || !parse_num(f[0], r.id) || !parse_num(f[1], r.size) || !parse_num(f[2], r.arrival) ||
            !parse_num(f[3], r.duration)) {
            throw ValidationError("trace row " + std::to_string(row) + " (\"" + t +
                                  "\"): expected id,size,arrival,duration");
        }
        if (r.size < 1) throw ValidationError("trace row " + std::to_string(row) + ": size must be at least 1");
        if (r.duration < 1) throw ValidationError("trace row " + std::to_string(row) + ": duration must be positive");
        if (r.arrival < 0) throw ValidationError("trace row " + std::to_string(row) + ": negative arrival");
        out.push_back(r);
    }
    return out;
}

RequestTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open trace file " + path);
    return read_trace(in);
}

}  // namespace laas

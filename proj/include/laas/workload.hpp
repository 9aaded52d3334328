#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "laas/random.hpp"

namespace laas {

enum class DistKind { Exponential, Gaussian, Uniform, Empirical };

/// Tenant size distribution truncated to [1, cloud]. Continuous draws are
/// rounded up and clamped.
struct SizeDistribution {
    DistKind kind = DistKind::Exponential;
    double x = 8.0;       ///< mean parameter
    double sigma = 1.6;   ///< Gaussian only
    int cloud = 1;        ///< upper truncation bound
    std::vector<std::pair<int, double>> cdf;  ///< Empirical only: (size, cumulative probability)

    static SizeDistribution exponential(double x, int cloud);
    /// sigma < 0 selects the default x / 5.
    static SizeDistribution gaussian(double x, int cloud, double sigma = -1.0);
    static SizeDistribution uniform(double x, int cloud);

    int sample(Rng& rng) const;
};

std::string to_string(DistKind k);

/// Parses "size,probability" rows (blank lines and '#' comments skipped).
/// Throws ValidationError on non-monotone sizes or probabilities, or a last
/// probability other than 1.
SizeDistribution load_empirical_cdf(std::istream& in, int cloud);
SizeDistribution load_empirical_cdf_file(const std::string& path, int cloud);

struct TenantRequest {
    std::uint64_t id = 0;
    int size = 1;
    std::int64_t arrival = 0;
    std::int64_t duration = 1;
    bool operator==(const TenantRequest&) const = default;
};

using RequestTrace = std::vector<TenantRequest>;

struct GenOptions {
    int count = 1;
    SizeDistribution dist;
    std::int64_t duration_lo = 20;
    std::int64_t duration_hi = 3000;
    /// 0: every request arrives at time 0. a > 0: exponential gaps of mean a.
    int arrival_mode = 0;
    std::uint64_t seed = 1;
};

RequestTrace gen_requests(const GenOptions& opt);

/// Header-less "id,size,arrival,duration" rows.
void write_trace(std::ostream& out, const RequestTrace& trace);
/// Throws ValidationError naming the row of the first malformed line.
RequestTrace read_trace(std::istream& in);
RequestTrace read_trace_file(const std::string& path);

}  // namespace laas

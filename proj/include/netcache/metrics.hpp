#ifndef NETCACHE_METRICS_HPP
#define NETCACHE_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace netcache {

// Stack distance of a request: number of distinct ids requested strictly
// between this and the previous request for the same id. First occurrences
// are undefined and excluded from the statistics.
class StackDistanceAnalyzer {
public:
    std::optional<std::uint64_t> observe(std::uint64_t id);

private:
    // Fenwick tree over request positions; a mark sits at the most recent
    // occurrence of every id seen so far.
    void add(std::size_t pos, int delta);
    std::uint64_t prefix(std::size_t pos) const;

    std::vector<int> tree_;
    std::map<std::uint64_t, std::size_t> last_; // id -> 1-based position
    std::size_t clock_ = 0;
};

struct SDStats {
    std::uint64_t min_sd = 0;
    std::uint64_t max_sd = 0;
    double avg_sd = 0.0;
    std::map<std::uint64_t, std::uint64_t> histogram;
    std::uint64_t defined_count = 0;
    std::uint64_t undefined_count = 0; // first occurrences

    bool empty() const { return defined_count == 0; }
};

std::vector<std::optional<std::uint64_t>> stack_distances(std::span<const std::uint64_t> stream);
SDStats sd_stats(std::span<const std::uint64_t> stream);
SDStats sd_stats_of(const std::vector<std::optional<std::uint64_t>>& sds);

// Raw counters handed over by a simulation run; everything the four network
// metrics need, with the no-cache reference terms accumulated analytically
// from route lengths at ingress time.
struct RunCounters {
    std::uint64_t requests_entered = 0;
    std::uint64_t producer_served = 0;
    std::uint64_t completions = 0;

    double hop_sum_cache = 0.0;   // hop distance to the serving point, per request
    double hop_sum_nocache = 0.0; // hop distance to the producer, per request
    double traffic_cache = 0.0;   // data-packet link traversals, consumer links excluded
    double traffic_nocache = 0.0;

    std::uint64_t evictions_total = 0;
    std::uint64_t writes_total = 0;
    std::uint64_t slots_total = 0;

    struct PerRouter {
        std::uint32_t router = 0;
        std::uint64_t requests_in = 0;
        std::uint64_t hits = 0;
        std::uint64_t forwarded = 0;
        std::uint64_t writes = 0;
        std::uint64_t evictions = 0;
    };
    std::vector<PerRouter> routers;

    std::optional<std::vector<std::uint64_t>> tap_stream; // ids seen at the tap
};

struct MetricsReport {
    std::optional<double> hit_net;
    std::optional<double> h_red;
    std::optional<double> t_red;
    std::optional<double> e_avg;

    std::uint64_t requests_entered = 0;
    std::uint64_t producer_served = 0;
    std::uint64_t evictions_total = 0;
    std::uint64_t slots_total = 0;
    double h_cache = 0.0, h_nocache = 0.0;
    double t_cache = 0.0, t_nocache = 0.0;

    struct CacheHitRatio {
        std::uint32_t router = 0;
        std::uint64_t requests_in = 0;
        double ratio = 0.0;
    };
    std::vector<CacheHitRatio> per_cache;

    std::optional<SDStats> sd;
};

MetricsReport compute_report(const RunCounters& counters);

} // namespace netcache

#endif

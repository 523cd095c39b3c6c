#ifndef NETCACHE_TRAFFIC_HPP
#define NETCACHE_TRAFFIC_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netcache/irm.hpp"
#include "netcache/packet.hpp"
#include "netcache/rng.hpp"

namespace netcache {

// Workload knobs for one producer's catalog: Zipf popularity over the
// catalog, Poisson content-request arrivals per consumer group, geometric
// content sizes, and CBR packet-request emission inside a retrieval.
struct TrafficProfile {
    double alpha = 1.0;
    std::uint32_t contents = 1000;
    double content_rate = 12.5;  // content requests/sec per consumer group
    double mean_size = 100.0;    // mean packets per content
    double cbr_rate = 100.0;     // packet requests/sec within a retrieval
};

struct WorkloadEvent {
    double time = 0.0;
    std::uint32_t group = 0;
    PacketId packet;
};

std::uint32_t sample_content(const DiscreteSampler& sampler, Rng& rng);

// Geometric on {1, 2, ...} with mean `mean_size`.
std::uint32_t sample_content_size(double mean_size, Rng& rng);

// One fixed size per content, sampled at scenario setup.
std::vector<std::uint32_t> sample_catalog_sizes(std::uint32_t contents, double mean_size,
                                                std::uint64_t seed);

// Per-catalog generation: content ids are drawn from [first_content,
// first_content + popularity.size()) with the given per-group rate; every
// consumer group listed generates its own independent Poisson stream.
struct CatalogWorkload {
    const Popularity* popularity = nullptr;
    std::uint32_t first_content = 1;
    double content_rate = 12.5; // per group, for this catalog
};

// Merged, time-sorted packet-request stream over all groups and catalogs.
// Content sizes are taken from `sizes_by_content` (1-based global ids).
std::vector<WorkloadEvent> generate_workload(const std::vector<CatalogWorkload>& catalogs,
                                             std::uint32_t groups, double duration,
                                             double cbr_rate,
                                             const std::vector<std::uint32_t>& sizes_by_content,
                                             std::uint64_t seed);

// Line-oriented trace: "time group content packet_index" per line.
void write_trace(std::ostream& out, const std::vector<WorkloadEvent>& events);
std::vector<WorkloadEvent> read_trace(std::istream& in);
void write_trace_file(const std::string& path, const std::vector<WorkloadEvent>& events);
std::vector<WorkloadEvent> read_trace_file(const std::string& path);

} // namespace netcache

#endif

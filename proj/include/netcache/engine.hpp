#ifndef NETCACHE_ENGINE_HPP
#define NETCACHE_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcache/coordinated.hpp"
#include "netcache/metrics.hpp"
#include "netcache/topology.hpp"

namespace netcache {

enum class CacheKind : std::uint8_t { None, Lru, Fifo, Rnd, Selection, Coordinated };

struct CacheSpec {
    CacheKind kind = CacheKind::None;
    std::uint32_t capacity = 0;
};

struct CoordParams {
    std::uint32_t nomination_window = 1;
    double frozen_period = 60.0;
    double nomination_timeout = 0.0; // <= 0: derived from network diameter
};

struct SdTapConfig {
    enum class Kind : std::uint8_t { None, Arrivals, Forwarded };
    Kind kind = Kind::None;
    std::uint32_t router = 0;
    bool content_level = true;
};

struct Scenario {
    Topology topo;
    std::vector<CacheSpec> caches; // one per router

    double group_content_rate = 12.5; // total per group, split across producers
    std::vector<double> producer_alpha; // one per producer
    double mean_content_size = 100.0;
    double cbr_rate = 100.0;
    double duration = 200.0;

    CoordParams coord;
    SdTapConfig tap;
    std::uint64_t invariant_check_interval = 1024;
    std::string label;
};

struct RunResult {
    RunCounters counters;
    MetricsReport report;
    std::uint64_t invariant_checks = 0;
    std::uint64_t nomination_tokens = 0;
    std::uint64_t events_processed = 0;
};

// Invariant violations abort the run with the recent event history attached.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Single-threaded, loss-free event-driven execution of one scenario.
// Bit-reproducible for a fixed seed.
RunResult run_simulation(const Scenario& scenario, std::uint64_t seed);

const char* to_string(CacheKind kind);

} // namespace netcache

#endif

#ifndef NETCACHE_TANDEM_HPP
#define NETCACHE_TANDEM_HPP

#include <cstdint>
#include <string>

#include "netcache/metrics.hpp"

namespace netcache {

// Two caches in a row, driven back-to-back by request count: the first cache
// filters a Zipf request stream and three second caches (one per replacement
// policy) consume its miss stream in parallel. Content granularity, one
// packet per content.
//
// A selection-policy first cache runs with an unbounded frozen period, so the
// whole pass reflects a single selection cycle.

enum class TandemPolicy : std::uint8_t { Lru, Fifo, Rnd, Sel };

struct TandemOptions {
    std::uint32_t capacity = 10;   // same size for both caches
    std::uint32_t contents = 1000;
    double alpha = 1.0;
    std::uint64_t requests = 1000000;
    std::uint64_t seed = 1;
    bool collect_sd = true; // stack distances of input and miss streams
};

struct TandemResult {
    double first_hit_ratio = 0.0;
    double second_hit_ratio_lru = 0.0;
    double second_hit_ratio_fifo = 0.0;
    double second_hit_ratio_rnd = 0.0;
    std::uint64_t forwarded = 0; // miss stream length
    SDStats input_sd;
    SDStats miss_sd;
};

TandemResult tandem_run(TandemPolicy first, const TandemOptions& options);

const char* to_string(TandemPolicy policy);
TandemPolicy tandem_policy_from(const std::string& name);

} // namespace netcache

#endif

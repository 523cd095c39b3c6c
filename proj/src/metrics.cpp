#include "netcache/metrics.hpp"

#include <algorithm>

namespace netcache {

void StackDistanceAnalyzer::add(std::size_t pos, int delta) {
    for (; pos < tree_.size(); pos += pos & (~pos + 1)) tree_[pos] += delta;
}

std::uint64_t StackDistanceAnalyzer::prefix(std::size_t pos) const {
    std::uint64_t sum = 0;
    for (; pos > 0; pos -= pos & (~pos + 1)) sum += static_cast<std::uint64_t>(tree_[pos]);
    return sum;
}

std::optional<std::uint64_t> StackDistanceAnalyzer::observe(std::uint64_t id) {
    const std::size_t pos = ++clock_;
    if (tree_.size() <= pos) {
        // Grow and rebuild: a Fenwick node covers a range, so appending
        // zeros would corrupt sums over existing marks.
        tree_.assign(std::max<std::size_t>(64, (pos + 1) * 2), 0);
        for (const auto& [_, mark] : last_) add(mark, 1);
    }

    std::optional<std::uint64_t> sd;
    auto it = last_.find(id);
    if (it != last_.end()) {
        // Marks between the previous and current occurrence, exclusive of both.
        sd = prefix(pos - 1) - prefix(it->second);
        add(it->second, -1);
        it->second = pos;
    } else {
        last_.emplace(id, pos);
    }
    add(pos, 1);
    return sd;
}

std::vector<std::optional<std::uint64_t>> stack_distances(std::span<const std::uint64_t> stream) {
    StackDistanceAnalyzer analyzer;
    std::vector<std::optional<std::uint64_t>> sds;
    sds.reserve(stream.size());
    for (std::uint64_t id : stream) sds.push_back(analyzer.observe(id));
    return sds;
}

SDStats sd_stats_of(const std::vector<std::optional<std::uint64_t>>& sds) {
    SDStats stats;
    for (const auto& sd : sds) {
        if (!sd) {
            ++stats.undefined_count;
            continue;
        }
        ++stats.histogram[*sd];
        ++stats.defined_count;
    }
    if (stats.defined_count == 0) return stats;

    stats.min_sd = stats.histogram.begin()->first;
    stats.max_sd = stats.histogram.rbegin()->first;
    double weighted = 0.0;
    for (const auto& [sd, count] : stats.histogram) {
        weighted += static_cast<double>(sd) * static_cast<double>(count);
    }
    stats.avg_sd = weighted / static_cast<double>(stats.defined_count);
    return stats;
}

SDStats sd_stats(std::span<const std::uint64_t> stream) {
    return sd_stats_of(stack_distances(stream));
}

MetricsReport compute_report(const RunCounters& counters) {
    MetricsReport report;
    report.requests_entered = counters.requests_entered;
    report.producer_served = counters.producer_served;
    report.evictions_total = counters.evictions_total;
    report.slots_total = counters.slots_total;

    if (counters.requests_entered > 0) {
        report.hit_net = static_cast<double>(counters.requests_entered - counters.producer_served) /
                         static_cast<double>(counters.requests_entered);
        report.h_cache = counters.hop_sum_cache / static_cast<double>(counters.requests_entered);
        report.h_nocache = counters.hop_sum_nocache / static_cast<double>(counters.requests_entered);
        if (counters.hop_sum_nocache > 0) {
            report.h_red = counters.hop_sum_cache / counters.hop_sum_nocache;
        }
        report.t_cache = counters.traffic_cache;
        report.t_nocache = counters.traffic_nocache;
        if (counters.traffic_nocache > 0) {
            report.t_red = counters.traffic_cache / counters.traffic_nocache;
        }
    }
    if (counters.slots_total > 0) {
        report.e_avg = static_cast<double>(counters.evictions_total) /
                       static_cast<double>(counters.slots_total);
    }
    for (const auto& r : counters.routers) {
        MetricsReport::CacheHitRatio entry;
        entry.router = r.router;
        entry.requests_in = r.requests_in;
        entry.ratio = r.requests_in > 0
                          ? static_cast<double>(r.hits) / static_cast<double>(r.requests_in)
                          : 0.0;
        report.per_cache.push_back(entry);
    }
    if (counters.tap_stream) {
        report.sd = sd_stats(*counters.tap_stream);
    }
    return report;
}

} // namespace netcache

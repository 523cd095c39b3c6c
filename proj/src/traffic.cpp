#include "netcache/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace netcache {

std::uint32_t sample_content(const DiscreteSampler& sampler, Rng& rng) {
    return sampler.sample(rng);
}

std::uint32_t sample_content_size(double mean_size, Rng& rng) {
    if (mean_size < 1.0) throw std::invalid_argument("sample_content_size: mean must be >= 1");
    if (mean_size == 1.0) return 1;
    const double p = 1.0 / mean_size;
    // Inversion: failures-before-success count, shifted to support {1, 2, ...}.
    const double u = uniform_open01(rng);
    const double failures = std::floor(std::log(u) / std::log1p(-p));
    return 1 + static_cast<std::uint32_t>(std::min(failures, 4.0e9));
}

std::vector<std::uint32_t> sample_catalog_sizes(std::uint32_t contents, double mean_size,
                                                std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x5123e5));
    std::vector<std::uint32_t> sizes(contents);
    for (auto& s : sizes) s = sample_content_size(mean_size, rng);
    return sizes;
}

std::vector<WorkloadEvent> generate_workload(const std::vector<CatalogWorkload>& catalogs,
                                             std::uint32_t groups, double duration,
                                             double cbr_rate,
                                             const std::vector<std::uint32_t>& sizes_by_content,
                                             std::uint64_t seed) {
    if (duration <= 0) throw std::invalid_argument("generate_workload: duration must be > 0");
    std::vector<WorkloadEvent> events;
    for (std::uint32_t g = 0; g < groups; ++g) {
        for (std::size_t cat = 0; cat < catalogs.size(); ++cat) {
            const auto& catalog = catalogs[cat];
            DiscreteSampler sampler(catalog.popularity->probs());
            Rng rng(derive_seed(seed, g + 1, cat + 1));
            double t = exponential(rng, catalog.content_rate);
            while (t <= duration) {
                const std::uint32_t content =
                    catalog.first_content + sample_content(sampler, rng) - 1;
                const std::uint32_t size = sizes_by_content.at(content - 1);
                for (std::uint32_t k = 1; k <= size; ++k) {
                    events.push_back(
                        {t + static_cast<double>(k - 1) / cbr_rate, g, PacketId{content, k}});
                }
                t += exponential(rng, catalog.content_rate);
            }
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const WorkloadEvent& a, const WorkloadEvent& b) { return a.time < b.time; });
    return events;
}

void write_trace(std::ostream& out, const std::vector<WorkloadEvent>& events) {
    char line[96];
    for (const auto& e : events) {
        std::snprintf(line, sizeof(line), "%.9f %u %u %u\n", e.time, e.group, e.packet.content,
                      e.packet.index);
        out << line;
    }
}

std::vector<WorkloadEvent> read_trace(std::istream& in) {
    std::vector<WorkloadEvent> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        WorkloadEvent e;
        if (!(ls >> e.time >> e.group >> e.packet.content >> e.packet.index)) {
            throw std::runtime_error("read_trace: malformed line: " + line);
        }
        events.push_back(e);
    }
    return events;
}

void write_trace_file(const std::string& path, const std::vector<WorkloadEvent>& events) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace_file: cannot open " + path);
    write_trace(out, events);
}

std::vector<WorkloadEvent> read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_trace_file: cannot open " + path);
    return read_trace(in);
}

} // namespace netcache

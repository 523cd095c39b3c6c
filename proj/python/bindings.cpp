#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "netcache/engine.hpp"
#include "netcache/experiment.hpp"
#include "netcache/irm.hpp"
#include "netcache/metrics.hpp"
#include "netcache/tandem.hpp"
#include "netcache/topology.hpp"

namespace py = pybind11;
using namespace netcache;

namespace {

IrmPolicy policy_from(const std::string& name) {
    if (name == "LRU") return IrmPolicy::Lru;
    if (name == "SEL") return IrmPolicy::Sel;
    throw std::invalid_argument("policy must be LRU or SEL");
}

Scenario make_scenario(Topology topo, const std::string& combination, std::uint32_t capacity,
                       double duration, double content_rate, double mean_size, double cbr_rate,
                       double alpha, std::uint32_t nomination_window, double frozen_period) {
    Scenario s;
    s.topo = std::move(topo);
    s.producer_alpha.assign(s.topo.producers.size(), alpha);
    s.group_content_rate = content_rate;
    s.mean_content_size = mean_size;
    s.cbr_rate = cbr_rate;
    s.duration = duration;
    s.coord.nomination_window = nomination_window;
    s.coord.frozen_period = frozen_period;
    s.caches.assign(s.topo.router_count, CacheSpec{});
    if (combination == "LRU-EQU") {
        for (auto& spec : s.caches) spec = {CacheKind::Lru, capacity};
    } else if (combination == "SEL-EQU") {
        for (auto& spec : s.caches) spec = {CacheKind::Coordinated, capacity};
    } else if (combination == "LRU-BIG") {
        const double avg = router_avg(shortest_path_routes(s.topo));
        const auto big = static_cast<std::uint32_t>(
            std::llround(static_cast<double>(capacity) * avg));
        for (std::uint32_t r = 0; r < s.topo.router_count; ++r) {
            s.caches[r] = s.topo.is_edge[r] ? CacheSpec{CacheKind::Lru, big}
                                            : CacheSpec{CacheKind::Lru, 0};
        }
    } else {
        throw std::invalid_argument("combination must be LRU-EQU, SEL-EQU or LRU-BIG");
    }
    return s;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Network-of-caches simulator: selection policy, coordinated scheme, "
              "IRM analytics and filter-effect experiments";
    m.attr("__version__") = "0.1.0";

    m.def(
        "zipf_popularity",
        [](double alpha, std::uint32_t n) { return Popularity::zipf(alpha, n).probs(); },
        py::arg("alpha"), py::arg("n"),
        "Zipf(alpha, n) probabilities, most popular first");

    m.def(
        "pi_lru",
        [](const std::vector<double>& q, const std::vector<std::uint32_t>& sigma) {
            return pi_lru(Popularity(q), sigma);
        },
        py::arg("q"), py::arg("sigma"),
        "Stationary probability of an ordered LRU cache state");
    m.def(
        "pi_sel",
        [](const std::vector<double>& q, const std::vector<std::uint32_t>& sigma) {
            return pi_sel(Popularity(q), sigma);
        },
        py::arg("q"), py::arg("sigma"),
        "Probability that a selection cache freezes in the given state");
    m.def(
        "hit_ratio_closed_form",
        [](const std::vector<double>& q, std::uint32_t c, const std::string& policy) {
            return hit_ratio_closed_form(Popularity(q), c, policy_from(policy));
        },
        py::arg("q"), py::arg("c"), py::arg("policy") = "LRU");
    m.def(
        "lru_stationary_oracle",
        [](const std::vector<double>& q, std::uint32_t c) {
            py::dict out;
            for (const auto& [sigma, prob] : lru_stationary_oracle(Popularity(q), c)) {
                out[py::tuple(py::cast(sigma))] = prob;
            }
            return out;
        },
        py::arg("q"), py::arg("c"),
        "Exact move-to-front Markov stationary distribution (brute force)");
    m.def(
        "simulate_irm_hit_ratio",
        [](const std::vector<double>& q, std::uint32_t c, const std::string& policy,
           std::uint64_t requests, std::uint64_t seed) {
            return simulate_irm_hit_ratio(Popularity(q), c, policy_from(policy), requests, seed);
        },
        py::arg("q"), py::arg("c"), py::arg("policy"), py::arg("requests") = 1000000,
        py::arg("seed") = 1);

    py::class_<SDStats>(m, "SDStats")
        .def_readonly("min_sd", &SDStats::min_sd)
        .def_readonly("max_sd", &SDStats::max_sd)
        .def_readonly("avg_sd", &SDStats::avg_sd)
        .def_readonly("defined_count", &SDStats::defined_count)
        .def_readonly("undefined_count", &SDStats::undefined_count)
        .def_property_readonly("histogram",
                               [](const SDStats& s) { return py::dict(py::cast(s.histogram)); })
        .def("__repr__", [](const SDStats& s) {
            return "SDStats(min=" + std::to_string(s.min_sd) + ", max=" +
                   std::to_string(s.max_sd) + ", avg=" + std::to_string(s.avg_sd) + ")";
        });

    m.def(
        "stack_distances",
        [](const std::vector<std::uint64_t>& stream) { return stack_distances(stream); },
        py::arg("stream"),
        "Per-request stack distance; None for first occurrences");
    m.def(
        "sd_stats", [](const std::vector<std::uint64_t>& stream) { return sd_stats(stream); },
        py::arg("stream"));

    py::class_<TandemResult>(m, "TandemResult")
        .def_readonly("first_hit_ratio", &TandemResult::first_hit_ratio)
        .def_readonly("second_hit_ratio_lru", &TandemResult::second_hit_ratio_lru)
        .def_readonly("second_hit_ratio_fifo", &TandemResult::second_hit_ratio_fifo)
        .def_readonly("second_hit_ratio_rnd", &TandemResult::second_hit_ratio_rnd)
        .def_readonly("forwarded", &TandemResult::forwarded)
        .def_readonly("input_sd", &TandemResult::input_sd)
        .def_readonly("miss_sd", &TandemResult::miss_sd);

    m.def(
        "tandem_run",
        [](const std::string& first, std::uint32_t capacity, std::uint32_t contents, double alpha,
           std::uint64_t requests, std::uint64_t seed, bool collect_sd) {
            TandemOptions options;
            options.capacity = capacity;
            options.contents = contents;
            options.alpha = alpha;
            options.requests = requests;
            options.seed = seed;
            options.collect_sd = collect_sd;
            return tandem_run(tandem_policy_from(first), options);
        },
        py::arg("first"), py::arg("capacity"), py::arg("contents") = 1000,
        py::arg("alpha") = 1.0, py::arg("requests") = 1000000, py::arg("seed") = 1,
        py::arg("collect_sd") = true,
        "Two-cache filter-effect experiment; the first cache filters a Zipf "
        "stream and LRU/FIFO/RND second caches consume the misses");

    py::class_<Topology>(m, "Topology")
        .def_property_readonly("router_count",
                               [](const Topology& t) { return t.router_count; })
        .def_property_readonly("edge_count",
                               [](const Topology& t) {
                                   std::size_t n = 0;
                                   for (bool e : t.is_edge) n += e;
                                   return n;
                               })
        .def_property_readonly("producer_count",
                               [](const Topology& t) { return t.producers.size(); })
        .def_property_readonly("group_count", [](const Topology& t) { return t.groups.size(); })
        .def_property_readonly("total_contents",
                               [](const Topology& t) { return t.total_contents(); })
        .def("__repr__", [](const Topology& t) {
            return "Topology(routers=" + std::to_string(t.router_count) +
                   ", producers=" + std::to_string(t.producers.size()) + ")";
        });

    m.def("build_binary_tree", &build_binary_tree, py::arg("levels"),
          py::arg("consumers_per_group") = 125, py::arg("contents") = 1000,
          py::arg("link_delay") = 0.001);
    m.def("build_abilene", &build_abilene, py::arg("consumers_per_group") = 100,
          py::arg("contents_per_producer") = 100, py::arg("topo_file") = "",
          py::arg("edge_link_delay") = 0.001);
    m.def(
        "router_avg",
        [](const Topology& topo) { return router_avg(shortest_path_routes(topo)); },
        py::arg("topology"),
        "Request-weighted mean hop distance minus one");

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("hit_net", &MetricsReport::hit_net)
        .def_readonly("h_red", &MetricsReport::h_red)
        .def_readonly("t_red", &MetricsReport::t_red)
        .def_readonly("e_avg", &MetricsReport::e_avg)
        .def_readonly("requests_entered", &MetricsReport::requests_entered)
        .def_readonly("producer_served", &MetricsReport::producer_served)
        .def_readonly("evictions_total", &MetricsReport::evictions_total)
        .def_readonly("slots_total", &MetricsReport::slots_total)
        .def("to_json", [](const MetricsReport& r) { return report_json(r); })
        .def("__repr__", [](const MetricsReport& r) {
            return "MetricsReport(hit_net=" +
                   (r.hit_net ? std::to_string(*r.hit_net) : "None") + ")";
        });

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("duration", [](const Scenario& s) { return s.duration; })
        .def_property_readonly("label", [](const Scenario& s) { return s.label; });

    m.def("make_scenario", &make_scenario, py::arg("topology"), py::arg("combination"),
          py::arg("capacity"), py::arg("duration") = 200.0, py::arg("content_rate") = 12.5,
          py::arg("mean_size") = 100.0, py::arg("cbr_rate") = 100.0, py::arg("alpha") = 1.0,
          py::arg("nomination_window") = 1, py::arg("frozen_period") = 60.0,
          "Scenario with a uniform cache combination over the given topology");
    m.def(
        "run_simulation",
        [](const Scenario& scenario, std::uint64_t seed) {
            return run_simulation(scenario, seed).report;
        },
        py::arg("scenario"), py::arg("seed") = 1,
        "Execute one scenario and return its metrics report");
}

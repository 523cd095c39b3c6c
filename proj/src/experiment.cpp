#include "netcache/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "netcache/irm.hpp"
#include "netcache/rng.hpp"

namespace fs = std::filesystem;

namespace netcache {

const char* to_string(Combination combination) {
    switch (combination) {
        case Combination::LruEqu: return "LRU-EQU";
        case Combination::SelEqu: return "SEL-EQU";
        case Combination::LruBig: return "LRU-BIG";
    }
    return "?";
}

Combination combination_from(const std::string& name) {
    if (name == "LRU-EQU") return Combination::LruEqu;
    if (name == "SEL-EQU") return Combination::SelEqu;
    if (name == "LRU-BIG") return Combination::LruBig;
    throw std::invalid_argument("unknown combination: " + name);
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

namespace {

std::string format_optional(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

void assign_caches(Scenario& scenario, Combination combination, std::uint32_t capacity,
                   double rtr_avg) {
    const auto& topo = scenario.topo;
    scenario.caches.assign(topo.router_count, CacheSpec{});
    switch (combination) {
        case Combination::LruEqu:
            for (auto& spec : scenario.caches) spec = {CacheKind::Lru, capacity};
            break;
        case Combination::SelEqu:
            for (auto& spec : scenario.caches) spec = {CacheKind::Coordinated, capacity};
            break;
        case Combination::LruBig: {
            const auto big = static_cast<std::uint32_t>(
                std::llround(static_cast<double>(capacity) * rtr_avg));
            for (std::uint32_t r = 0; r < topo.router_count; ++r) {
                scenario.caches[r] = topo.is_edge[r] ? CacheSpec{CacheKind::Lru, big}
                                                     : CacheSpec{CacheKind::Lru, 0};
            }
            break;
        }
    }
}

std::vector<double> abilene_alphas(std::size_t producers, std::uint64_t seed) {
    // Traffic class per producer, drawn from the four catalog types.
    static constexpr double kChoices[] = {0.8, 0.9, 1.0, 1.1};
    std::vector<double> alphas(producers);
    for (std::size_t p = 0; p < producers; ++p) {
        alphas[p] = kChoices[splitmix64(derive_seed(seed, 0xa1fa, p)) % 4];
    }
    return alphas;
}

} // namespace

std::vector<PlannedRun> expand_preset(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    if (cfg.paper_scale) {
        cfg.duration = 1000.0;
        if (config.seeds.size() <= 3) {
            cfg.seeds.clear();
            for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
        }
    }

    std::vector<PlannedRun> runs;
    if (cfg.preset == "tree-fig7" || cfg.preset == "abilene-fig8") {
        const bool tree = cfg.preset == "tree-fig7";
        const Topology topo =
            tree ? build_binary_tree(cfg.tree_levels, 125, 1000, cfg.link_delay)
                 : build_abilene(100, 100, cfg.topology_file, cfg.link_delay);
        const double rtr_avg = router_avg(shortest_path_routes(topo));
        const double mean_size = 100.0;
        const double nominal_packets = static_cast<double>(topo.total_contents()) * mean_size;

        for (const Combination combination : cfg.combinations) {
            for (const double pct : cfg.cache_grid_pct) {
                if (pct <= 0) throw std::invalid_argument("cache grid values must be > 0");
                const auto capacity = static_cast<std::uint32_t>(
                    std::llround(pct / 100.0 * nominal_packets));
                for (const std::uint64_t seed : cfg.seeds) {
                    PlannedRun run;
                    run.combination = to_string(combination);
                    run.cache_pct = pct;
                    run.seed = seed;
                    run.scenario.topo = topo;
                    run.scenario.group_content_rate = tree ? 12.5 : 22.0;
                    run.scenario.producer_alpha =
                        tree ? std::vector<double>{1.0}
                             : abilene_alphas(topo.producers.size(), seed);
                    run.scenario.mean_content_size = mean_size;
                    run.scenario.cbr_rate = 100.0;
                    run.scenario.duration = cfg.duration;
                    run.scenario.coord = cfg.coord;
                    run.scenario.label = std::string(cfg.preset) + "/" +
                                         run.combination + "/" + format_double(pct) + "%/s" +
                                         std::to_string(seed);
                    assign_caches(run.scenario, combination, capacity, rtr_avg);
                    runs.push_back(std::move(run));
                }
            }
        }
        return runs;
    }
    if (cfg.preset == "custom") {
        Scenario base = scenario_from_json_file(cfg.scenario_file);
        for (const std::uint64_t seed : cfg.seeds) {
            PlannedRun run;
            run.combination = "custom";
            run.cache_pct = 0.0;
            run.seed = seed;
            run.scenario = base;
            runs.push_back(std::move(run));
        }
        return runs;
    }
    if (cfg.preset == "irm-theorem1" || cfg.preset == "tandem-fig3-4") {
        // Analytics and tandem presets do not expand into network scenarios.
        return runs;
    }
    throw std::invalid_argument("unknown preset: " + cfg.preset);
}

namespace {

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    auto opt = [](const std::optional<double>& v) {
        return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    j["hit_net"] = opt(report.hit_net);
    j["h_red"] = opt(report.h_red);
    j["t_red"] = opt(report.t_red);
    j["e_avg"] = opt(report.e_avg);
    j["requests_entered"] = report.requests_entered;
    j["producer_served"] = report.producer_served;
    j["evictions_total"] = report.evictions_total;
    j["slots_total"] = report.slots_total;
    j["h_cache"] = report.h_cache;
    j["h_nocache"] = report.h_nocache;
    j["t_cache"] = report.t_cache;
    j["t_nocache"] = report.t_nocache;
    auto caches = nlohmann::ordered_json::array();
    for (const auto& c : report.per_cache) {
        caches.push_back({{"router", c.router},
                          {"requests_in", c.requests_in},
                          {"hit_ratio", c.ratio}});
    }
    j["per_cache"] = std::move(caches);
    if (report.sd) {
        nlohmann::ordered_json sd;
        sd["defined"] = report.sd->defined_count;
        sd["undefined"] = report.sd->undefined_count;
        if (!report.sd->empty()) {
            sd["min"] = report.sd->min_sd;
            sd["max"] = report.sd->max_sd;
            sd["avg"] = report.sd->avg_sd;
        }
        j["stack_distance"] = std::move(sd);
    }
    return j;
}

} // namespace

std::string report_json(const MetricsReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::string results_csv(const ResultTable& table) {
    std::string out = "# schema=" + std::string(kResultsSchema) + "\n";
    out += "preset,combination,cache_pct,seed,hit_net,h_red,t_red,e_avg,"
           "requests_entered,producer_served,evictions_total,slots_total,error\n";
    for (const auto& row : table.rows) {
        out += row.preset + "," + row.combination + "," + format_double(row.cache_pct) + "," +
               std::to_string(row.seed) + "," + format_optional(row.report.hit_net) + "," +
               format_optional(row.report.h_red) + "," + format_optional(row.report.t_red) + "," +
               format_optional(row.report.e_avg) + "," +
               std::to_string(row.report.requests_entered) + "," +
               std::to_string(row.report.producer_served) + "," +
               std::to_string(row.report.evictions_total) + "," +
               std::to_string(row.report.slots_total) + "," + row.error + "\n";
    }
    return out;
}

namespace {

struct Aggregate {
    std::vector<double> hit_net, h_red, t_red, e_avg;
};

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    return {mean, std::sqrt(var)};
}

} // namespace

std::string summary_csv(const ResultTable& table) {
    // Keyed by (combination, cache_pct) in first-appearance order.
    std::vector<std::pair<std::string, double>> keys;
    std::vector<Aggregate> aggregates;
    for (const auto& row : table.rows) {
        if (!row.error.empty()) continue;
        const std::pair<std::string, double> key{row.combination, row.cache_pct};
        std::size_t idx = 0;
        for (; idx < keys.size(); ++idx) {
            if (keys[idx] == key) break;
        }
        if (idx == keys.size()) {
            keys.push_back(key);
            aggregates.emplace_back();
        }
        Aggregate& agg = aggregates[idx];
        if (row.report.hit_net) agg.hit_net.push_back(*row.report.hit_net);
        if (row.report.h_red) agg.h_red.push_back(*row.report.h_red);
        if (row.report.t_red) agg.t_red.push_back(*row.report.t_red);
        if (row.report.e_avg) agg.e_avg.push_back(*row.report.e_avg);
    }
    std::string out = "# schema=" + std::string(kResultsSchema) + "\n";
    out += "combination,cache_pct,runs,hit_net_mean,hit_net_std,h_red_mean,h_red_std,"
           "t_red_mean,t_red_std,e_avg_mean,e_avg_std\n";
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto [hn, hns] = mean_std(aggregates[i].hit_net);
        const auto [hr, hrs] = mean_std(aggregates[i].h_red);
        const auto [tr, trs] = mean_std(aggregates[i].t_red);
        const auto [ea, eas] = mean_std(aggregates[i].e_avg);
        out += keys[i].first + "," + format_double(keys[i].second) + "," +
               std::to_string(aggregates[i].hit_net.size()) + "," + format_double(hn) + "," +
               format_double(hns) + "," + format_double(hr) + "," + format_double(hrs) + "," +
               format_double(tr) + "," + format_double(trs) + "," + format_double(ea) + "," +
               format_double(eas) + "\n";
    }
    return out;
}

std::string tandem_csv(const std::vector<TandemRow>& rows) {
    std::string out = "# schema=" + std::string(kResultsSchema) + "\n";
    out += "first_policy,capacity,seed,first_hit_ratio,second_hit_lru,second_hit_fifo,"
           "second_hit_rnd,forwarded,input_avg_sd,miss_avg_sd,miss_min_sd,miss_max_sd\n";
    for (const auto& row : rows) {
        out += std::string(to_string(row.first)) + "," + std::to_string(row.capacity) + "," +
               std::to_string(row.seed) + "," + format_double(row.result.first_hit_ratio) + "," +
               format_double(row.result.second_hit_ratio_lru) + "," +
               format_double(row.result.second_hit_ratio_fifo) + "," +
               format_double(row.result.second_hit_ratio_rnd) + "," +
               std::to_string(row.result.forwarded) + "," +
               format_double(row.result.input_sd.avg_sd) + "," +
               format_double(row.result.miss_sd.avg_sd) + "," +
               std::to_string(row.result.miss_sd.min_sd) + "," +
               std::to_string(row.result.miss_sd.max_sd) + "\n";
    }
    return out;
}

std::string irm_csv(const std::vector<IrmCheckRow>& rows) {
    std::string out = "# schema=" + std::string(kResultsSchema) + "\n";
    out += "check,n,c,alpha,value_a,value_b,diff,tolerance,pass\n";
    for (const auto& row : rows) {
        out += row.check + "," + std::to_string(row.n) + "," + std::to_string(row.c) + "," +
               (row.alpha < 0 ? std::string("custom") : format_double(row.alpha)) + "," +
               format_double(row.value_a) + "," + format_double(row.value_b) + "," +
               format_double(row.diff) + "," + format_double(row.tolerance) + "," +
               (row.pass ? "1" : "0") + "\n";
    }
    return out;
}

namespace {

std::vector<std::pair<double, Popularity>> theorem_grid() {
    std::vector<std::pair<double, Popularity>> grid;
    for (const double alpha : {0.5, 1.0, 1.5}) {
        for (std::uint32_t n = 2; n <= 6; ++n) {
            grid.emplace_back(alpha, Popularity::zipf(alpha, n));
        }
    }
    // Hand-picked non-Zipf shapes: skewed, flat, and nearly degenerate.
    grid.emplace_back(-1.0, Popularity({0.5, 0.3, 0.2}));
    grid.emplace_back(-1.0, Popularity({0.25, 0.25, 0.25, 0.25}));
    grid.emplace_back(-1.0, Popularity({0.4, 0.3, 0.2, 0.05, 0.05}));
    grid.emplace_back(-1.0, Popularity({0.9, 0.04, 0.03, 0.01, 0.01, 0.01}));
    return grid;
}

template <typename Fn>
void for_each_state(std::uint32_t n, std::uint32_t c, Fn&& fn) {
    std::vector<std::uint32_t> sigma;
    std::vector<bool> used(n + 1, false);
    auto rec = [&](auto&& self) -> void {
        if (sigma.size() == c) {
            fn(sigma);
            return;
        }
        for (std::uint32_t id = 1; id <= n; ++id) {
            if (used[id]) continue;
            used[id] = true;
            sigma.push_back(id);
            self(self);
            sigma.pop_back();
            used[id] = false;
        }
    };
    rec(rec);
}

} // namespace

std::vector<IrmCheckRow> irm_identity_checks() {
    std::vector<IrmCheckRow> rows;
    for (const auto& [alpha, q] : theorem_grid()) {
        for (std::uint32_t c = 1; c <= std::min<std::uint32_t>(3, q.size()); ++c) {
            IrmCheckRow row{"pi_sel==pi_lru", q.size(), c, alpha, 0, 0, 0, 1e-12, false};
            for_each_state(q.size(), c, [&](const std::vector<std::uint32_t>& sigma) {
                row.diff = std::max(row.diff, std::abs(pi_sel(q, sigma) - pi_lru(q, sigma)));
            });
            row.value_a = hit_ratio_closed_form(q, c, IrmPolicy::Lru);
            row.value_b = hit_ratio_closed_form(q, c, IrmPolicy::Sel);
            row.diff = std::max(row.diff, std::abs(row.value_a - row.value_b));
            row.pass = row.diff <= row.tolerance;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<IrmCheckRow> irm_oracle_checks() {
    std::vector<IrmCheckRow> rows;
    for (const auto& [alpha, q] : theorem_grid()) {
        for (std::uint32_t c = 1; c <= std::min<std::uint32_t>(3, q.size()); ++c) {
            IrmCheckRow row{"closed_form==oracle", q.size(), c, alpha, 0, 0, 0, 1e-8, false};
            const auto oracle = lru_stationary_oracle(q, c);
            double oracle_hit = 0.0;
            for (const auto& [sigma, prob] : oracle) {
                row.diff = std::max(row.diff, std::abs(prob - pi_lru(q, sigma)));
                row.diff = std::max(row.diff, std::abs(prob - pi_sel(q, sigma)));
                double mass = 0.0;
                for (std::uint32_t id : sigma) mass += q.prob(id);
                oracle_hit += prob * mass;
            }
            row.value_a = hit_ratio_closed_form(q, c, IrmPolicy::Lru);
            row.value_b = oracle_hit;
            row.diff = std::max(row.diff, std::abs(row.value_a - row.value_b));
            row.pass = row.diff <= row.tolerance;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<IrmCheckRow> irm_simulation_checks(std::uint64_t requests, std::uint64_t seed) {
    std::vector<IrmCheckRow> rows;
    const Popularity q100 = Popularity::zipf(1.0, 100);
    for (const std::uint32_t c : {5u, 10u, 20u}) {
        IrmCheckRow row{"sim_sel==sim_lru", 100, c, 1.0, 0, 0, 0, 0.005, false};
        row.value_a = simulate_irm_hit_ratio(q100, c, IrmPolicy::Lru, requests, seed);
        row.value_b = simulate_irm_hit_ratio(q100, c, IrmPolicy::Sel, requests, seed + 1);
        row.diff = std::abs(row.value_a - row.value_b);
        row.pass = row.diff <= row.tolerance;
        rows.push_back(row);
    }
    const Popularity q5 = Popularity::zipf(1.0, 5);
    const double closed = hit_ratio_closed_form(q5, 2, IrmPolicy::Lru);
    {
        IrmCheckRow row{"sim_lru==closed_form", 5, 2, 1.0, 0, 0, 0, 0.005, false};
        row.value_a = simulate_irm_hit_ratio(q5, 2, IrmPolicy::Lru, requests, seed + 2);
        row.value_b = closed;
        row.diff = std::abs(row.value_a - row.value_b);
        row.pass = row.diff <= row.tolerance;
        rows.push_back(row);
    }
    {
        IrmCheckRow row{"sim_sel==closed_form", 5, 2, 1.0, 0, 0, 0, 0.005, false};
        row.value_a = simulate_irm_hit_ratio(q5, 2, IrmPolicy::Sel, requests, seed + 3);
        row.value_b = closed;
        row.diff = std::abs(row.value_a - row.value_b);
        row.pass = row.diff <= row.tolerance;
        rows.push_back(row);
    }
    return rows;
}

std::vector<TandemRow> run_tandem_preset(const ExperimentConfig& config) {
    std::vector<TandemRow> rows;
    const std::uint64_t requests = config.paper_scale ? 15000000ull : 1000000ull;
    for (const TandemPolicy first :
         {TandemPolicy::Lru, TandemPolicy::Fifo, TandemPolicy::Rnd, TandemPolicy::Sel}) {
        for (const double pct : config.cache_grid_pct) {
            for (const std::uint64_t seed : config.seeds) {
                TandemOptions options;
                options.capacity =
                    static_cast<std::uint32_t>(std::llround(pct / 100.0 * 1000.0));
                options.contents = 1000;
                options.alpha = 1.0;
                options.requests = requests;
                options.seed = seed;
                rows.push_back({first, options.capacity, seed, tandem_run(first, options)});
            }
        }
    }
    return rows;
}

ResultTable run_experiment(const ExperimentConfig& config) {
    fs::create_directories(config.out_dir);

    if (config.preset == "irm-theorem1") {
        auto rows = irm_identity_checks();
        const auto oracle = irm_oracle_checks();
        rows.insert(rows.end(), oracle.begin(), oracle.end());
        const auto sim = irm_simulation_checks(config.paper_scale ? 1000000 : 200000,
                                               config.seeds.empty() ? 1 : config.seeds.front());
        rows.insert(rows.end(), sim.begin(), sim.end());
        std::ofstream(fs::path(config.out_dir) / "irm.csv") << irm_csv(rows);
        ResultTable table;
        for (const auto& row : rows) {
            if (!row.pass) ++table.failures;
        }
        return table;
    }
    if (config.preset == "tandem-fig3-4") {
        const auto rows = run_tandem_preset(config);
        std::ofstream(fs::path(config.out_dir) / "tandem.csv") << tandem_csv(rows);
        return {};
    }

    const auto planned = expand_preset(config);
    ResultTable table;
    table.rows.resize(planned.size());

    std::atomic<std::size_t> cursor{0};
    const unsigned hw = std::thread::hardware_concurrency();
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(config.threads > 0 ? config.threads : hw,
                                                       planned.size()));
    auto work = [&] {
        for (std::size_t i = cursor.fetch_add(1); i < planned.size(); i = cursor.fetch_add(1)) {
            const PlannedRun& run = planned[i];
            ResultRow& row = table.rows[i];
            row.preset = config.preset;
            row.combination = run.combination;
            row.cache_pct = run.cache_pct;
            row.seed = run.seed;
            try {
                row.report = run_simulation(run.scenario, run.seed).report;
            } catch (const std::exception& e) {
                row.error = e.what();
                // CSV rows are comma separated; keep the message on one field.
                for (auto& ch : row.error) {
                    if (ch == ',' || ch == '\n') ch = ';';
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    for (const auto& row : table.rows) {
        if (!row.error.empty()) ++table.failures;
    }

    std::ofstream(fs::path(config.out_dir) / "results.csv") << results_csv(table);
    std::ofstream(fs::path(config.out_dir) / "summary.csv") << summary_csv(table);
    if (config.write_run_documents) {
        const fs::path run_dir = fs::path(config.out_dir) / "runs";
        fs::create_directories(run_dir);
        for (const auto& row : table.rows) {
            if (!row.error.empty()) continue;
            const std::string name = row.combination + "_" + format_double(row.cache_pct) +
                                     "_s" + std::to_string(row.seed) + ".json";
            std::ofstream(run_dir / name) << report_json(row.report);
        }
    }
    return table;
}

Scenario scenario_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario file not found: " + path);
    nlohmann::json j;
    in >> j;

    Scenario scenario;
    const auto& topo_spec = j.at("topology");
    const std::string kind = topo_spec.at("kind");
    const double link_delay = topo_spec.value("link_delay", 0.001);
    if (kind == "tree") {
        scenario.topo = build_binary_tree(topo_spec.value("levels", 5),
                                          topo_spec.value("consumers_per_group", 125),
                                          topo_spec.value("contents", 1000), link_delay);
        scenario.producer_alpha = {j.value("traffic", nlohmann::json::object())
                                       .value("alpha", 1.0)};
        scenario.group_content_rate = 12.5;
    } else if (kind == "abilene") {
        scenario.topo = build_abilene(topo_spec.value("consumers_per_group", 100),
                                      topo_spec.value("contents_per_producer", 100),
                                      topo_spec.value("file", std::string()), link_delay);
        scenario.producer_alpha =
            abilene_alphas(scenario.topo.producers.size(), topo_spec.value("alpha_seed", 1));
        scenario.group_content_rate = 22.0;
    } else {
        throw std::runtime_error("topology kind must be tree or abilene");
    }

    if (j.contains("traffic")) {
        const auto& t = j.at("traffic");
        scenario.group_content_rate = t.value("content_rate", scenario.group_content_rate);
        scenario.mean_content_size = t.value("mean_size", 100.0);
        scenario.cbr_rate = t.value("cbr_rate", 100.0);
        if (t.contains("alpha") && kind == "tree") {
            scenario.producer_alpha = {t.at("alpha").get<double>()};
        }
    }
    scenario.duration = j.value("duration", 200.0);
    if (j.contains("coordination")) {
        const auto& c = j.at("coordination");
        scenario.coord.nomination_window = c.value("nomination_window", 1u);
        scenario.coord.frozen_period = c.value("frozen_period", 60.0);
        scenario.coord.nomination_timeout = c.value("nomination_timeout", 0.0);
    }

    const auto& caches = j.at("caches");
    if (caches.contains("combination")) {
        const Combination combination = combination_from(caches.at("combination"));
        const std::uint32_t capacity = caches.at("capacity");
        const double rtr_avg = router_avg(shortest_path_routes(scenario.topo));
        assign_caches(scenario, combination, capacity, rtr_avg);
    } else {
        scenario.caches.clear();
        for (const auto& spec : caches.at("per_router")) {
            const std::string kind_name = spec.at("kind");
            CacheKind cache_kind;
            if (kind_name == "none") cache_kind = CacheKind::None;
            else if (kind_name == "LRU") cache_kind = CacheKind::Lru;
            else if (kind_name == "FIFO") cache_kind = CacheKind::Fifo;
            else if (kind_name == "RND") cache_kind = CacheKind::Rnd;
            else if (kind_name == "SEL") cache_kind = CacheKind::Selection;
            else if (kind_name == "COORD") cache_kind = CacheKind::Coordinated;
            else throw std::runtime_error("unknown cache kind: " + kind_name);
            scenario.caches.push_back({cache_kind, spec.at("capacity").get<std::uint32_t>()});
        }
    }
    scenario.label = j.value("label", std::string("custom"));
    return scenario;
}

} // namespace netcache

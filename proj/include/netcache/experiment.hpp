#ifndef NETCACHE_EXPERIMENT_HPP
#define NETCACHE_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netcache/engine.hpp"
#include "netcache/tandem.hpp"

namespace netcache {

inline constexpr const char* kResultsSchema = "netcache-results-1";

enum class Combination : std::uint8_t { LruEqu, SelEqu, LruBig };

const char* to_string(Combination combination);
Combination combination_from(const std::string& name);

struct ExperimentConfig {
    std::string preset = "tree-fig7"; // tandem-fig3-4 | tree-fig7 | abilene-fig8 |
                                      // irm-theorem1 | custom
    std::vector<double> cache_grid_pct = {0.1, 1.0, 5.0};
    std::vector<Combination> combinations = {Combination::LruEqu, Combination::SelEqu,
                                             Combination::LruBig};
    std::vector<std::uint64_t> seeds = {1, 2, 3};
    double duration = 200.0;
    bool paper_scale = false; // 1000 s, seeds 1..10, 15M tandem requests
    int tree_levels = 5;
    double link_delay = 0.001;
    CoordParams coord;
    std::string out_dir = ".";
    std::string scenario_file; // custom preset
    std::string topology_file; // abilene override, bundled copy by default
    int threads = 0;           // 0 = hardware concurrency
    bool write_run_documents = true;
};

struct PlannedRun {
    Scenario scenario;
    std::string combination;
    double cache_pct = 0.0;
    std::uint64_t seed = 0;
};

// Fully resolved network scenarios for the tree, abilene and custom presets.
std::vector<PlannedRun> expand_preset(const ExperimentConfig& config);

struct ResultRow {
    std::string preset;
    std::string combination;
    double cache_pct = 0.0;
    std::uint64_t seed = 0;
    MetricsReport report;
    std::string error; // nonempty when the run aborted
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::uint64_t failures = 0;
};

// Runs every planned scenario (parallel across runs), writes results.csv,
// summary.csv and per-run JSON documents under out_dir.
ResultTable run_experiment(const ExperimentConfig& config);

// Theorem-check rows shared by the irm-theorem1 preset and the acceptance
// suite: closed-form identity, oracle agreement, and simulation equality.
struct IrmCheckRow {
    std::string check;
    std::uint32_t n = 0;
    std::uint32_t c = 0;
    double alpha = -1.0; // < 0 for hand-picked vectors
    double value_a = 0.0;
    double value_b = 0.0;
    double diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

std::vector<IrmCheckRow> irm_identity_checks();   // pi_sel vs pi_lru, term by term
std::vector<IrmCheckRow> irm_oracle_checks();     // closed forms vs Markov oracle
std::vector<IrmCheckRow> irm_simulation_checks(std::uint64_t requests, std::uint64_t seed);

// Tandem preset rows (filter-effect experiment).
struct TandemRow {
    TandemPolicy first;
    std::uint32_t capacity = 0;
    std::uint64_t seed = 0;
    TandemResult result;
};

std::vector<TandemRow> run_tandem_preset(const ExperimentConfig& config);

// Plot-ready serialization helpers. Doubles render with %.10g so reruns are
// byte-identical.
std::string format_double(double value);
std::string results_csv(const ResultTable& table);
std::string summary_csv(const ResultTable& table);
std::string tandem_csv(const std::vector<TandemRow>& rows);
std::string irm_csv(const std::vector<IrmCheckRow>& rows);
std::string report_json(const MetricsReport& report);

Scenario scenario_from_json_file(const std::string& path);

} // namespace netcache

#endif

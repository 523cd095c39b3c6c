#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netcache/experiment.hpp"
#include "netcache/metrics.hpp"
#include "netcache/traffic.hpp"

namespace {

netcache::WorkloadEvent parse_id_line(const std::string& line) {
    netcache::WorkloadEvent e;
    e.packet.content = static_cast<std::uint32_t>(std::stoul(line));
    return e;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"netcache: network-of-caches simulator and analytics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a TOML/INI config file");

    // run: expand a preset, execute every (combination, size, seed) scenario
    // and emit plot-ready CSV plus per-run JSON documents.
    netcache::ExperimentConfig config;
    std::vector<std::string> combo_names = {"LRU-EQU", "SEL-EQU", "LRU-BIG"};
    auto* run = app.add_subcommand("run", "run an experiment preset");
    run->add_option("--preset", config.preset,
                    "tandem-fig3-4 | tree-fig7 | abilene-fig8 | irm-theorem1 | custom")
        ->capture_default_str();
    run->add_option("--grid", config.cache_grid_pct,
                    "cache sizes as percent of catalog packets")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--combinations", combo_names, "subset of LRU-EQU,SEL-EQU,LRU-BIG")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--seeds", config.seeds, "seeds to sweep")
        ->delimiter(',')
        ->capture_default_str();
    run->add_option("--duration", config.duration, "simulated seconds per run")
        ->capture_default_str();
    run->add_flag("--paper-scale", config.paper_scale,
                  "full-scale settings: 1000 s, seeds 1..10, 15M tandem requests");
    run->add_option("--levels", config.tree_levels, "binary tree levels")
        ->capture_default_str();
    run->add_option("--link-delay", config.link_delay, "per-hop propagation delay (s)")
        ->capture_default_str();
    run->add_option("--nw-threshold", config.coord.nomination_window,
                    "nomination window threshold")
        ->capture_default_str();
    run->add_option("--frozen-period", config.coord.frozen_period, "frozen period (s)")
        ->capture_default_str();
    run->add_option("--nw-timeout", config.coord.nomination_timeout,
                    "nomination timer period (s); 0 derives it from the RTT");
    run->add_option("--scenario", config.scenario_file, "scenario JSON for --preset custom");
    run->add_option("--topology-file", config.topology_file,
                    "core topology file for the abilene preset");
    run->add_option("--threads", config.threads, "parallel runs (0 = hardware)");
    run->add_option("--out", config.out_dir, "output directory")
        ->envname("NETCACHE_OUTDIR")
        ->capture_default_str();

    // trace: export a generated workload as a replayable text trace.
    struct {
        double alpha = 1.0;
        std::uint32_t contents = 1000;
        double content_rate = 12.5;
        double mean_size = 100.0;
        double cbr_rate = 100.0;
        double duration = 200.0;
        std::uint32_t groups = 1;
        std::uint64_t seed = 1;
        std::string out = "workload.trace";
    } trace_opts;
    auto* trace = app.add_subcommand("trace", "export a workload trace");
    trace->add_option("--alpha", trace_opts.alpha)->capture_default_str();
    trace->add_option("--contents", trace_opts.contents)->capture_default_str();
    trace->add_option("--content-rate", trace_opts.content_rate)->capture_default_str();
    trace->add_option("--mean-size", trace_opts.mean_size)->capture_default_str();
    trace->add_option("--cbr-rate", trace_opts.cbr_rate)->capture_default_str();
    trace->add_option("--duration", trace_opts.duration)->capture_default_str();
    trace->add_option("--groups", trace_opts.groups)->capture_default_str();
    trace->add_option("--seed", trace_opts.seed)->capture_default_str();
    trace->add_option("--out", trace_opts.out)->capture_default_str();

    // sd: stack-distance statistics over a trace or a bare id-per-line stream.
    struct {
        std::string trace;
        bool packet_level = false;
        bool ids_only = false;
    } sd_opts;
    auto* sd = app.add_subcommand("sd", "stack-distance statistics of a request stream");
    sd->add_option("--trace", sd_opts.trace, "trace file (or id-per-line with --ids)")
        ->required();
    sd->add_flag("--packets", sd_opts.packet_level,
                 "analyze packet ids instead of content ids");
    sd->add_flag("--ids", sd_opts.ids_only, "input is one id per line");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            config.combinations.clear();
            for (const auto& name : combo_names) {
                config.combinations.push_back(netcache::combination_from(name));
            }
            const auto table = netcache::run_experiment(config);
            std::cout << "wrote " << config.out_dir << "/"
                      << (config.preset == "irm-theorem1"
                              ? "irm.csv"
                              : config.preset == "tandem-fig3-4" ? "tandem.csv"
                                                                 : "results.csv")
                      << "\n";
            for (const auto& row : table.rows) {
                if (!row.error.empty()) {
                    std::cerr << "run failed: " << row.combination << " " << row.cache_pct
                              << "% seed " << row.seed << ": " << row.error << "\n";
                }
            }
            if (table.failures > 0) {
                std::cerr << table.failures << " run(s) failed\n";
                return 1;
            }
            return 0;
        }
        if (trace->parsed()) {
            const netcache::Popularity pop =
                netcache::Popularity::zipf(trace_opts.alpha, trace_opts.contents);
            const netcache::CatalogWorkload catalog{&pop, 1, trace_opts.content_rate};
            const auto sizes = netcache::sample_catalog_sizes(
                trace_opts.contents, trace_opts.mean_size,
                netcache::derive_seed(trace_opts.seed, 2));
            const auto events = netcache::generate_workload(
                {catalog}, trace_opts.groups, trace_opts.duration, trace_opts.cbr_rate, sizes,
                netcache::derive_seed(trace_opts.seed, 1));
            netcache::write_trace_file(trace_opts.out, events);
            std::cout << "wrote " << events.size() << " packet requests to " << trace_opts.out
                      << "\n";
            return 0;
        }
        if (sd->parsed()) {
            std::vector<std::uint64_t> ids;
            if (sd_opts.ids_only) {
                std::ifstream in(sd_opts.trace);
                if (!in) throw std::runtime_error("cannot open " + sd_opts.trace);
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    ids.push_back(parse_id_line(line).packet.content);
                }
            } else {
                for (const auto& e : netcache::read_trace_file(sd_opts.trace)) {
                    ids.push_back(sd_opts.packet_level ? e.packet.key() : e.packet.content);
                }
            }
            const auto stats = netcache::sd_stats(ids);
            std::cout << "requests " << ids.size() << "\n"
                      << "defined " << stats.defined_count << "\n"
                      << "undefined " << stats.undefined_count << "\n";
            if (!stats.empty()) {
                std::cout << "min_sd " << stats.min_sd << "\n"
                          << "max_sd " << stats.max_sd << "\n"
                          << "avg_sd " << netcache::format_double(stats.avg_sd) << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

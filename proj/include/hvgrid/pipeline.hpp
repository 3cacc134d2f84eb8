#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvgrid/degree_fit.hpp"
#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"
#include "hvgrid/io.hpp"
#include "hvgrid/latticize.hpp"
#include "hvgrid/metrics.hpp"
#include "hvgrid/modularity.hpp"
#include "hvgrid/parallel.hpp"
#include "hvgrid/percolation.hpp"
#include "hvgrid/scoring.hpp"
#include "hvgrid/variants.hpp"

namespace hvgrid {

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr const char* kSeedEnvVar = "HVGRID_SEED";

struct RunConfig {
    std::vector<std::filesystem::path> inputs; // one canonical CSV per network
    std::filesystem::path out_dir;
    std::uint64_t master_seed = kDefaultSeed;
    std::uint32_t runs = 10000;
    std::vector<double> fractions{kCanonicalFractions.begin(), kCanonicalFractions.end()};
    unsigned workers = default_worker_count();
    enum class Format { csv, json };
    Format format = Format::csv;
};

// Seed precedence: explicit flag, then the environment, then the fixed
// default, so replications work out of the box.
inline std::uint64_t resolve_seed(std::optional<std::uint64_t> flag_value) {
    if (flag_value) return *flag_value;
    if (const char* env = std::getenv(kSeedEnvVar)) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return v;
        throw ValidationError(std::string("cannot parse ") + kSeedEnvVar + "='" + env + "'");
    }
    return kDefaultSeed;
}

// Network code: file stem, uppercased. Two-letter codes are the dataset
// convention; anything else is accepted as a free-form name.
inline std::string network_code_from_path(const std::filesystem::path& path) {
    std::string code = path.stem().string();
    for (char& c : code)
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    return code;
}

inline std::vector<std::filesystem::path> list_input_files(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ValidationError("input directory '" + dir.string() + "' does not exist");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw ValidationError("input directory '" + dir.string() + "' contains no .csv files");
    return files;
}

struct NamedGraph {
    std::string code;
    GridGraph graph;
};

inline NamedGraph load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    return {network_code_from_path(path), parse_edge_list(in)};
}

// Everything cmd_metrics emits for one network.
struct NetworkReport {
    std::string code;
    MetricsReport metrics;
    GammaSuite gammas;
    DistanceDistribution distances;
};

inline NetworkReport compute_network_report(const std::string& code, const GridGraph& g,
                                            unsigned workers = 1) {
    NetworkReport report;
    report.code = code;

    MetricsReport& m = report.metrics;
    m.n_nodes = g.node_count();
    m.n_edges = g.edge_count();
    m.density = density(g);
    m.mean_degree = mean_degree(g);

    const auto hist = ordered_distance_histogram(g, workers);
    DistanceStats stats = distance_stats_from_histogram(hist);
    m.diameter = stats.diameter;
    m.avg_path_length = stats.avg_path_length;
    m.efficiency = efficiency_from_histogram(hist, g.node_count());
    report.distances = std::move(stats.distribution);

    m.clustering = clustering(g);
    m.modularity = modularity(g).q;

    if (m.mean_degree > 1.0 && m.clustering > 0.0 && m.avg_path_length > 0.0) {
        const double cr = random_reference_clustering(g.node_count(), m.mean_degree);
        const double lr = random_reference_path_length(g.node_count(), m.mean_degree);
        m.sigma = (m.clustering / cr) / (m.avg_path_length / lr);
    } else {
        m.sigma_degenerate = true;
    }

    try {
        const FlaggedValue lat = lattice_reference(g);
        m.lattice_clustering = lat.value;
        if (!lat.degenerate && lat.value > 0.0 && m.avg_path_length > 0.0 &&
            m.mean_degree > 1.0) {
            m.omega = omega_from_parts(g.node_count(), m.mean_degree, m.avg_path_length,
                                       m.clustering, lat.value);
        } else {
            m.omega_degenerate = true;
        }
    } catch (const UndefinedMetricError&) {
        m.omega_degenerate = true;
    }

    m.voltage_shares = voltage_shares(g);
    report.gammas = gamma_suite(g);
    return report;
}

struct CommandOutcome {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

// ---------------------------------------------------------------------------
// metrics: one table row per network plus per-network JSON and the distance
// distribution for plotting.

inline CommandOutcome cmd_metrics(const RunConfig& config) {
    CommandOutcome outcome;
    const auto dir = config.out_dir / "metrics";

    std::vector<NamedGraph> graphs;
    for (const auto& path : config.inputs) {
        try {
            graphs.push_back(load_network(path));
        } catch (const Error& e) {
            outcome.errors.push_back(path.string() + ": " + e.what());
        }
    }
    std::sort(graphs.begin(), graphs.end(),
              [](const NamedGraph& a, const NamedGraph& b) { return a.code < b.code; });

    std::vector<std::optional<NetworkReport>> reports(graphs.size());
    std::vector<std::string> compute_errors(graphs.size());
    parallel_for(graphs.size(), config.workers, [&](std::size_t i) {
        try {
            reports[i] = compute_network_report(graphs[i].code, graphs[i].graph);
        } catch (const Error& e) {
            compute_errors[i] = graphs[i].code + ": " + e.what();
        }
    });
    for (const auto& err : compute_errors)
        if (!err.empty()) outcome.errors.push_back(err);

    std::string table = metrics_csv_header();
    ordered_json json_table = ordered_json::array();
    for (const auto& report : reports) {
        if (!report) continue;
        table += metrics_csv_row(report->code, report->metrics, report->gammas);
        json_table.push_back(metrics_json(report->code, report->metrics, report->gammas));
        write_file_atomic(dir / (report->code + ".json"),
                          metrics_json(report->code, report->metrics, report->gammas).dump(2) +
                              "\n");
        write_file_atomic(dir / (report->code + "_distances.csv"),
                          distance_distribution_csv(report->distances));
    }
    if (config.format == RunConfig::Format::json)
        write_file_atomic(dir / "table.json", json_table.dump(2) + "\n");
    else
        write_file_atomic(dir / "table.csv", table);
    return outcome;
}

// ---------------------------------------------------------------------------
// degree-fit: per-variant degree PDFs, the four-variant decay constants and
// the relative decrease caused by simplification.

inline CommandOutcome cmd_degree_fit(const RunConfig& config) {
    CommandOutcome outcome;
    const auto dir = config.out_dir / "degree_fit";

    struct Row {
        std::string code;
        GammaSuite gammas;
        RelativeDecrease decrease;
    };
    std::vector<Row> rows;
    for (const auto& path : config.inputs) {
        try {
            NamedGraph net = load_network(path);
            Row row;
            row.code = net.code;
            row.gammas = gamma_suite(net.graph);
            row.decrease = relative_decrease(row.gammas);
            for (const VariantSpec& spec : canonical_variants()) {
                const GridGraph variant = derive_variant(net.graph, spec);
                write_file_atomic(dir / (net.code + "_pdf_" + variant_label(spec) + ".csv"),
                                  degree_pdf_csv(degree_pdf(variant)));
            }
            rows.push_back(std::move(row));
        } catch (const Error& e) {
            outcome.errors.push_back(path.string() + ": " + e.what());
        }
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.code < b.code; });

    std::string gamma_csv = "network,gamma_hv,gamma_hv_simple,gamma_tx,gamma_tx_simple\n";
    std::string decrease_csv = "network,hv,tx\n";
    double mean_hv = 0.0, mean_tx = 0.0;
    for (const Row& row : rows) {
        gamma_csv += row.code + "," + fmt(row.gammas.hv.gamma) + "," +
                     fmt(row.gammas.hv_simple.gamma) + "," + fmt(row.gammas.tx.gamma) + "," +
                     fmt(row.gammas.tx_simple.gamma) + "\n";
        decrease_csv += row.code + "," + fmt(row.decrease.hv) + "," + fmt(row.decrease.tx) + "\n";
        mean_hv += row.decrease.hv;
        mean_tx += row.decrease.tx;
    }
    if (!rows.empty()) {
        mean_hv /= static_cast<double>(rows.size());
        mean_tx /= static_cast<double>(rows.size());
        decrease_csv += "MEAN," + fmt(mean_hv) + "," + fmt(mean_tx) + "\n";
    }
    write_file_atomic(dir / "gammas.csv", gamma_csv);
    write_file_atomic(dir / "relative_decrease.csv", decrease_csv);
    return outcome;
}

// ---------------------------------------------------------------------------
// percolate: the Monte Carlo sweep. One directory per network and scenario
// holding the record list, per-metric histograms and a summary.

inline std::vector<RemovalScenario> scenarios_from_config(const RunConfig& config) {
    std::vector<RemovalScenario> scenarios;
    for (RemovalKind kind : {RemovalKind::node, RemovalKind::edge})
        for (double f : config.fractions)
            scenarios.push_back({kind, f, config.runs, config.master_seed});
    return scenarios;
}

inline void write_scenario_result(const std::filesystem::path& scenario_dir,
                                  const std::string& code, const ScenarioResult& result) {
    write_file_atomic(scenario_dir / "records.csv", records_csv(result.records));
    for (const auto& [metric, hist] : result.histograms)
        write_file_atomic(scenario_dir / ("hist_" + std::string(perf_metric_label(metric)) +
                                          ".csv"),
                          histogram_csv(hist));
    write_file_atomic(scenario_dir / "summary.json",
                      scenario_result_json(code, result).dump(2) + "\n");
}

inline CommandOutcome cmd_percolate(const RunConfig& config) {
    CommandOutcome outcome;
    const auto dir = config.out_dir / "percolation";
    const auto scenarios = scenarios_from_config(config);

    std::vector<NamedGraph> graphs;
    for (const auto& path : config.inputs) {
        try {
            graphs.push_back(load_network(path));
        } catch (const Error& e) {
            outcome.errors.push_back(path.string() + ": " + e.what());
        }
    }

    struct Task {
        const NamedGraph* net;
        RemovalScenario scenario;
    };
    std::vector<Task> tasks;
    for (const auto& net : graphs)
        for (const auto& scenario : scenarios) tasks.push_back({&net, scenario});

    std::vector<std::string> task_errors(tasks.size());
    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        const Task& task = tasks[i];
        try {
            const ScenarioResult result = run_scenario(task.net->graph, task.scenario);
            write_scenario_result(dir / task.net->code / task.scenario.label(), task.net->code,
                                  result);
        } catch (const Error& e) {
            task_errors[i] =
                task.net->code + "/" + task.scenario.label() + ": " + e.what();
        }
    });
    for (const auto& err : task_errors)
        if (!err.empty()) outcome.errors.push_back(err);
    return outcome;
}

// ---------------------------------------------------------------------------
// score: reduce each scenario to its per-metric mean, standardize across
// networks and emit the composite table.

inline CommandOutcome cmd_score(const RunConfig& config) {
    CommandOutcome outcome;
    const auto percolation_dir = config.out_dir / "percolation";
    const auto dir = config.out_dir / "score";

    std::vector<std::string> codes;
    for (const auto& path : config.inputs) codes.push_back(network_code_from_path(path));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());

    RawPerformance raw;
    try {
        for (const auto& code : codes) {
            for (const RemovalScenario& scenario : scenarios_from_config(config)) {
                const auto summary_path =
                    percolation_dir / code / scenario.label() / "summary.json";
                std::ifstream in(summary_path);
                if (!in)
                    throw ValidationError("missing percolation result for " + code + "/" +
                                          scenario.label() + " (expected " +
                                          summary_path.string() + ")");
                ordered_json j = ordered_json::parse(in);
                RawCells cells;
                const bool has_clustering = j.at("clustering_defined").get<bool>();
                for (std::size_t mi = 0; mi < kPerfMetrics.size(); ++mi) {
                    const PerfMetric metric = kPerfMetrics[mi];
                    if (metric == PerfMetric::clustering_drop && !has_clustering) {
                        cells[mi] = std::nullopt;
                        continue;
                    }
                    cells[mi] =
                        j.at("summaries").at(perf_metric_label(metric)).at("mean").get<double>();
                }
                raw[code][ScenarioKey{scenario.kind, scenario.fraction}] = cells;
            }
        }

        const PerformanceTable table = composite(raw);
        write_file_atomic(dir / "z_table.csv", z_table_csv(table));
        write_file_atomic(dir / "composites.csv", composites_csv(table));
        write_file_atomic(dir / "composite_scatter.csv", composite_scatter_csv(table));
    } catch (const Error& e) {
        outcome.errors.push_back(e.what());
    } catch (const nlohmann::json::exception& e) {
        outcome.errors.push_back(std::string("malformed percolation summary: ") + e.what());
    }
    return outcome;
}

// report: the full pipeline in one call.
inline CommandOutcome cmd_report(const RunConfig& config) {
    CommandOutcome outcome;
    for (const auto* step : {"metrics", "degree-fit", "percolate", "score"}) {
        CommandOutcome sub;
        if (std::string(step) == "metrics") sub = cmd_metrics(config);
        else if (std::string(step) == "degree-fit") sub = cmd_degree_fit(config);
        else if (std::string(step) == "percolate") sub = cmd_percolate(config);
        else sub = cmd_score(config);
        outcome.errors.insert(outcome.errors.end(), sub.errors.begin(), sub.errors.end());
    }
    return outcome;
}

} // namespace hvgrid

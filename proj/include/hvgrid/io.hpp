#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hvgrid/degree_fit.hpp"
#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"
#include "hvgrid/metrics.hpp"
#include "hvgrid/percolation.hpp"
#include "hvgrid/scoring.hpp"

namespace hvgrid {

using ordered_json = nlohmann::ordered_json;

inline std::string fmt(double v) { return detail::format_double(v); }

// Writes a file atomically: the content lands under a temporary name first
// and is renamed into place, so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ValidationError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out)
            throw ValidationError("failed writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Metrics

inline const std::vector<std::string>& metrics_csv_columns() {
    static const std::vector<std::string> cols = {
        "network",        "n_nodes",          "n_edges",          "density",
        "mean_degree",    "diameter",         "avg_path_length",  "clustering",
        "modularity",     "sigma",            "omega",            "efficiency",
        "share_110_150",  "share_220_275",    "share_330_400",    "gamma_hv",
        "gamma_hv_simple", "gamma_tx",        "gamma_tx_simple"};
    return cols;
}

inline std::string metrics_csv_header() {
    std::string out;
    for (const auto& c : metrics_csv_columns()) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out + "\n";
}

inline std::string metrics_csv_row(const std::string& network, const MetricsReport& m,
                                   const GammaSuite& gammas) {
    std::ostringstream out;
    out << network << ',' << m.n_nodes << ',' << m.n_edges << ',' << fmt(m.density) << ','
        << fmt(m.mean_degree) << ',' << m.diameter << ',' << fmt(m.avg_path_length) << ','
        << fmt(m.clustering) << ',' << fmt(m.modularity) << ',' << fmt(m.sigma) << ','
        << fmt(m.omega) << ',' << fmt(m.efficiency) << ','
        << fmt(m.voltage_shares.at(VoltageBand::kv110_150)) << ','
        << fmt(m.voltage_shares.at(VoltageBand::kv220_275)) << ','
        << fmt(m.voltage_shares.at(VoltageBand::kv330_400)) << ',' << fmt(gammas.hv.gamma)
        << ',' << fmt(gammas.hv_simple.gamma) << ',' << fmt(gammas.tx.gamma) << ','
        << fmt(gammas.tx_simple.gamma) << '\n';
    return out.str();
}

inline ordered_json degree_fit_json(const DegreeFit& f) {
    ordered_json j;
    j["gamma"] = f.gamma;
    j["prefactor"] = f.prefactor;
    j["r_squared"] = f.r_squared;
    j["support"] = f.support;
    return j;
}

inline ordered_json metrics_json(const std::string& network, const MetricsReport& m,
                                 const GammaSuite& gammas) {
    ordered_json j;
    j["network"] = network;
    j["n_nodes"] = m.n_nodes;
    j["n_edges"] = m.n_edges;
    j["density"] = m.density;
    j["mean_degree"] = m.mean_degree;
    j["diameter"] = m.diameter;
    j["avg_path_length"] = m.avg_path_length;
    j["clustering"] = m.clustering;
    j["modularity"] = m.modularity;
    j["sigma"] = m.sigma;
    j["sigma_degenerate"] = m.sigma_degenerate;
    j["omega"] = m.omega;
    j["omega_degenerate"] = m.omega_degenerate;
    j["lattice_clustering"] = m.lattice_clustering;
    j["efficiency"] = m.efficiency;
    ordered_json shares;
    for (const auto& [band, value] : m.voltage_shares) shares[voltage_band_label(band)] = value;
    j["voltage_shares"] = shares;
    ordered_json g;
    g["hv"] = degree_fit_json(gammas.hv);
    g["hv_simple"] = degree_fit_json(gammas.hv_simple);
    g["tx"] = degree_fit_json(gammas.tx);
    g["tx_simple"] = degree_fit_json(gammas.tx_simple);
    j["gamma"] = g;
    return j;
}

// Two-column CSV of the hop-distance census, for distance-PDF plots.
inline std::string distance_distribution_csv(const DistanceDistribution& d) {
    std::string out = "distance,probability\n";
    for (const auto& [dist, p] : d.pdf)
        out += std::to_string(dist) + "," + fmt(p) + "\n";
    return out;
}

// Two-column CSV of a degree PDF, for degree-distribution plots.
inline std::string degree_pdf_csv(const DegreePdf& d) {
    std::string out = "degree,probability\n";
    for (const auto& [k, p] : d.pdf)
        out += std::to_string(k) + "," + fmt(p) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Percolation

inline std::string records_csv(const std::vector<RunRecord>& records) {
    std::string out = "run,edges_lost_share,lcc_size,eff_drop,clustering_drop\n";
    for (std::size_t r = 0; r < records.size(); ++r) {
        const RunRecord& rec = records[r];
        out += std::to_string(r) + "," + fmt(rec.edges_lost_share) + "," +
               std::to_string(rec.lcc_size) + "," + fmt(rec.eff_drop) + ",";
        out += rec.clustering_drop ? fmt(*rec.clustering_drop) : std::string("nan");
        out += "\n";
    }
    return out;
}

inline std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_lo,bin_hi,probability\n";
    const double width = h.bin_width();
    for (std::size_t i = 0; i < h.mass.size(); ++i) {
        const double lo = h.lo + width * static_cast<double>(i);
        const double hi = i + 1 == h.mass.size() ? h.hi : h.lo + width * static_cast<double>(i + 1);
        out += fmt(lo) + "," + fmt(hi) + "," + fmt(h.mass[i]) + "\n";
    }
    return out;
}

inline ordered_json summary_json(const SampleSummary& s) {
    ordered_json j;
    j["mean"] = s.mean;
    j["stddev"] = s.stddev;
    j["min"] = s.min;
    j["q05"] = s.q05;
    j["q25"] = s.q25;
    j["median"] = s.median;
    j["q75"] = s.q75;
    j["q95"] = s.q95;
    j["max"] = s.max;
    return j;
}

inline ordered_json scenario_result_json(const std::string& network, const ScenarioResult& r) {
    ordered_json j;
    j["network"] = network;
    j["kind"] = removal_kind_label(r.scenario.kind);
    j["fraction"] = r.scenario.fraction;
    j["canonical_fraction"] = r.scenario.canonical();
    j["runs"] = r.scenario.runs;
    j["master_seed"] = r.scenario.master_seed;
    j["removal_size"] = r.removal_size;
    ordered_json base;
    base["efficiency"] = r.baseline.eff0;
    base["clustering"] = r.baseline.c0;
    base["n_edges"] = r.baseline.e0;
    base["n_nodes"] = r.baseline.n0;
    j["baseline"] = base;
    j["clustering_defined"] = r.clustering_defined;
    ordered_json sums;
    for (const auto& [metric, summary] : r.summaries)
        sums[perf_metric_label(metric)] = summary_json(summary);
    j["summaries"] = sums;
    return j;
}

// ---------------------------------------------------------------------------
// Scoring

inline std::string z_table_csv(const PerformanceTable& t) {
    std::string out = "network,scenario,metric,raw,z\n";
    for (const auto& name : t.networks) {
        for (const ScenarioKey& key : t.scenarios) {
            const auto& raw = t.raw.at(name).at(key);
            const auto& z = t.z.at(name).at(key);
            for (std::size_t mi = 0; mi < kPerfMetrics.size(); ++mi) {
                out += name + "," + key.label() + "," + perf_metric_label(kPerfMetrics[mi]) + ",";
                out += raw[mi] ? fmt(*raw[mi]) : std::string("nan");
                out += "," + fmt(z[mi]) + "\n";
            }
        }
    }
    return out;
}

inline std::string composites_csv(const PerformanceTable& t) {
    std::string out = "network,node_composite,edge_composite,composite,group\n";
    for (const auto& name : t.networks) {
        out += name + "," + fmt(t.node_composite.at(name)) + "," +
               fmt(t.edge_composite.at(name)) + "," + fmt(t.composite.at(name)) + ",";
        out += t.group.count(name) ? perf_group_label(t.group.at(name)) : "";
        out += "\n";
    }
    return out;
}

// Scatter data for the node-vs-edge composite plane.
inline std::string composite_scatter_csv(const PerformanceTable& t) {
    std::string out = "network,node_composite,edge_composite,group\n";
    for (const auto& name : t.networks) {
        out += name + "," + fmt(t.node_composite.at(name)) + "," +
               fmt(t.edge_composite.at(name)) + ",";
        out += t.group.count(name) ? perf_group_label(t.group.at(name)) : "";
        out += "\n";
    }
    return out;
}

} // namespace hvgrid

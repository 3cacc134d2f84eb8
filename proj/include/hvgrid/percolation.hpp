#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"
#include "hvgrid/histogram.hpp"
#include "hvgrid/metrics.hpp"
#include "hvgrid/rng.hpp"

namespace hvgrid {

enum class RemovalKind { node, edge };

inline const char* removal_kind_label(RemovalKind k) {
    return k == RemovalKind::node ? "node" : "edge";
}

enum class PerfMetric { edges_lost_share, lcc_size, eff_drop, clustering_drop };

inline constexpr std::array<PerfMetric, 4> kPerfMetrics = {
    PerfMetric::edges_lost_share, PerfMetric::lcc_size, PerfMetric::eff_drop,
    PerfMetric::clustering_drop};

inline const char* perf_metric_label(PerfMetric m) {
    switch (m) {
        case PerfMetric::edges_lost_share: return "edges_lost_share";
        case PerfMetric::lcc_size: return "lcc_size";
        case PerfMetric::eff_drop: return "eff_drop";
        default: return "clustering_drop";
    }
}

inline constexpr std::array<double, 5> kCanonicalFractions = {0.01, 0.02, 0.05, 0.10, 0.20};

// One removal experiment: a kind, a fraction of elements to delete, a run
// count and the master seed every run's randomness is derived from.
struct RemovalScenario {
    RemovalKind kind = RemovalKind::node;
    double fraction = 0.01;
    std::uint32_t runs = 10000;
    std::uint64_t master_seed = 0;

    bool canonical() const {
        for (double f : kCanonicalFractions)
            if (std::abs(fraction - f) < 1e-12) return true;
        return false;
    }

    // Stable stream identifier: independent of run count and of any other
    // scenario configured alongside, so seeds never shift.
    std::uint64_t stream_id() const {
        const auto ppm = static_cast<std::uint64_t>(std::llround(fraction * 1e6));
        return (static_cast<std::uint64_t>(kind == RemovalKind::edge ? 1 : 0) << 32) | ppm;
    }

    std::string label() const {
        const double pct = fraction * 100.0;
        const double rounded = std::floor(pct + 0.5);
        std::string num = std::abs(pct - rounded) < 1e-9
                              ? std::to_string(static_cast<long long>(rounded))
                              : detail::format_double(pct);
        return std::string(removal_kind_label(kind)) + "_" + num + "pct";
    }
};

// Outcome of a single removal realization.
struct RunRecord {
    double edges_lost_share = 0.0;
    std::uint32_t lcc_size = 0;
    double eff_drop = 0.0;
    std::optional<double> clustering_drop; // absent when the baseline has C0 = 0
};

struct Baseline {
    double eff0 = 0.0;
    double c0 = 0.0;
    std::uint64_t e0 = 0;
    std::uint64_t n0 = 0;
};

inline Baseline compute_baseline(const GridGraph& g, unsigned workers = 1) {
    Baseline b;
    b.n0 = g.node_count();
    b.e0 = g.edge_count();
    b.eff0 = efficiency(g, workers);
    b.c0 = clustering(g);
    return b;
}

// Number of elements a fraction removes: round half up, clamped so at least
// one element goes and at least one remains.
inline std::uint32_t removal_count(std::uint64_t total, double fraction) {
    if (!std::isfinite(fraction) || !(fraction > 0.0) || !(fraction < 1.0))
        throw ValidationError("removal fraction must lie strictly inside (0,1)");
    if (total < 2)
        throw ValidationError("removal needs at least two elements so one can remain");
    auto count = static_cast<std::uint64_t>(
        std::floor(static_cast<double>(total) * fraction + 0.5));
    if (count < 1) count = 1;
    if (count > total - 1) count = total - 1;
    return static_cast<std::uint32_t>(count);
}

// Removes the named victims and returns the damaged graph. Node victims are
// substation names and take their incident circuits with them; edge victims
// are circuit ids and leave every substation in place.
inline GridGraph apply_removal(const GridGraph& g, RemovalKind kind,
                               const std::vector<std::string>& victims) {
    const std::size_t n = g.node_count();
    if (kind == RemovalKind::node) {
        std::vector<std::uint8_t> gone(n, 0);
        for (const auto& name : victims) {
            const NodeId u = g.find_node(name);
            if (u >= n) throw ValidationError("unknown node victim '" + name + "'");
            gone[u] = 1;
        }
        std::vector<std::string> names;
        std::vector<NodeId> remap(n, 0);
        for (NodeId u = 0; u < n; ++u) {
            if (!gone[u]) {
                remap[u] = static_cast<NodeId>(names.size());
                names.push_back(g.node_name(u));
            }
        }
        std::vector<Edge> edges;
        for (const Edge& e : g.edges()) {
            if (gone[e.a] || gone[e.b]) continue;
            Edge out = e;
            out.a = remap[e.a];
            out.b = remap[e.b];
            edges.push_back(std::move(out));
        }
        return GridGraph(std::move(names), std::move(edges), g.is_simple());
    }

    std::set<std::string> wanted(victims.begin(), victims.end());
    std::set<std::string> found;
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        if (wanted.count(e.circuit_id)) {
            found.insert(e.circuit_id);
            continue;
        }
        edges.push_back(e);
    }
    for (const auto& id : wanted)
        if (!found.count(id)) throw ValidationError("unknown circuit victim '" + id + "'");
    return GridGraph(std::vector<std::string>(g.node_names()), std::move(edges), g.is_simple());
}

namespace detail {

// Component labels in node-id order. Returns the label array and the index
// of the largest component (ties resolved toward the component containing
// the smallest node id, i.e. the first one discovered).
struct ComponentInfo {
    std::vector<std::int32_t> label;
    std::vector<std::uint32_t> size;
    std::int32_t largest = -1;
};

} // namespace detail

// The four performance numbers for one damaged graph against its baseline:
// share of circuits outside the post-removal LCC, LCC node count, relative
// efficiency decrease over the original node count and relative clustering
// change over the surviving nodes.
inline RunRecord run_metrics(const GridGraph& g0, const GridGraph& g1, const Baseline& baseline,
                             unsigned workers = 1) {
    (void)g0;
    if (!(baseline.eff0 > 0.0))
        throw ValidationError("baseline efficiency must be positive");
    if (baseline.e0 == 0)
        throw ValidationError("baseline edge count must be positive");

    RunRecord rec;
    if (g1.node_count() == 0) {
        rec.edges_lost_share = 1.0;
        rec.lcc_size = 0;
        rec.eff_drop = 1.0;
        if (baseline.c0 > 0.0) rec.clustering_drop = 1.0;
        return rec;
    }

    // Largest component and the circuits it retains.
    const std::size_t n1 = g1.node_count();
    std::vector<std::int32_t> label(n1, -1);
    std::vector<std::uint32_t> comp_size;
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n1; ++s) {
        if (label[s] != -1) continue;
        const auto id = static_cast<std::int32_t>(comp_size.size());
        label[s] = id;
        queue.clear();
        queue.push_back(s);
        std::uint32_t count = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            ++count;
            for (NodeId v : g1.neighbors(queue[head])) {
                if (label[v] == -1) {
                    label[v] = id;
                    queue.push_back(v);
                }
            }
        }
        comp_size.push_back(count);
    }
    std::int32_t lcc = 0;
    for (std::size_t c = 1; c < comp_size.size(); ++c)
        if (comp_size[c] > comp_size[static_cast<std::size_t>(lcc)])
            lcc = static_cast<std::int32_t>(c);

    std::uint64_t lcc_edges = 0;
    for (const Edge& e : g1.edges())
        if (label[e.a] == lcc) ++lcc_edges;

    rec.lcc_size = comp_size[static_cast<std::size_t>(lcc)];
    rec.edges_lost_share =
        1.0 - static_cast<double>(lcc_edges) / static_cast<double>(baseline.e0);

    const double eff1 = efficiency_from_histogram(ordered_distance_histogram(g1, workers),
                                                  static_cast<std::size_t>(baseline.n0));
    rec.eff_drop = (baseline.eff0 - eff1) / baseline.eff0;

    if (baseline.c0 > 0.0) {
        const double c1 = clustering(g1);
        rec.clustering_drop = (baseline.c0 - c1) / baseline.c0;
    }
    return rec;
}

// Reusable per-thread state for the in-place percolation engine.
class PercolationEngine {
public:
    explicit PercolationEngine(const GridGraph& g, unsigned workers = 1)
        : g_(g), baseline_(compute_baseline(g, workers)) {}

    const Baseline& baseline() const { return baseline_; }
    const GridGraph& graph() const { return g_; }

    struct Workspace {
        explicit Workspace(const GridGraph& g)
            : gone_node(g.node_count(), 0),
              gone_edge(g.edge_count(), 0),
              label(g.node_count(), -1),
              seen(g.node_count(), 0),
              mark(g.node_count(), 0),
              dist(g.node_count(), 0),
              queue(g.node_count(), 0),
              hist(g.node_count() + 1, 0) {}

        std::uint32_t run_tag = 0;
        std::uint32_t seen_tag = 0;
        std::uint32_t mark_tag = 0;
        std::vector<std::uint32_t> gone_node;
        std::vector<std::uint32_t> gone_edge;
        std::vector<std::int32_t> label;
        std::vector<std::uint32_t> seen;
        std::vector<std::uint32_t> mark;
        std::vector<std::uint32_t> dist;
        std::vector<NodeId> queue;
        std::vector<std::uint64_t> hist;
        std::vector<std::uint32_t> comp_size;
        std::vector<NodeId> nbr_list;
    };

    // One removal realization without materializing a new graph. Victims are
    // node ids or edge indices of the base graph. Equivalent, record for
    // record, to apply_removal followed by run_metrics.
    RunRecord run_single(RemovalKind kind, std::span<const std::uint32_t> victims) const {
        Workspace ws(g_);
        return run_in_workspace(ws, kind, victims);
    }

    RunRecord run_in_workspace(Workspace& ws, RemovalKind kind,
                               std::span<const std::uint32_t> victims) const {
        const std::size_t n = g_.node_count();
        const bool node_kind = kind == RemovalKind::node;
        ++ws.run_tag;
        const std::uint32_t tag = ws.run_tag;
        for (std::uint32_t v : victims) {
            if (node_kind) {
                if (v >= n) throw ValidationError("node victim out of range");
                ws.gone_node[v] = tag;
            } else {
                if (v >= g_.edge_count()) throw ValidationError("edge victim out of range");
                ws.gone_edge[v] = tag;
            }
        }

        const auto node_alive = [&](NodeId u) { return !node_kind || ws.gone_node[u] != tag; };
        const auto edge_alive = [&](EdgeId e) { return node_kind || ws.gone_edge[e] != tag; };

        // Components of the damaged graph.
        std::fill(ws.label.begin(), ws.label.end(), -1);
        ws.comp_size.clear();
        for (NodeId s = 0; s < n; ++s) {
            if (!node_alive(s) || ws.label[s] != -1) continue;
            const auto id = static_cast<std::int32_t>(ws.comp_size.size());
            ws.label[s] = id;
            std::size_t head = 0, tail = 0;
            ws.queue[tail++] = s;
            std::uint32_t count = 0;
            while (head < tail) {
                const NodeId u = ws.queue[head++];
                ++count;
                if (node_kind) {
                    for (NodeId v : g_.neighbors(u)) {
                        if (node_alive(v) && ws.label[v] == -1) {
                            ws.label[v] = id;
                            ws.queue[tail++] = v;
                        }
                    }
                } else {
                    for (const Arc& a : g_.arcs(u)) {
                        if (edge_alive(a.edge) && a.to != u && ws.label[a.to] == -1) {
                            ws.label[a.to] = id;
                            ws.queue[tail++] = a.to;
                        }
                    }
                }
            }
            ws.comp_size.push_back(count);
        }

        RunRecord rec;
        if (ws.comp_size.empty()) {
            rec.edges_lost_share = 1.0;
            rec.eff_drop = 1.0;
            if (baseline_.c0 > 0.0) rec.clustering_drop = 1.0;
            return rec;
        }

        std::int32_t lcc = 0;
        for (std::size_t c = 1; c < ws.comp_size.size(); ++c)
            if (ws.comp_size[c] > ws.comp_size[static_cast<std::size_t>(lcc)])
                lcc = static_cast<std::int32_t>(c);
        rec.lcc_size = ws.comp_size[static_cast<std::size_t>(lcc)];

        std::uint64_t lcc_edges = 0;
        const auto& edges = g_.edges();
        for (EdgeId e = 0; e < edges.size(); ++e) {
            if (!edge_alive(e)) continue;
            if (!node_alive(edges[e].a) || !node_alive(edges[e].b)) continue;
            if (ws.label[edges[e].a] == lcc) ++lcc_edges;
        }
        rec.edges_lost_share =
            1.0 - static_cast<double>(lcc_edges) / static_cast<double>(baseline_.e0);

        // Ordered-pair distance census of the damaged graph.
        std::fill(ws.hist.begin(), ws.hist.end(), 0);
        for (NodeId s = 0; s < n; ++s) {
            if (!node_alive(s)) continue;
            const std::uint32_t stag = ++ws.seen_tag;
            std::size_t head = 0, tail = 0;
            ws.queue[tail++] = s;
            ws.seen[s] = stag;
            ws.dist[s] = 0;
            while (head < tail) {
                const NodeId u = ws.queue[head++];
                const std::uint32_t du = ws.dist[u];
                if (node_kind) {
                    for (NodeId v : g_.neighbors(u)) {
                        if (node_alive(v) && ws.seen[v] != stag) {
                            ws.seen[v] = stag;
                            ws.dist[v] = du + 1;
                            ++ws.hist[du + 1];
                            ws.queue[tail++] = v;
                        }
                    }
                } else {
                    for (const Arc& a : g_.arcs(u)) {
                        if (edge_alive(a.edge) && a.to != u && ws.seen[a.to] != stag) {
                            ws.seen[a.to] = stag;
                            ws.dist[a.to] = du + 1;
                            ++ws.hist[du + 1];
                            ws.queue[tail++] = a.to;
                        }
                    }
                }
            }
        }
        double inv_sum = 0.0;
        for (std::size_t d = 1; d < ws.hist.size(); ++d)
            if (ws.hist[d] != 0)
                inv_sum += static_cast<double>(ws.hist[d]) / static_cast<double>(d);
        const double nn = static_cast<double>(baseline_.n0);
        const double eff1 = inv_sum / (nn * (nn - 1.0));
        rec.eff_drop = (baseline_.eff0 - eff1) / baseline_.eff0;

        // Clustering over the surviving nodes, on the alive simple projection.
        if (baseline_.c0 > 0.0) {
            double c_sum = 0.0;
            std::uint64_t n_alive = 0;
            for (NodeId i = 0; i < n; ++i) {
                if (!node_alive(i)) continue;
                ++n_alive;
                ws.nbr_list.clear();
                if (node_kind) {
                    for (NodeId v : g_.neighbors(i))
                        if (node_alive(v)) ws.nbr_list.push_back(v);
                } else {
                    const std::uint32_t mtag = ++ws.mark_tag;
                    for (const Arc& a : g_.arcs(i)) {
                        if (!edge_alive(a.edge) || a.to == i) continue;
                        if (ws.mark[a.to] != mtag) {
                            ws.mark[a.to] = mtag;
                            ws.nbr_list.push_back(a.to);
                        }
                    }
                }
                const std::size_t k = ws.nbr_list.size();
                if (k < 2) continue;
                std::uint64_t links = 0;
                for (std::size_t x = 0; x < k; ++x) {
                    for (std::size_t y = x + 1; y < k; ++y) {
                        const NodeId a = ws.nbr_list[x], b = ws.nbr_list[y];
                        if (node_kind) {
                            auto nb = g_.neighbors(a);
                            if (std::binary_search(nb.begin(), nb.end(), b)) ++links;
                        } else {
                            for (const Arc& arc : g_.arcs(a)) {
                                if (arc.to == b && edge_alive(arc.edge)) {
                                    ++links;
                                    break;
                                }
                            }
                        }
                    }
                }
                const double kk = static_cast<double>(k);
                c_sum += 2.0 * static_cast<double>(links) / (kk * (kk - 1.0));
            }
            const double c1 = n_alive > 0 ? c_sum / static_cast<double>(n_alive) : 0.0;
            rec.clustering_drop = (baseline_.c0 - c1) / baseline_.c0;
        }
        return rec;
    }

    // One record per possible single victim, in element order.
    std::vector<RunRecord> run_exhaustive_single(RemovalKind kind) const {
        const std::size_t total =
            kind == RemovalKind::node ? g_.node_count() : g_.edge_count();
        Workspace ws(g_);
        std::vector<RunRecord> out;
        out.reserve(total);
        for (std::uint32_t v = 0; v < total; ++v) {
            const std::uint32_t victims[1] = {v};
            out.push_back(run_in_workspace(ws, kind, victims));
        }
        return out;
    }

private:
    const GridGraph& g_;
    Baseline baseline_;
};

// Full Monte Carlo output for one scenario.
struct ScenarioResult {
    RemovalScenario scenario;
    Baseline baseline;
    std::uint32_t removal_size = 0;
    bool clustering_defined = true;
    std::vector<RunRecord> records;
    std::map<PerfMetric, Histogram> histograms;
    std::map<PerfMetric, SampleSummary> summaries;
};

inline std::vector<double> metric_values(const std::vector<RunRecord>& records, PerfMetric m) {
    std::vector<double> out;
    out.reserve(records.size());
    for (const RunRecord& r : records) {
        switch (m) {
            case PerfMetric::edges_lost_share: out.push_back(r.edges_lost_share); break;
            case PerfMetric::lcc_size: out.push_back(static_cast<double>(r.lcc_size)); break;
            case PerfMetric::eff_drop: out.push_back(r.eff_drop); break;
            case PerfMetric::clustering_drop:
                if (!r.clustering_drop)
                    throw ValidationError("clustering change is undefined for this network "
                                          "(baseline clustering is zero)");
                out.push_back(*r.clustering_drop);
                break;
        }
    }
    return out;
}

inline Histogram aggregate_pdf(const std::vector<RunRecord>& records, PerfMetric metric,
                               std::size_t bins = 100) {
    return bin_samples(metric_values(records, metric), bins);
}

// Runs a scenario: victims for run r are drawn from the sub-seed
// mix(master_seed, scenario_stream, r), so the record list is bit-identical
// for a fixed master seed no matter how many workers execute it.
inline ScenarioResult run_scenario(const GridGraph& g, const RemovalScenario& scenario,
                                   unsigned workers = 1) {
    if (scenario.runs < 1)
        throw ValidationError("scenario needs at least one run");
    if (g.node_count() < 2)
        throw ValidationError("percolation needs at least two nodes");
    if (connected_components(g).size() != 1)
        throw ValidationError("percolation input must be a connected graph");

    PercolationEngine engine(g, workers);
    const std::uint64_t total = scenario.kind == RemovalKind::node
                                    ? g.node_count()
                                    : g.edge_count();
    const std::uint32_t m = removal_count(total, scenario.fraction);
    if (m >= total)
        throw ValidationError("scenario would remove every element");

    ScenarioResult result;
    result.scenario = scenario;
    result.baseline = engine.baseline();
    result.removal_size = m;
    result.clustering_defined = engine.baseline().c0 > 0.0;
    result.records.resize(scenario.runs);

    unsigned nthreads = workers <= 1 ? 1 : workers;
    if (nthreads > scenario.runs) nthreads = scenario.runs;
    auto body = [&](unsigned t) {
        PercolationEngine::Workspace ws(g);
        SplitMix64 rng(0);
        for (std::uint32_t r = t; r < scenario.runs; r += nthreads) {
            rng = SplitMix64(mix_seed(scenario.master_seed, scenario.stream_id(), r));
            auto victims = sample_without_replacement(static_cast<std::uint32_t>(total), m, rng);
            result.records[r] = engine.run_in_workspace(ws, scenario.kind, victims);
        }
    };
    if (nthreads == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(body, t);
        for (auto& th : pool) th.join();
    }

    for (PerfMetric m4 : kPerfMetrics) {
        if (m4 == PerfMetric::clustering_drop && !result.clustering_defined) continue;
        result.histograms[m4] = aggregate_pdf(result.records, m4);
        result.summaries[m4] = summarize_samples(metric_values(result.records, m4));
    }
    return result;
}

} // namespace hvgrid

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"
#include "hvgrid/parallel.hpp"

namespace hvgrid {

// Value plus a degeneracy marker for metrics that fall back to a sentinel
// instead of failing (sigma with zero clustering, lattice reference on
// near-tree graphs).
struct FlaggedValue {
    double value = 0.0;
    bool degenerate = false;
};

// Hop-distance census over unordered reachable pairs.
struct DistanceDistribution {
    std::map<std::uint32_t, std::uint64_t> counts; // distance -> unordered pair count
    std::map<std::uint32_t, double> pdf;           // normalized over reachable pairs
};

struct DistanceStats {
    DistanceDistribution distribution;
    std::uint32_t diameter = 0;
    double avg_path_length = 0.0;
};

enum class VoltageBand { kv110_150, kv220_275, kv330_400, other };

inline const char* voltage_band_label(VoltageBand b) {
    switch (b) {
        case VoltageBand::kv110_150: return "110-150";
        case VoltageBand::kv220_275: return "220-275";
        case VoltageBand::kv330_400: return "330-400";
        default: return "other";
    }
}

inline VoltageBand voltage_band_of(double kv) {
    if (kv >= 110.0 && kv <= 150.0) return VoltageBand::kv110_150;
    if (kv >= 220.0 && kv <= 275.0) return VoltageBand::kv220_275;
    if (kv >= 330.0 && kv <= 400.0) return VoltageBand::kv330_400;
    return VoltageBand::other;
}

// Ratio of existing edges to the maximum possible count; parallel circuits
// all count.
inline double density(const GridGraph& g) {
    const double n = static_cast<double>(g.node_count());
    if (g.node_count() < 2)
        throw UndefinedMetricError("density needs at least two nodes");
    return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
}

inline double mean_degree(const GridGraph& g) {
    if (g.node_count() == 0)
        throw UndefinedMetricError("mean degree of an empty graph");
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

// hist[d] = number of ordered reachable pairs (i, j), i != j, at hop
// distance d. Distances run on the simple projection; parallel circuits do
// not change them. Counts are integers, so the result is bit-identical for
// any worker count.
inline std::vector<std::uint64_t> ordered_distance_histogram(const GridGraph& g,
                                                             unsigned workers = 1) {
    const std::size_t n = g.node_count();
    if (n == 0) return {};

    unsigned nthreads = workers <= 1 ? 1 : workers;
    if (static_cast<std::size_t>(nthreads) > n) nthreads = static_cast<unsigned>(n);

    std::vector<std::vector<std::uint64_t>> partial(nthreads);
    auto sweep = [&](unsigned t) {
        std::vector<std::uint32_t> dist(n, 0);
        std::vector<std::uint32_t> seen(n, 0);
        std::vector<NodeId> queue(n);
        std::uint32_t tag = 0;
        auto& hist = partial[t];
        hist.assign(n, 0);

        for (std::size_t s = t; s < n; s += nthreads) {
            ++tag;
            std::size_t head = 0, tail = 0;
            queue[tail++] = static_cast<NodeId>(s);
            seen[s] = tag;
            dist[s] = 0;
            while (head < tail) {
                NodeId u = queue[head++];
                const std::uint32_t du = dist[u];
                for (NodeId v : g.neighbors(u)) {
                    if (seen[v] != tag) {
                        seen[v] = tag;
                        dist[v] = du + 1;
                        hist[du + 1]++;
                        queue[tail++] = v;
                    }
                }
            }
        }
    };

    if (nthreads == 1) {
        sweep(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(sweep, t);
        for (auto& th : pool) th.join();
    }

    std::vector<std::uint64_t> hist(n, 0);
    for (const auto& p : partial)
        for (std::size_t d = 0; d < p.size(); ++d) hist[d] += p[d];
    while (!hist.empty() && hist.back() == 0) hist.pop_back();
    return hist;
}

inline DistanceStats distance_stats_from_histogram(const std::vector<std::uint64_t>& hist) {
    DistanceStats out;
    std::uint64_t pairs = 0;
    std::uint64_t hop_sum = 0;
    for (std::uint32_t d = 1; d < hist.size(); ++d) {
        if (hist[d] == 0) continue;
        out.distribution.counts[d] = hist[d] / 2;
        pairs += hist[d];
        hop_sum += hist[d] * d;
        out.diameter = d;
    }
    if (pairs > 0) {
        out.avg_path_length = static_cast<double>(hop_sum) / static_cast<double>(pairs);
        for (const auto& [d, c] : out.distribution.counts)
            out.distribution.pdf[d] =
                static_cast<double>(c) / (static_cast<double>(pairs) / 2.0);
    }
    return out;
}

// BFS from every node; L averages hop distance over reachable pairs and the
// diameter is the largest finite distance.
inline DistanceStats distance_stats(const GridGraph& g, unsigned workers = 1) {
    if (g.node_count() < 2)
        throw UndefinedMetricError("path statistics need at least two nodes");
    return distance_stats_from_histogram(ordered_distance_histogram(g, workers));
}

inline double efficiency_from_histogram(const std::vector<std::uint64_t>& hist, std::size_t n) {
    double sum = 0.0;
    for (std::uint32_t d = 1; d < hist.size(); ++d)
        if (hist[d] != 0) sum += static_cast<double>(hist[d]) / static_cast<double>(d);
    const double nn = static_cast<double>(n);
    return sum / (nn * (nn - 1.0));
}

// Global efficiency: mean inverse hop distance over ordered pairs, with
// unreachable pairs contributing zero.
inline double efficiency(const GridGraph& g, unsigned workers = 1) {
    if (g.node_count() < 2)
        throw UndefinedMetricError("efficiency needs at least two nodes");
    return efficiency_from_histogram(ordered_distance_histogram(g, workers), g.node_count());
}

// Local clustering of one node on the simple projection; nodes with fewer
// than two distinct neighbors score zero.
inline double local_clustering(const GridGraph& g, NodeId u) {
    auto nbrs = g.neighbors(u);
    const std::size_t k = nbrs.size();
    if (k < 2) return 0.0;
    std::uint64_t links2 = 0; // 2 * edges among neighbors
    for (NodeId v : nbrs) {
        auto vn = g.neighbors(v);
        // two-pointer intersection |N(u) and N(v)|
        std::size_t i = 0, j = 0;
        while (i < nbrs.size() && j < vn.size()) {
            if (nbrs[i] < vn[j]) ++i;
            else if (nbrs[i] > vn[j]) ++j;
            else { ++links2; ++i; ++j; }
        }
    }
    const double kk = static_cast<double>(k);
    return static_cast<double>(links2) / (kk * (kk - 1.0));
}

// Average clustering coefficient; parallel circuits never create extra
// triangles because counting happens on the simple projection.
inline double clustering(const GridGraph& g) {
    const std::size_t n = g.node_count();
    if (n == 0)
        throw UndefinedMetricError("clustering of an empty graph");
    double sum = 0.0;
    for (NodeId u = 0; u < n; ++u) sum += local_clustering(g, u);
    return sum / static_cast<double>(n);
}

// Erdos-Renyi reference values used by the small-world coefficients.
inline double random_reference_clustering(std::size_t n, double k) {
    return k / static_cast<double>(n);
}

inline double random_reference_path_length(std::size_t n, double k) {
    if (k <= 1.0)
        throw UndefinedMetricError("random path-length reference needs mean degree > 1");
    return (std::log(static_cast<double>(n)) - 0.5772) / std::log(k) + 0.5;
}

// Small-world coefficient sigma = (C/C_r)/(L/L_r). Zero clustering returns a
// degenerate zero instead of dividing.
inline FlaggedValue sigma(const GridGraph& g, unsigned workers = 1) {
    const double k = mean_degree(g);
    if (k <= 1.0)
        throw UndefinedMetricError("sigma needs mean degree > 1");
    const double c = clustering(g);
    if (c == 0.0) return {0.0, true};
    const double l = distance_stats(g, workers).avg_path_length;
    const double cr = random_reference_clustering(g.node_count(), k);
    const double lr = random_reference_path_length(g.node_count(), k);
    return {(c / cr) / (l / lr), false};
}

inline double omega_from_parts(std::size_t n, double k, double avg_path_length,
                               double clustering_value, double lattice_clustering_ref) {
    if (!(lattice_clustering_ref > 0.0))
        throw UndefinedMetricError("omega needs a positive lattice clustering reference");
    if (!(avg_path_length > 0.0))
        throw UndefinedMetricError("omega needs at least one reachable pair");
    return random_reference_path_length(n, k) / avg_path_length -
           clustering_value / lattice_clustering_ref;
}

// Small-world coefficient omega = L_r/L - C/C_lattice against a supplied
// lattice clustering reference.
inline double omega(const GridGraph& g, double lattice_clustering_ref, unsigned workers = 1) {
    return omega_from_parts(g.node_count(), mean_degree(g),
                            distance_stats(g, workers).avg_path_length, clustering(g),
                            lattice_clustering_ref);
}

// Fraction of circuits per voltage band. Bands are the closed ranges
// [110,150], [220,275], [330,400] kV; anything else lands in `other`.
inline std::map<VoltageBand, double> voltage_shares(const GridGraph& g) {
    if (g.edge_count() == 0)
        throw UndefinedMetricError("voltage shares of an edgeless graph");
    std::map<VoltageBand, double> shares{{VoltageBand::kv110_150, 0.0},
                                         {VoltageBand::kv220_275, 0.0},
                                         {VoltageBand::kv330_400, 0.0},
                                         {VoltageBand::other, 0.0}};
    for (const Edge& e : g.edges()) shares[voltage_band_of(e.voltage_kv)] += 1.0;
    for (auto& [band, count] : shares) count /= static_cast<double>(g.edge_count());
    return shares;
}

// Full per-network metric row.
struct MetricsReport {
    std::uint64_t n_nodes = 0;
    std::uint64_t n_edges = 0;
    double density = 0.0;
    double mean_degree = 0.0;
    std::uint32_t diameter = 0;
    double avg_path_length = 0.0;
    double clustering = 0.0;
    double modularity = 0.0;
    double sigma = 0.0;
    bool sigma_degenerate = false;
    double omega = 0.0;
    bool omega_degenerate = false;
    double efficiency = 0.0;
    double lattice_clustering = 0.0;
    std::map<VoltageBand, double> voltage_shares;
};

} // namespace hvgrid

#pragma once

// Deterministic generator of grid-like test networks: a meshed transmission
// backbone (220/400 kV) with sub-transmission trees and local meshing
// (110-150 kV) attached, optional parallel circuits, guaranteed connected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "hvgrid/grid_graph.hpp"
#include "hvgrid/rng.hpp"

namespace testsupport {

using hvgrid::GridGraph;
using hvgrid::NamedEdge;

namespace synth_detail {

struct Point {
    double x, y;
};

inline double dist2(const Point& a, const Point& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct Builder {
    std::string prefix;
    hvgrid::SplitMix64 rng;
    std::vector<Point> points;
    std::vector<std::vector<std::size_t>> adj;
    std::vector<NamedEdge> edges;
    int next_circuit = 0;

    explicit Builder(const std::string& pfx, std::uint64_t seed) : prefix(pfx), rng(seed) {}

    std::string name(std::size_t i) const {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%s%04zu", prefix.c_str(), i);
        return buf;
    }

    std::size_t add_point() {
        points.push_back({rng.uniform01(), rng.uniform01()});
        adj.emplace_back();
        return points.size() - 1;
    }

    bool adjacent(std::size_t a, std::size_t b) const {
        for (std::size_t v : adj[a])
            if (v == b) return true;
        return false;
    }

    void connect(std::size_t a, std::size_t b, double voltage) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        edges.push_back({name(a), name(b), voltage, prefix + "c" + std::to_string(++next_circuit)});
    }

    // Attachment target: near nodes preferred, existing hubs favored. The
    // hub bias keeps the degree distribution leaf-heavy and decaying, like
    // real grids.
    std::size_t attachment_target(std::size_t i) {
        std::size_t best = 0;
        double best_d = 1e18;
        for (std::size_t j = 0; j < i; ++j) {
            const double w = 0.5 + rng.uniform01();
            const double d =
                dist2(points[i], points[j]) * w / (1.0 + static_cast<double>(adj[j].size()));
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        return best;
    }

    std::vector<std::size_t> nearest(std::size_t i, std::size_t count) const {
        std::vector<std::pair<double, std::size_t>> ranked;
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) ranked.emplace_back(dist2(points[i], points[j]), j);
        std::sort(ranked.begin(), ranked.end());
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < ranked.size() && k < count; ++k) out.push_back(ranked[k].second);
        return out;
    }
};

} // namespace synth_detail

// One grid-like network with `n_nodes` substations. Produces a connected
// multigraph whose degree distribution decays roughly exponentially across
// every canonical variant.
inline std::vector<NamedEdge> synthetic_grid_edges(std::uint64_t seed, std::size_t n_nodes,
                                                   const std::string& prefix = "n") {
    using namespace synth_detail;
    Builder b(prefix, seed);

    const std::size_t n_tx = std::max<std::size_t>(14, n_nodes / 6);
    const std::size_t n_sub = n_nodes > n_tx ? n_nodes - n_tx : 0;

    // Transmission backbone: spatial tree plus local meshing.
    for (std::size_t i = 0; i < n_tx; ++i) {
        b.add_point();
        if (i == 0) continue;
        const std::size_t target = b.attachment_target(i);
        b.connect(i, target, b.rng.uniform01() < 0.3 ? 400.0 : 220.0);
    }
    const std::size_t tx_mesh = n_tx / 3;
    for (std::size_t m = 0; m < tx_mesh; ++m) {
        const auto u = static_cast<std::size_t>(b.rng.bounded(n_tx));
        for (std::size_t v : b.nearest(u, 4)) {
            if (v < n_tx && !b.adjacent(u, v)) {
                b.connect(u, v, b.rng.uniform01() < 0.3 ? 400.0 : 220.0);
                break;
            }
        }
    }

    // Sub-transmission layer: trees hanging off anything built so far.
    for (std::size_t s = 0; s < n_sub; ++s) {
        const std::size_t i = b.add_point();
        const std::size_t target = b.attachment_target(i);
        const double voltage = b.rng.uniform01() < 0.75 ? 110.0
                               : b.rng.uniform01() < 0.5 ? 132.0
                                                         : 150.0;
        b.connect(i, target, voltage);
    }

    // Local meshing and triangle closers in the sub-transmission layer.
    const std::size_t n_all = b.points.size();
    const std::size_t mesh = n_all / 4;
    for (std::size_t m = 0; m < mesh; ++m) {
        const auto u = static_cast<std::size_t>(b.rng.bounded(n_all));
        for (std::size_t v : b.nearest(u, 5)) {
            if (!b.adjacent(u, v)) {
                b.connect(u, v, 110.0);
                break;
            }
        }
    }
    const std::size_t closers = std::max<std::size_t>(3, n_all / 12);
    for (std::size_t t = 0; t < closers; ++t) {
        const auto w = static_cast<std::size_t>(b.rng.bounded(n_all));
        if (b.adj[w].size() < 2) continue;
        const std::size_t u = b.adj[w][b.rng.bounded(b.adj[w].size())];
        const std::size_t v = b.adj[w][b.rng.bounded(b.adj[w].size())];
        if (u != v && !b.adjacent(u, v)) b.connect(u, v, 110.0);
    }

    // A few parallel circuits on existing corridors.
    const std::size_t n_parallel = std::max<std::size_t>(2, b.edges.size() / 18);
    const std::size_t base_edges = b.edges.size();
    for (std::size_t p = 0; p < n_parallel; ++p) {
        const NamedEdge& e = b.edges[b.rng.bounded(base_edges)];
        b.edges.push_back(
            {e.a, e.b, e.voltage_kv, b.prefix + "c" + std::to_string(++b.next_circuit)});
    }
    return b.edges;
}

inline GridGraph synthetic_grid(std::uint64_t seed, std::size_t n_nodes,
                                const std::string& prefix = "n") {
    return GridGraph::build(synthetic_grid_edges(seed, n_nodes, prefix));
}

// Two synthetic grids joined by a single 400 kV tie line: the archetype of a
// network with a bimodal distance distribution and multi-peaked removal
// response.
inline GridGraph two_cluster_grid(std::uint64_t seed, std::size_t n_per_side) {
    auto east = synthetic_grid_edges(hvgrid::mix_seed(seed, 1, 0), n_per_side, "e");
    auto west = synthetic_grid_edges(hvgrid::mix_seed(seed, 2, 0), n_per_side, "w");
    std::vector<NamedEdge> edges = east;
    edges.insert(edges.end(), west.begin(), west.end());
    edges.push_back({"e0000", "w0000", 400.0, "tie1"});
    return GridGraph::build(edges);
}

} // namespace testsupport

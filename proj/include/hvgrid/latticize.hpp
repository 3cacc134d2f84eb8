#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"
#include "hvgrid/metrics.hpp"
#include "hvgrid/rng.hpp"

namespace hvgrid {

namespace detail {

// Mutable simple graph used by the latticization search.
struct SwapGraph {
    std::vector<std::vector<NodeId>> adj; // sorted neighbor lists
    std::vector<std::pair<NodeId, NodeId>> edges;

    bool adjacent(NodeId u, NodeId v) const {
        const auto& n = adj[u];
        return std::binary_search(n.begin(), n.end(), v);
    }
    void insert(NodeId u, NodeId v) {
        auto& n = adj[u];
        n.insert(std::lower_bound(n.begin(), n.end(), v), v);
    }
    void erase(NodeId u, NodeId v) {
        auto& n = adj[u];
        n.erase(std::lower_bound(n.begin(), n.end(), v));
    }
    void add_edge(NodeId u, NodeId v) {
        insert(u, v);
        insert(v, u);
    }
    void remove_edge(NodeId u, NodeId v) {
        erase(u, v);
        erase(v, u);
    }

    double local_clustering(NodeId u) const {
        const auto& n = adj[u];
        const std::size_t k = n.size();
        if (k < 2) return 0.0;
        std::uint64_t links2 = 0;
        for (NodeId v : n) {
            const auto& vn = adj[v];
            std::size_t i = 0, j = 0;
            while (i < n.size() && j < vn.size()) {
                if (n[i] < vn[j]) ++i;
                else if (n[i] > vn[j]) ++j;
                else { ++links2; ++i; ++j; }
            }
        }
        const double kk = static_cast<double>(k);
        return static_cast<double>(links2) / (kk * (kk - 1.0));
    }
};

} // namespace detail

inline constexpr std::uint64_t kLatticizationSeed = 0x6C61747469636531ull;
inline constexpr int kLatticizationSweeps = 20;

// Clustering coefficient of a latticized surrogate: seeded degree-preserving
// double-edge swaps, accepted only when they strictly increase the average
// clustering, 20 sweeps or until a full sweep finds no improving swap. The
// result is deterministic and never below the graph's own clustering.
inline FlaggedValue lattice_reference(const GridGraph& g) {
    if (g.node_count() < 3)
        throw UndefinedMetricError("lattice reference needs at least three nodes");
    if (mean_degree(g) < 2.0) return {0.0, true};

    const std::size_t n = g.node_count();
    detail::SwapGraph sg;
    sg.adj.resize(n);
    for (NodeId u = 0; u < n; ++u) {
        auto nbrs = g.neighbors(u);
        sg.adj[u].assign(nbrs.begin(), nbrs.end());
        for (NodeId v : nbrs)
            if (u < v) sg.edges.emplace_back(u, v);
    }

    std::vector<double> local(n);
    double c_sum = 0.0;
    for (NodeId u = 0; u < n; ++u) {
        local[u] = sg.local_clustering(u);
        c_sum += local[u];
    }

    const std::size_t n_edges = sg.edges.size();
    if (n_edges < 2) return {c_sum / static_cast<double>(n), false};

    SplitMix64 rng(kLatticizationSeed);
    std::vector<NodeId> affected;

    // Recomputes local clustering over `affected` and returns the change.
    auto recompute = [&](double sign) {
        double delta = 0.0;
        for (NodeId x : affected) {
            const double fresh = sg.local_clustering(x);
            delta += fresh - local[x];
            if (sign > 0.0) local[x] = fresh;
        }
        return delta;
    };

    auto gather_affected = [&](NodeId a, NodeId b, NodeId c, NodeId d) {
        affected.clear();
        affected.insert(affected.end(), {a, b, c, d});
        for (NodeId x : {a, b, c, d})
            affected.insert(affected.end(), sg.adj[x].begin(), sg.adj[x].end());
        std::sort(affected.begin(), affected.end());
        affected.erase(std::unique(affected.begin(), affected.end()), affected.end());
    };

    for (int sweep = 0; sweep < kLatticizationSweeps; ++sweep) {
        std::size_t accepted = 0;
        for (std::size_t attempt = 0; attempt < n_edges; ++attempt) {
            const auto i1 = static_cast<std::size_t>(rng.bounded(n_edges));
            const auto i2 = static_cast<std::size_t>(rng.bounded(n_edges));
            auto [a, b] = sg.edges[i1];
            auto [c, d] = sg.edges[i2];
            if (a == c || a == d || b == c || b == d) continue;

            // Two degree-preserving rewirings of the pair.
            const std::pair<NodeId, NodeId> variants[2][2] = {
                {{a, d}, {c, b}},
                {{a, c}, {b, d}},
            };

            int best_variant = -1;
            double best_delta = 1e-15;
            for (int v = 0; v < 2; ++v) {
                const auto [e1u, e1v] = variants[v][0];
                const auto [e2u, e2v] = variants[v][1];
                if (sg.adjacent(e1u, e1v) || sg.adjacent(e2u, e2v)) continue;

                gather_affected(a, b, c, d);
                sg.remove_edge(a, b);
                sg.remove_edge(c, d);
                sg.add_edge(e1u, e1v);
                sg.add_edge(e2u, e2v);
                const double delta = recompute(-1.0);
                sg.remove_edge(e1u, e1v);
                sg.remove_edge(e2u, e2v);
                sg.add_edge(a, b);
                sg.add_edge(c, d);
                if (delta > best_delta) {
                    best_delta = delta;
                    best_variant = v;
                }
            }

            if (best_variant >= 0) {
                const auto [e1u, e1v] = variants[best_variant][0];
                const auto [e2u, e2v] = variants[best_variant][1];
                gather_affected(a, b, c, d);
                sg.remove_edge(a, b);
                sg.remove_edge(c, d);
                sg.add_edge(e1u, e1v);
                sg.add_edge(e2u, e2v);
                c_sum += recompute(+1.0);
                sg.edges[i1] = {std::min(e1u, e1v), std::max(e1u, e1v)};
                sg.edges[i2] = {std::min(e2u, e2v), std::max(e2u, e2v)};
                ++accepted;
            }
        }
        if (accepted == 0) break;
    }

    return {c_sum / static_cast<double>(n), false};
}

} // namespace hvgrid

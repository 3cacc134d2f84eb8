#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"

namespace hvgrid {

// Newman modularity of a given node-to-community assignment, evaluated on
// the multigraph (parallel circuits weigh, self-loops count twice in both
// the adjacency and the degree, so the single-community value is exactly 0).
// Resolution is fixed at 1.
inline double modularity_value(const GridGraph& g, std::span<const std::uint32_t> community) {
    if (g.edge_count() == 0)
        throw UndefinedMetricError("modularity of an edgeless graph");
    if (community.size() != g.node_count())
        throw ValidationError("community assignment size mismatch");

    std::uint32_t ncomm = 0;
    for (auto c : community) ncomm = std::max(ncomm, c + 1);

    std::vector<std::uint64_t> internal2(ncomm, 0); // sum of A_ij inside community
    std::vector<std::uint64_t> total(ncomm, 0);     // sum of degrees
    for (const Edge& e : g.edges()) {
        if (community[e.a] == community[e.b]) internal2[community[e.a]] += 2;
        total[community[e.a]] += 1;
        total[community[e.b]] += 1;
    }

    const double m2 = 2.0 * static_cast<double>(g.edge_count());
    double q = 0.0;
    for (std::uint32_t c = 0; c < ncomm; ++c) {
        const double frac_in = static_cast<double>(internal2[c]) / m2;
        const double frac_tot = static_cast<double>(total[c]) / m2;
        q += frac_in - frac_tot * frac_tot;
    }
    return q;
}

struct ModularityResult {
    double q = 0.0;
    std::vector<std::uint32_t> community; // per original node, labels 0..k-1
};

namespace detail {

// Weighted graph used between aggregation levels.
struct LevelGraph {
    std::size_t n = 0;
    std::vector<std::uint32_t> offset;   // CSR offsets, size n+1
    std::vector<std::uint32_t> adj;      // neighbor ids (no self entries)
    std::vector<double> weight;          // matching edge weights
    std::vector<double> loop;            // self-loop weight per node
    std::vector<double> degree;          // weighted degree incl. 2*loop
    double total_weight = 0.0;           // m = sum of all edge weights
};

inline LevelGraph level_from_grid(const GridGraph& g) {
    LevelGraph lg;
    lg.n = g.node_count();
    lg.loop.assign(lg.n, 0.0);
    lg.degree.assign(lg.n, 0.0);

    // Collapse parallel circuits into integer weights.
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> flat;
    flat.reserve(g.edge_count());
    for (const Edge& e : g.edges()) {
        if (e.a == e.b) {
            lg.loop[e.a] += 1.0;
        } else {
            flat.emplace_back(e.a, e.b, 1.0);
        }
    }
    std::sort(flat.begin(), flat.end());
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> merged;
    for (auto& [a, b, w] : flat) {
        if (!merged.empty() && std::get<0>(merged.back()) == a && std::get<1>(merged.back()) == b)
            std::get<2>(merged.back()) += w;
        else
            merged.emplace_back(a, b, w);
    }

    lg.offset.assign(lg.n + 1, 0);
    for (auto& [a, b, w] : merged) {
        lg.offset[a + 1]++;
        lg.offset[b + 1]++;
    }
    for (std::size_t u = 0; u < lg.n; ++u) lg.offset[u + 1] += lg.offset[u];
    lg.adj.resize(lg.offset[lg.n]);
    lg.weight.resize(lg.offset[lg.n]);
    std::vector<std::uint32_t> cur(lg.offset.begin(), lg.offset.end() - 1);
    for (auto& [a, b, w] : merged) {
        lg.adj[cur[a]] = b;
        lg.weight[cur[a]++] = w;
        lg.adj[cur[b]] = a;
        lg.weight[cur[b]++] = w;
    }

    lg.total_weight = 0.0;
    for (std::size_t u = 0; u < lg.n; ++u) {
        double d = 2.0 * lg.loop[u];
        for (std::uint32_t i = lg.offset[u]; i < lg.offset[u + 1]; ++i) d += lg.weight[i];
        lg.degree[u] = d;
        lg.total_weight += d;
    }
    lg.total_weight /= 2.0;
    return lg;
}

// One Louvain local-move phase, fully deterministic: nodes are visited in
// index order and ties go to the smallest community id. Returns true if any
// node moved.
inline bool local_moves(const LevelGraph& lg, std::vector<std::uint32_t>& community) {
    const std::size_t n = lg.n;
    const double m = lg.total_weight;
    std::vector<double> sigma_tot(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) sigma_tot[community[u]] += lg.degree[u];

    std::vector<double> comm_weight(n, 0.0);
    std::vector<std::uint32_t> touched;
    touched.reserve(64);

    bool any_move = false;
    bool improved = true;
    int sweeps = 0;
    while (improved && sweeps < 100) {
        improved = false;
        ++sweeps;
        for (std::size_t u = 0; u < n; ++u) {
            const std::uint32_t old_c = community[u];

            touched.clear();
            for (std::uint32_t i = lg.offset[u]; i < lg.offset[u + 1]; ++i) {
                const std::uint32_t c = community[lg.adj[i]];
                if (comm_weight[c] == 0.0) touched.push_back(c);
                comm_weight[c] += lg.weight[i];
            }
            if (comm_weight[old_c] == 0.0) touched.push_back(old_c);

            sigma_tot[old_c] -= lg.degree[u];

            // Gain of joining community c (u currently detached):
            //   w(u,c)/m - k_u * sigma_tot(c) / (2 m^2)
            const double ku = lg.degree[u];
            std::uint32_t best_c = old_c;
            double best_gain =
                comm_weight[old_c] / m - ku * sigma_tot[old_c] / (2.0 * m * m);
            std::sort(touched.begin(), touched.end());
            for (std::uint32_t c : touched) {
                const double gain = comm_weight[c] / m - ku * sigma_tot[c] / (2.0 * m * m);
                if (gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_c = c;
                }
            }

            sigma_tot[best_c] += lg.degree[u];
            community[u] = best_c;
            if (best_c != old_c) {
                improved = true;
                any_move = true;
            }
            for (std::uint32_t c : touched) comm_weight[c] = 0.0;
        }
    }
    return any_move;
}

// Renumbers labels to 0..k-1 in order of smallest member index.
inline std::uint32_t compact_labels(std::vector<std::uint32_t>& community) {
    std::vector<std::uint32_t> remap(community.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& c : community) {
        if (remap[c] == UINT32_MAX) remap[c] = next++;
        c = remap[c];
    }
    return next;
}

inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& community,
                            std::uint32_t ncomm) {
    LevelGraph out;
    out.n = ncomm;
    out.loop.assign(ncomm, 0.0);

    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> flat;
    for (std::size_t u = 0; u < lg.n; ++u) {
        out.loop[community[u]] += lg.loop[u];
        for (std::uint32_t i = lg.offset[u]; i < lg.offset[u + 1]; ++i) {
            const std::uint32_t v = lg.adj[i];
            if (v < u) continue; // each undirected edge once
            const std::uint32_t ca = community[u], cb = community[v];
            if (ca == cb)
                out.loop[ca] += lg.weight[i];
            else
                flat.emplace_back(std::min(ca, cb), std::max(ca, cb), lg.weight[i]);
        }
    }
    std::sort(flat.begin(), flat.end());
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> merged;
    for (auto& [a, b, w] : flat) {
        if (!merged.empty() && std::get<0>(merged.back()) == a && std::get<1>(merged.back()) == b)
            std::get<2>(merged.back()) += w;
        else
            merged.emplace_back(a, b, w);
    }

    out.offset.assign(ncomm + 1, 0);
    for (auto& [a, b, w] : merged) {
        out.offset[a + 1]++;
        out.offset[b + 1]++;
    }
    for (std::size_t u = 0; u < ncomm; ++u) out.offset[u + 1] += out.offset[u];
    out.adj.resize(out.offset[ncomm]);
    out.weight.resize(out.offset[ncomm]);
    std::vector<std::uint32_t> cur(out.offset.begin(), out.offset.end() - 1);
    for (auto& [a, b, w] : merged) {
        out.adj[cur[a]] = b;
        out.weight[cur[a]++] = w;
        out.adj[cur[b]] = a;
        out.weight[cur[b]++] = w;
    }

    out.degree.assign(ncomm, 0.0);
    out.total_weight = 0.0;
    for (std::size_t u = 0; u < ncomm; ++u) {
        double d = 2.0 * out.loop[u];
        for (std::uint32_t i = out.offset[u]; i < out.offset[u + 1]; ++i) d += out.weight[i];
        out.degree[u] = d;
        out.total_weight += d;
    }
    out.total_weight /= 2.0;
    return out;
}

} // namespace detail

// Greedy agglomerative modularity maximization (Louvain scheme) with
// deterministic node ordering. Falls back to the single-community partition
// whenever that scores at least as well, so the result is never negative.
inline ModularityResult modularity(const GridGraph& g) {
    if (g.edge_count() == 0)
        throw UndefinedMetricError("modularity of an edgeless graph");

    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> assignment(n);
    for (std::size_t u = 0; u < n; ++u) assignment[u] = static_cast<std::uint32_t>(u);

    detail::LevelGraph lg = detail::level_from_grid(g);
    std::vector<std::uint32_t> level_comm(lg.n);
    for (;;) {
        for (std::size_t u = 0; u < lg.n; ++u) level_comm[u] = static_cast<std::uint32_t>(u);
        const bool moved = detail::local_moves(lg, level_comm);
        if (!moved) break;
        const std::uint32_t ncomm = detail::compact_labels(level_comm);
        for (auto& c : assignment) c = level_comm[c];
        if (ncomm == lg.n) break;
        lg = detail::aggregate(lg, level_comm, ncomm);
        level_comm.assign(lg.n, 0);
    }

    detail::compact_labels(assignment);
    ModularityResult result{modularity_value(g, assignment), std::move(assignment)};
    if (result.q < 0.0) {
        std::fill(result.community.begin(), result.community.end(), 0u);
        result.q = 0.0;
    }
    return result;
}

} // namespace hvgrid

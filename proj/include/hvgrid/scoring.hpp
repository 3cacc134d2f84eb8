#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/percolation.hpp"
#include "hvgrid/rng.hpp"

namespace hvgrid {

enum class Orientation { higher_better, lower_better };

// Orientation of each performance metric: after correction, larger
// standardized values always mean better behavior.
inline Orientation metric_orientation(PerfMetric m) {
    return m == PerfMetric::lcc_size ? Orientation::higher_better : Orientation::lower_better;
}

// z-scores across networks with sample (n-1) deviation; lower-is-better
// columns are negated. A zero-variance column standardizes to all zeros.
inline std::map<std::string, double> standardize(const std::map<std::string, double>& values,
                                                 Orientation orientation) {
    if (values.size() < 2)
        throw ValidationError("standardization needs at least two networks");
    double mean = 0.0;
    for (const auto& [name, v] : values) {
        if (!std::isfinite(v))
            throw ValidationError("non-finite value for network '" + name + "'");
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (const auto& [name, v] : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));

    std::map<std::string, double> out;
    const double sign = orientation == Orientation::lower_better ? -1.0 : 1.0;
    for (const auto& [name, v] : values)
        out[name] = sd > 0.0 ? sign * (v - mean) / sd : 0.0;
    return out;
}

// Identifies one removal scenario inside a performance table.
struct ScenarioKey {
    RemovalKind kind = RemovalKind::node;
    double fraction = 0.0;

    bool operator<(const ScenarioKey& o) const {
        if (kind != o.kind) return kind < o.kind;
        return fraction < o.fraction;
    }
    bool operator==(const ScenarioKey& o) const {
        return kind == o.kind && fraction == o.fraction;
    }
    std::string label() const { return RemovalScenario{kind, fraction}.label(); }
};

inline std::vector<ScenarioKey> canonical_scenarios() {
    std::vector<ScenarioKey> keys;
    for (RemovalKind kind : {RemovalKind::node, RemovalKind::edge})
        for (double f : kCanonicalFractions) keys.push_back({kind, f});
    return keys;
}

// Raw cell values: one number per network, scenario and metric (the mean of
// the scenario's run records). A disengaged optional marks a network whose
// baseline clustering is zero, which keeps that cell out of standardization.
using RawCells = std::array<std::optional<double>, 4>;
using RawPerformance = std::map<std::string, std::map<ScenarioKey, RawCells>>;

enum class PerfGroup { I, II, III };

inline const char* perf_group_label(PerfGroup g) {
    switch (g) {
        case PerfGroup::I: return "I";
        case PerfGroup::II: return "II";
        default: return "III";
    }
}

struct GroupAssignment {
    std::map<std::string, PerfGroup> group;
    bool degenerate = false; // all points identical; everything labeled I
};

inline constexpr std::uint64_t kGroupingSeed = 0x67726F75707331ull;
inline constexpr int kGroupingRestarts = 100;

// Three-way k-means on the standardized (node composite, edge composite)
// plane: k-means++ seeding from a fixed seed, 100 restarts, best inertia
// kept. Clusters are labeled I/II/III by ascending mean total composite.
inline GroupAssignment group_assign(const std::map<std::string, double>& node_composite,
                                    const std::map<std::string, double>& edge_composite) {
    if (node_composite.size() != edge_composite.size())
        throw ValidationError("node and edge composite maps disagree on networks");
    const std::size_t n = node_composite.size();
    if (n < 3)
        throw ValidationError("grouping needs at least three networks");

    std::vector<std::string> names;
    names.reserve(n);
    for (const auto& [name, v] : node_composite) {
        if (!edge_composite.count(name))
            throw ValidationError("missing edge composite for network '" + name + "'");
        names.push_back(name);
    }

    // Standardize both axes so neither dominates the distance.
    auto axis = [&](const std::map<std::string, double>& m) {
        auto z = standardize(m, Orientation::higher_better);
        std::vector<double> out;
        out.reserve(n);
        for (const auto& name : names) out.push_back(z.at(name));
        return out;
    };
    const std::vector<double> xs = axis(node_composite);
    const std::vector<double> ys = axis(edge_composite);

    bool all_identical = true;
    for (std::size_t i = 1; i < n && all_identical; ++i)
        if (xs[i] != xs[0] || ys[i] != ys[0]) all_identical = false;
    if (all_identical) {
        GroupAssignment out;
        out.degenerate = true;
        for (const auto& name : names) out.group[name] = PerfGroup::I;
        return out;
    }

    const int k = 3;
    const auto dist2 = [&](std::size_t i, double cx, double cy) {
        const double dx = xs[i] - cx, dy = ys[i] - cy;
        return dx * dx + dy * dy;
    };

    SplitMix64 rng(kGroupingSeed);
    std::vector<int> best_assign(n, 0);
    double best_inertia = -1.0;

    for (int restart = 0; restart < kGroupingRestarts; ++restart) {
        // k-means++ seeding.
        std::vector<double> cx(k), cy(k);
        std::vector<double> d2(n);
        {
            const auto first = static_cast<std::size_t>(rng.bounded(n));
            cx[0] = xs[first];
            cy[0] = ys[first];
            for (int c = 1; c < k; ++c) {
                double total = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double best = dist2(i, cx[0], cy[0]);
                    for (int p = 1; p < c; ++p) best = std::min(best, dist2(i, cx[p], cy[p]));
                    d2[i] = best;
                    total += best;
                }
                std::size_t pick = 0;
                if (total > 0.0) {
                    const double target = rng.uniform01() * total;
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        acc += d2[i];
                        if (acc >= target) {
                            pick = i;
                            break;
                        }
                        pick = i;
                    }
                } else {
                    pick = static_cast<std::size_t>(rng.bounded(n));
                }
                cx[c] = xs[pick];
                cy[c] = ys[pick];
            }
        }

        std::vector<int> assign(n, -1);
        for (int iter = 0; iter < 100; ++iter) {
            bool changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                int best = 0;
                double bd = dist2(i, cx[0], cy[0]);
                for (int c = 1; c < k; ++c) {
                    const double d = dist2(i, cx[c], cy[c]);
                    if (d < bd) {
                        bd = d;
                        best = c;
                    }
                }
                if (assign[i] != best) {
                    assign[i] = best;
                    changed = true;
                }
            }
            if (!changed) break;

            std::array<double, 3> sx{}, sy{};
            std::array<std::size_t, 3> cnt{};
            for (std::size_t i = 0; i < n; ++i) {
                sx[static_cast<std::size_t>(assign[i])] += xs[i];
                sy[static_cast<std::size_t>(assign[i])] += ys[i];
                cnt[static_cast<std::size_t>(assign[i])]++;
            }
            for (int c = 0; c < k; ++c) {
                if (cnt[static_cast<std::size_t>(c)] == 0) {
                    // Re-seed an empty cluster on the point farthest from its
                    // current centroid.
                    std::size_t far = 0;
                    double fd = -1.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const auto a = static_cast<std::size_t>(assign[i]);
                        const double d = dist2(i, cx[a], cy[a]);
                        if (d > fd) {
                            fd = d;
                            far = i;
                        }
                    }
                    cx[c] = xs[far];
                    cy[c] = ys[far];
                } else {
                    cx[c] = sx[static_cast<std::size_t>(c)] /
                            static_cast<double>(cnt[static_cast<std::size_t>(c)]);
                    cy[c] = sy[static_cast<std::size_t>(c)] /
                            static_cast<double>(cnt[static_cast<std::size_t>(c)]);
                }
            }
        }

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += dist2(i, cx[static_cast<std::size_t>(assign[i])],
                             cy[static_cast<std::size_t>(assign[i])]);
        if (best_inertia < 0.0 || inertia < best_inertia) {
            best_inertia = inertia;
            best_assign = assign;
        }
    }

    // Order clusters by ascending mean total composite.
    std::array<double, 3> total{};
    std::array<std::size_t, 3> members{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(best_assign[i]);
        total[c] += node_composite.at(names[i]) + edge_composite.at(names[i]);
        members[c]++;
    }
    std::array<int, 3> order = {0, 1, 2};
    std::array<double, 3> mean{};
    for (int c = 0; c < 3; ++c)
        mean[static_cast<std::size_t>(c)] =
            members[static_cast<std::size_t>(c)] > 0
                ? total[static_cast<std::size_t>(c)] /
                      static_cast<double>(members[static_cast<std::size_t>(c)])
                : std::numeric_limits<double>::infinity();
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return mean[static_cast<std::size_t>(a)] < mean[static_cast<std::size_t>(b)];
    });
    std::array<PerfGroup, 3> relabel{};
    for (int rank = 0; rank < 3; ++rank)
        relabel[static_cast<std::size_t>(order[static_cast<std::size_t>(rank)])] =
            static_cast<PerfGroup>(rank);

    GroupAssignment out;
    for (std::size_t i = 0; i < n; ++i)
        out.group[names[i]] = relabel[static_cast<std::size_t>(best_assign[i])];
    return out;
}

// Full standardized performance table.
struct PerformanceTable {
    std::vector<std::string> networks;
    std::vector<ScenarioKey> scenarios;
    RawPerformance raw;
    std::map<std::string, std::map<ScenarioKey, std::array<double, 4>>> z;
    std::map<std::string, double> composite;
    std::map<std::string, double> node_composite;
    std::map<std::string, double> edge_composite;
    std::map<std::string, PerfGroup> group;
    bool grouping_degenerate = false;
};

// Standardizes every (scenario, metric) column across networks, sums the
// orientation-corrected z-values into composites and assigns groups.
// Clustering cells flagged degenerate contribute zero.
inline PerformanceTable composite(const RawPerformance& raw) {
    if (raw.size() < 2)
        throw ValidationError("composite scoring needs at least two networks");

    PerformanceTable table;
    table.raw = raw;
    for (const auto& [name, cells] : raw) table.networks.push_back(name);

    // All networks must cover one common scenario set.
    for (const auto& [key, cells] : raw.begin()->second) table.scenarios.push_back(key);
    for (const auto& [name, cells] : raw) {
        for (const ScenarioKey& key : table.scenarios)
            if (!cells.count(key))
                throw ValidationError("network '" + name + "' is missing scenario " +
                                      key.label());
        if (cells.size() != table.scenarios.size())
            for (const auto& [key, values] : cells)
                if (std::find(table.scenarios.begin(), table.scenarios.end(), key) ==
                    table.scenarios.end())
                    throw ValidationError("network '" + name + "' has extra scenario " +
                                          key.label());
    }

    for (const auto& name : table.networks) {
        table.composite[name] = 0.0;
        table.node_composite[name] = 0.0;
        table.edge_composite[name] = 0.0;
        for (const ScenarioKey& key : table.scenarios) table.z[name][key] = {0.0, 0.0, 0.0, 0.0};
    }

    for (const ScenarioKey& key : table.scenarios) {
        for (std::size_t mi = 0; mi < kPerfMetrics.size(); ++mi) {
            const PerfMetric metric = kPerfMetrics[mi];
            std::map<std::string, double> column;
            for (const auto& [name, cells] : raw) {
                const auto& cell = cells.at(key)[mi];
                if (cell) {
                    column[name] = *cell;
                } else if (metric != PerfMetric::clustering_drop) {
                    throw ValidationError("network '" + name + "' is missing metric " +
                                          std::string(perf_metric_label(metric)) +
                                          " for scenario " + key.label());
                }
            }
            std::map<std::string, double> zcol;
            if (column.size() >= 2) zcol = standardize(column, metric_orientation(metric));

            for (const auto& name : table.networks) {
                const double zv = zcol.count(name) ? zcol.at(name) : 0.0;
                table.z[name][key][mi] = zv;
                table.composite[name] += zv;
                if (key.kind == RemovalKind::node)
                    table.node_composite[name] += zv;
                else
                    table.edge_composite[name] += zv;
            }
        }
    }

    if (table.networks.size() >= 3) {
        GroupAssignment groups = group_assign(table.node_composite, table.edge_composite);
        table.group = std::move(groups.group);
        table.grouping_degenerate = groups.degenerate;
    } else {
        table.grouping_degenerate = true;
    }
    return table;
}

} // namespace hvgrid

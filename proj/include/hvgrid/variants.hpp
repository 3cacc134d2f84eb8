#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"

namespace hvgrid {

// Selector for one of the graph representations: a minimum voltage cut and
// an optional redundancy collapse.
struct VariantSpec {
    double min_voltage_kv = 0.0; // 0 keeps every circuit
    bool simplify = false;       // collapse parallel circuits, drop self-loops

    bool operator==(const VariantSpec&) const = default;
};

// The four representations used throughout: complete grid, simplified grid,
// transmission-only (>=220 kV) and simplified transmission-only.
inline std::array<VariantSpec, 4> canonical_variants() {
    return {VariantSpec{0.0, false}, VariantSpec{0.0, true},
            VariantSpec{220.0, false}, VariantSpec{220.0, true}};
}

inline std::string variant_label(const VariantSpec& spec) {
    std::string label = spec.min_voltage_kv > 0.0 ? "tx" : "hv";
    if (spec.simplify) label += "_simple";
    if (spec.min_voltage_kv > 0.0 && spec.min_voltage_kv != 220.0)
        label = "min" + detail::format_double(spec.min_voltage_kv) + (spec.simplify ? "_simple" : "");
    return label;
}

// Applies a VariantSpec: circuits below the voltage cut are removed, then
// (optionally) parallel bundles collapse to a single edge carrying the
// bundle's maximum voltage and self-loops are dropped, and finally nodes left
// without any circuit disappear. Throws EmptyVariantError when nothing
// survives the cut.
inline GridGraph derive_variant(const GridGraph& g, const VariantSpec& spec) {
    std::vector<Edge> kept;
    kept.reserve(g.edge_count());
    for (const Edge& e : g.edges())
        if (e.voltage_kv >= spec.min_voltage_kv) kept.push_back(e);
    if (kept.empty())
        throw EmptyVariantError("no circuit at or above " +
                                detail::format_double(spec.min_voltage_kv) + " kV");

    if (spec.simplify) {
        std::vector<Edge> collapsed;
        collapsed.reserve(kept.size());
        std::size_t i = 0;
        while (i < kept.size()) {
            std::size_t j = i;
            while (j < kept.size() && kept[j].a == kept[i].a && kept[j].b == kept[i].b) ++j;
            if (kept[i].a != kept[i].b) {
                // Bundle representative: maximum voltage, smallest circuit id
                // among the maxima.
                std::size_t best = i;
                for (std::size_t k = i + 1; k < j; ++k) {
                    if (kept[k].voltage_kv > kept[best].voltage_kv ||
                        (kept[k].voltage_kv == kept[best].voltage_kv &&
                         kept[k].circuit_id < kept[best].circuit_id))
                        best = k;
                }
                collapsed.push_back(kept[best]);
            }
            i = j;
        }
        kept = std::move(collapsed);
        if (kept.empty())
            throw EmptyVariantError("simplification removed every circuit");
    }

    // Keep only nodes that still carry a circuit.
    const std::size_t n = g.node_count();
    std::vector<std::uint8_t> used(n, 0);
    for (const Edge& e : kept) {
        used[e.a] = 1;
        used[e.b] = 1;
    }
    std::vector<std::string> names;
    std::vector<NodeId> remap(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        if (used[u]) {
            remap[u] = static_cast<NodeId>(names.size());
            names.push_back(g.node_name(u));
        }
    }
    for (Edge& e : kept) {
        e.a = remap[e.a];
        e.b = remap[e.b];
    }
    // Subsetting preserves sorted name order, so the edge list stays canonical.
    return GridGraph(std::move(names), std::move(kept), spec.simplify || g.is_simple());
}

} // namespace hvgrid

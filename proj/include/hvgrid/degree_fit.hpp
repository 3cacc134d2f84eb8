#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hvgrid/errors.hpp"
#include "hvgrid/grid_graph.hpp"
#include "hvgrid/variants.hpp"

namespace hvgrid {

// Node-degree census. Degrees carry multigraph multiplicity: parallel
// circuits raise the degree, which is exactly what separates the complete
// representations from the simplified ones.
struct DegreePdf {
    std::map<std::uint32_t, std::uint64_t> counts; // degree -> node count
    std::map<std::uint32_t, double> pdf;           // degree -> fraction of nodes

    double mean() const {
        double m = 0.0;
        for (const auto& [k, p] : pdf) m += static_cast<double>(k) * p;
        return m;
    }
};

inline DegreePdf degree_pdf(const GridGraph& g) {
    if (g.node_count() == 0)
        throw UndefinedMetricError("degree distribution of an empty graph");
    DegreePdf out;
    for (NodeId u = 0; u < g.node_count(); ++u)
        out.counts[static_cast<std::uint32_t>(g.multidegree(u))]++;
    for (const auto& [k, c] : out.counts)
        out.pdf[k] = static_cast<double>(c) / static_cast<double>(g.node_count());
    return out;
}

// Exponential decay fit p(k) = prefactor * exp(-k / gamma).
struct DegreeFit {
    double gamma = 0.0;
    double prefactor = 0.0;
    double r_squared = 0.0;
    std::vector<std::uint32_t> support; // degrees entering the fit
};

// Ordinary least squares on (k, ln p(k)) over occupied degrees k >= 1; no
// binning, no pseudo-counts. The slope must be negative for a decay
// constant to exist.
inline DegreeFit fit_exponential(const DegreePdf& dist) {
    std::vector<std::uint32_t> ks;
    std::vector<double> logs;
    for (const auto& [k, p] : dist.pdf) {
        if (k < 1 || p <= 0.0) continue;
        ks.push_back(k);
        logs.push_back(std::log(p));
    }
    if (ks.size() < 3)
        throw FitError("exponential fit needs at least three occupied degrees, got " +
                       std::to_string(ks.size()));

    const double n = static_cast<double>(ks.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sx += static_cast<double>(ks[i]);
        sy += logs[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double dx = static_cast<double>(ks[i]) - mx;
        const double dy = logs[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    if (!(slope < 0.0))
        throw FitError("degree distribution does not decay (non-negative log-linear slope)");
    const double intercept = my - slope * mx;

    double ss_res = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double r = logs[i] - (intercept + slope * static_cast<double>(ks[i]));
        ss_res += r * r;
    }

    DegreeFit fit;
    fit.gamma = -1.0 / slope;
    fit.prefactor = std::exp(intercept);
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    if (fit.r_squared < 0.0) fit.r_squared = 0.0;
    fit.support = std::move(ks);
    return fit;
}

// Decay constants for the four canonical representations.
struct GammaSuite {
    DegreeFit hv;        // every voltage level, redundancies kept
    DegreeFit hv_simple; // every voltage level, simplified
    DegreeFit tx;        // >= 220 kV
    DegreeFit tx_simple; // >= 220 kV, simplified

    const DegreeFit& at(const VariantSpec& spec) const {
        if (spec.min_voltage_kv > 0.0) return spec.simplify ? tx_simple : tx;
        return spec.simplify ? hv_simple : hv;
    }
};

namespace detail {

template <typename Fn>
auto with_variant_label(const VariantSpec& spec, Fn&& fn) {
    try {
        return fn();
    } catch (const EmptyVariantError& e) {
        throw EmptyVariantError("variant " + variant_label(spec) + ": " + e.what());
    } catch (const FitError& e) {
        throw FitError("variant " + variant_label(spec) + ": " + e.what());
    }
}

} // namespace detail

inline GammaSuite gamma_suite(const GridGraph& g) {
    GammaSuite suite;
    for (const VariantSpec& spec : canonical_variants()) {
        DegreeFit fit = detail::with_variant_label(spec, [&] {
            return fit_exponential(degree_pdf(derive_variant(g, spec)));
        });
        if (spec.min_voltage_kv > 0.0)
            (spec.simplify ? suite.tx_simple : suite.tx) = std::move(fit);
        else
            (spec.simplify ? suite.hv_simple : suite.hv) = std::move(fit);
    }
    return suite;
}

// Relative change of the decay constant caused by simplification, for the
// all-voltage pair and the transmission-only pair.
struct RelativeDecrease {
    double hv = 0.0;
    double tx = 0.0;
};

inline RelativeDecrease relative_decrease(const GammaSuite& suite) {
    return {(suite.hv_simple.gamma - suite.hv.gamma) / suite.hv.gamma,
            (suite.tx_simple.gamma - suite.tx.gamma) / suite.tx.gamma};
}

} // namespace hvgrid

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hvgrid/errors.hpp"

namespace hvgrid {

// Fixed-width binned probability mass function. The range is [0, max] for
// non-negative samples and symmetric around zero otherwise; a degenerate
// sample set collapses to a single spike.
struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> mass; // sums to 1
    std::uint64_t n_samples = 0;

    double bin_width() const {
        return mass.empty() ? 0.0 : (hi - lo) / static_cast<double>(mass.size());
    }
};

inline Histogram bin_samples(const std::vector<double>& samples, std::size_t bins = 100) {
    if (samples.empty())
        throw ValidationError("cannot bin an empty sample set");
    if (bins == 0)
        throw ValidationError("histogram needs at least one bin");

    double max_abs = 0.0;
    bool negative = false;
    for (double v : samples) {
        if (v < 0.0) negative = true;
        max_abs = std::max(max_abs, std::abs(v));
    }

    Histogram h;
    h.n_samples = samples.size();
    if (max_abs == 0.0) {
        // All samples identical at zero: single spike.
        h.lo = h.hi = 0.0;
        h.mass.assign(1, 1.0);
        return h;
    }
    h.lo = negative ? -max_abs : 0.0;
    h.hi = max_abs;
    h.mass.assign(bins, 0.0);
    const double width = (h.hi - h.lo) / static_cast<double>(bins);
    const double unit = 1.0 / static_cast<double>(samples.size());
    for (double v : samples) {
        // Bins are right-closed: (lo + i*w, lo + (i+1)*w], with the first
        // also containing lo itself.
        std::size_t idx = 0;
        if (v > h.lo) {
            const double pos = std::ceil((v - h.lo) / width);
            idx = static_cast<std::size_t>(pos) - 1;
            if (idx >= bins) idx = bins - 1;
        }
        h.mass[idx] += unit;
    }
    return h;
}

// Number of local maxima of `values` after a centered moving-average smooth
// of the given window (window 1 leaves the data untouched). A plateau
// bounded by strictly lower values on both sides counts once; the array
// boundary acts as a lower side.
inline int count_local_maxima(const std::vector<double>& values, int window = 1) {
    if (values.empty()) return 0;
    const int n = static_cast<int>(values.size());
    std::vector<double> s(values.size());
    const int half = std::max(0, window / 2);
    for (int i = 0; i < n; ++i) {
        // Zero-padded moving average: mass outside the histogram is zero, so
        // the borders do not pick up artificial plateaus.
        double acc = 0.0;
        for (int j = i - half; j <= i + half; ++j)
            if (j >= 0 && j < n) acc += values[static_cast<std::size_t>(j)];
        s[i] = acc / static_cast<double>(2 * half + 1);
    }

    int peaks = 0;
    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && s[j + 1] == s[i]) ++j; // plateau [i, j]
        const bool rises_left = (i == 0) || (s[i - 1] < s[i]);
        const bool falls_right = (j == n - 1) || (s[j + 1] < s[i]);
        if (rises_left && falls_right && s[i] > 0.0) ++peaks;
        i = j + 1;
    }
    return peaks;
}

// Basic sample statistics; quantiles use linear interpolation between order
// statistics.
struct SampleSummary {
    double mean = 0.0;
    double stddev = 0.0; // sample (n-1) deviation
    double min = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
    double max = 0.0;
};

inline double interpolated_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

inline SampleSummary summarize_samples(std::vector<double> samples) {
    if (samples.empty())
        throw ValidationError("cannot summarize an empty sample set");
    std::sort(samples.begin(), samples.end());
    SampleSummary s;
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(samples.size());
    double ss = 0.0;
    for (double v : samples) ss += (v - s.mean) * (v - s.mean);
    s.stddev = samples.size() > 1
                   ? std::sqrt(ss / static_cast<double>(samples.size() - 1))
                   : 0.0;
    s.min = samples.front();
    s.max = samples.back();
    s.q05 = interpolated_quantile(samples, 0.05);
    s.q25 = interpolated_quantile(samples, 0.25);
    s.median = interpolated_quantile(samples, 0.50);
    s.q75 = interpolated_quantile(samples, 0.75);
    s.q95 = interpolated_quantile(samples, 0.95);
    return s;
}

} // namespace hvgrid

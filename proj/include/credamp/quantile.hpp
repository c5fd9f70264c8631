#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "credamp/types.hpp"

namespace credamp {

// Inclusive linear-interpolation quantile on a sorted vector:
// h = p*(n-1), result interpolates between the floor and ceil order statistics.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DataError("quantile of empty input");
    if (p <= 0.0) return sorted.front();
    if (p >= 1.0) return sorted.back();
    double h = p * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(h);
    double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

// Interior cut points of a quantile discretization. Bin count = cuts + 1.
struct BinEdges {
    std::vector<double> cuts;  // strictly increasing

    int bin_count() const { return static_cast<int>(cuts.size()) + 1; }

    // First bin is closed at its lower end; remaining bins are (lower, upper].
    int bin_of(double v) const {
        int b = 0;
        for (double c : cuts) {
            if (v > c)
                ++b;
            else
                break;
        }
        return b;
    }
};

struct QuantileBins {
    BinEdges edges;
    std::vector<int> assignment;  // parallel to the input values
};

// Quantile-based discretization into at most k similar-sized bins.
// Cut points sit at the j/k-quantiles; duplicates (including cuts that
// coincide with the data minimum or maximum) are merged, so tie-heavy data
// may yield fewer than k bins.
inline QuantileBins quantile_bins(std::span<const double> values, int k) {
    if (k < 2) throw ConfigError("quantile_bins: k must be >= 2");
    if (values.empty()) throw DataError("quantile_bins: empty input");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    std::vector<double> edges;  // includes the min and max boundary quantiles
    edges.reserve(k + 1);
    for (int j = 0; j <= k; ++j)
        edges.push_back(quantile_sorted(sorted, static_cast<double>(j) / k));
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    QuantileBins out;
    if (edges.size() >= 3) out.edges.cuts.assign(edges.begin() + 1, edges.end() - 1);
    out.assignment.reserve(values.size());
    for (double v : values) out.assignment.push_back(out.edges.bin_of(v));
    return out;
}

}  // namespace credamp

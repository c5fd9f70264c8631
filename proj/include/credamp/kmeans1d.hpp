#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <vector>

#include "credamp/types.hpp"

namespace credamp {

struct KMeansResult {
    std::vector<double> centroids;  // ascending
    std::vector<int> assignment;    // parallel to input; cluster ids ordered by centroid
    double wcss = 0.0;              // within-cluster sum of squares
};

namespace detail {

// Interval sum-of-squares cost over sorted values, via prefix sums.
struct SegmentCost {
    std::vector<double> pre, pre2;

    explicit SegmentCost(const std::vector<double>& x)
        : pre(x.size() + 1, 0.0), pre2(x.size() + 1, 0.0) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            pre[i + 1] = pre[i] + x[i];
            pre2[i + 1] = pre2[i] + x[i] * x[i];
        }
    }

    double operator()(std::size_t i, std::size_t j) const {  // x[i..j), i < j
        double s = pre[j] - pre[i];
        double m = static_cast<double>(j - i);
        return (pre2[j] - pre2[i]) - s * s / m;
    }
};

// One DP layer with divide-and-conquer optimization; the interval cost is
// Monge, so the argmin is monotone in j.
inline void dp_layer(const SegmentCost& cost, const std::vector<double>& prev,
                     std::vector<double>& cur, std::vector<std::size_t>& arg, std::size_t c,
                     std::size_t jlo, std::size_t jhi, std::size_t ilo, std::size_t ihi) {
    if (jlo > jhi) return;
    std::size_t jm = jlo + (jhi - jlo) / 2;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = ilo;
    std::size_t lo = std::max(ilo, c - 1);
    std::size_t hi = std::min(ihi, jm - 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        double v = prev[i] + cost(i, jm);
        if (v < best) {
            best = v;
            best_i = i;
        }
    }
    cur[jm] = best;
    arg[jm] = best_i;
    if (jm > jlo) dp_layer(cost, prev, cur, arg, c, jlo, jm - 1, ilo, best_i);
    if (jm < jhi) dp_layer(cost, prev, cur, arg, c, jm + 1, jhi, best_i, ihi);
}

}  // namespace detail

// Exact 1-D k-means: dynamic programming over sorted prefixes with
// divide-and-conquer optimization, O(k n log n). Deterministic, globally
// optimal, and permutation invariant. Centroids come back ascending; each
// point is assigned to its nearest centroid (ties toward the lower id).
inline KMeansResult kmeans_1d(std::span<const double> scores, int k = 3) {
    if (k < 1) throw ConfigError("kmeans_1d: k must be >= 1");
    std::set<double> distinct(scores.begin(), scores.end());
    if (static_cast<int>(distinct.size()) < k)
        throw DataError(
            "kmeans_1d: fewer distinct values than clusters; "
            "partition by distinct value instead");

    const std::size_t n = scores.size();
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    detail::SegmentCost cost(sorted);

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(n + 1, inf), cur(n + 1, inf);
    prev[0] = 0.0;
    std::vector<std::vector<std::size_t>> args(k);
    for (int c = 1; c <= k; ++c) {
        args[c - 1].assign(n + 1, 0);
        std::fill(cur.begin(), cur.end(), inf);
        detail::dp_layer(cost, prev, cur, args[c - 1], static_cast<std::size_t>(c),
                         static_cast<std::size_t>(c), n, static_cast<std::size_t>(c - 1), n - 1);
        std::swap(prev, cur);
    }

    // Backtrack segment boundaries and take segment means as centroids.
    KMeansResult res;
    res.centroids.resize(k);
    std::size_t j = n;
    for (int c = k; c >= 1; --c) {
        std::size_t i = args[c - 1][j];
        double s = 0.0;
        for (std::size_t t = i; t < j; ++t) s += sorted[t];
        res.centroids[c - 1] = s / static_cast<double>(j - i);
        j = i;
    }

    res.assignment.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        int best = 0;
        double best_d = std::abs(scores[p] - res.centroids[0]);
        for (int c = 1; c < k; ++c) {
            double d = std::abs(scores[p] - res.centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        res.assignment[p] = best;
        res.wcss += best_d * best_d;
    }
    return res;
}

}  // namespace credamp

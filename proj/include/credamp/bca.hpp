#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "credamp/normal.hpp"
#include "credamp/quantile.hpp"
#include "credamp/types.hpp"

namespace credamp {

struct BcaInterval {
    double point_estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double z0 = 0.0;     // bias-correction constant
    double accel = 0.0;  // acceleration constant
    double level = 0.95;
};

// Bias-corrected and accelerated bootstrap interval (Efron-Tibshirani):
//   z0 = Phi^-1( #{theta* < theta_hat} / B ), ties at theta_hat counted half
//   a  = sum (jbar - j_i)^3 / (6 [sum (jbar - j_i)^2]^{3/2})
//   alpha_j = Phi( z0 + (z0 + z_alpha) / (1 - a (z0 + z_alpha)) )
// Endpoints are empirical (inclusive linear-interpolation) quantiles of the
// bootstrap distribution at the adjusted percentiles.
inline BcaInterval bca_interval(double observed, std::span<const double> boot_dist,
                                std::span<const double> jackknife_stats, double level) {
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("bca_interval: level must lie in (0,1)");
    if (boot_dist.empty()) throw AnalysisError("bca_interval: empty bootstrap distribution");

    BcaInterval ci;
    ci.point_estimate = observed;
    ci.level = level;

    std::vector<double> sorted(boot_dist.begin(), boot_dist.end());
    std::sort(sorted.begin(), sorted.end());

    if (sorted.front() == sorted.back()) {
        // Constant distribution: degenerate interval.
        ci.lower = ci.upper = sorted.front();
        return ci;
    }

    const double n = static_cast<double>(sorted.size());
    double below = 0.0, ties = 0.0;
    for (double v : sorted) {
        if (v < observed)
            below += 1.0;
        else if (v == observed)
            ties += 1.0;
    }
    double p = (below + 0.5 * ties) / n;
    p = std::clamp(p, 0.5 / n, 1.0 - 0.5 / n);  // keep z0 finite on one-sided distributions
    ci.z0 = norm_inv(p);

    if (jackknife_stats.size() >= 2) {
        double mean = 0.0;
        for (double v : jackknife_stats) mean += v;
        mean /= static_cast<double>(jackknife_stats.size());
        double s2 = 0.0, s3 = 0.0;
        for (double v : jackknife_stats) {
            double d = mean - v;
            s2 += d * d;
            s3 += d * d * d;
        }
        if (s2 > 0.0) ci.accel = s3 / (6.0 * std::pow(s2, 1.5));
    }

    const double alpha = (1.0 - level) / 2.0;
    auto adjusted = [&](double z_alpha) {
        double num = ci.z0 + z_alpha;
        double denom = 1.0 - ci.accel * num;
        if (denom <= 0.0) return num > 0.0 ? 1.0 : 0.0;
        return norm_cdf(ci.z0 + num / denom);
    };

    double a1 = adjusted(norm_inv(alpha));
    double a2 = adjusted(norm_inv(1.0 - alpha));
    ci.lower = quantile_sorted(sorted, std::min(a1, a2));
    ci.upper = quantile_sorted(sorted, std::max(a1, a2));
    return ci;
}

}  // namespace credamp

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <thread>
#include <vector>

#include "credamp/rng.hpp"
#include "credamp/types.hpp"

namespace credamp {

struct BootstrapConfig {
    int iterations = 1000;
    std::uint64_t seed = 0;
    double confidence = 0.95;
    int min_stratum_size = 2;  // strata where either group is smaller are skipped
    int workers = 1;
    bool equal_stratum_weights = false;  // default: strata weighted by matched size m_s

    void validate() const {
        if (iterations < 1) throw ConfigError("iterations must be >= 1");
        if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0,1)");
        if (min_stratum_size < 1) throw ConfigError("min_stratum_size must be >= 1");
        if (workers < 1) throw ConfigError("workers must be >= 1");
    }
};

// Impression values of one stratum, split by credibility group.
struct StratumGroup {
    StratumKey key;
    std::vector<double> low;
    std::vector<double> high;

    std::size_t matched_size() const { return std::min(low.size(), high.size()); }
};

struct StrataPartition {
    std::vector<StratumGroup> included;  // sorted by key
    std::vector<StratumKey> skipped;     // failed the size floor
};

inline StrataPartition partition_strata(std::span<const StratumKey> keys,
                                        std::span<const LabeledPost* const> posts,
                                        int min_stratum_size) {
    std::map<StratumKey, StratumGroup> cells;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (posts[i]->label == CredibilityLabel::Unlabeled) continue;
        auto& cell = cells[keys[i]];
        cell.key = keys[i];
        double imp = static_cast<double>(posts[i]->post.impressions);
        if (posts[i]->label == CredibilityLabel::Low)
            cell.low.push_back(imp);
        else
            cell.high.push_back(imp);
    }

    StrataPartition out;
    for (auto& [key, cell] : cells) {
        std::size_t floor = static_cast<std::size_t>(min_stratum_size);
        if (cell.low.size() >= floor && cell.high.size() >= floor)
            out.included.push_back(std::move(cell));
        else
            out.skipped.push_back(key);
    }
    if (out.included.empty()) throw AnalysisError("all strata skipped by the size floor");
    return out;
}

// Per-stratum draw means of one resample.
struct StratumDraw {
    double low_mean = 0.0;
    double high_mean = 0.0;
};

struct ResampleStatistic {
    int iteration = 0;
    double mean_low = 0.0;   // pooled over all drawn posts
    double mean_high = 0.0;
    double abs_diff = 0.0;   // mean_low - mean_high
    double pct_diff = 0.0;   // 100 * (mean_low - mean_high) / mean_high
    std::vector<StratumDraw> stratum_draws;  // parallel to StrataPartition::included
};

// One matched resample: within each stratum, m_s = min(|low|, |high|) draws
// with replacement from each group. Returns false when the pooled high mean
// is zero (degenerate iteration).
inline bool draw_resample(const std::vector<StratumGroup>& strata, Xoshiro256& rng,
                          bool equal_weights, ResampleStatistic& out) {
    out.stratum_draws.assign(strata.size(), {});
    double sum_low = 0.0, sum_high = 0.0, total_weight = 0.0;
    std::size_t total_draws = 0;

    for (std::size_t s = 0; s < strata.size(); ++s) {
        const auto& g = strata[s];
        const std::size_t m = g.matched_size();
        double sl = 0.0, sh = 0.0;
        for (std::size_t d = 0; d < m; ++d) sl += g.low[rng.next_below(g.low.size())];
        for (std::size_t d = 0; d < m; ++d) sh += g.high[rng.next_below(g.high.size())];
        out.stratum_draws[s].low_mean = sl / static_cast<double>(m);
        out.stratum_draws[s].high_mean = sh / static_cast<double>(m);
        double w = equal_weights ? 1.0 : static_cast<double>(m);
        sum_low += out.stratum_draws[s].low_mean * w;
        sum_high += out.stratum_draws[s].high_mean * w;
        total_weight += w;
        total_draws += m;
    }
    (void)total_draws;

    out.mean_low = sum_low / total_weight;
    out.mean_high = sum_high / total_weight;
    out.abs_diff = out.mean_low - out.mean_high;
    if (out.mean_high <= 0.0) return false;
    out.pct_diff = 100.0 * out.abs_diff / out.mean_high;
    return true;
}

struct BootstrapRun {
    std::vector<ResampleStatistic> stats;  // ordered by iteration index
    int degenerate_iterations = 0;         // rejected twice, excluded
};

// Runs the matched stratified bootstrap. Iteration i draws only from the
// substream derived from (seed, i), so output is identical for any worker
// count. A zero high-mean iteration is redrawn once; a second failure
// excludes it with a count.
inline BootstrapRun run_bootstrap(const std::vector<StratumGroup>& strata,
                                  const BootstrapConfig& cfg) {
    cfg.validate();
    if (strata.empty()) throw AnalysisError("run_bootstrap: no usable strata");

    std::vector<ResampleStatistic> results(cfg.iterations);
    std::vector<char> ok(cfg.iterations, 0);

    auto work = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            ResampleStatistic stat;
            stat.iteration = i;
            Xoshiro256 rng = substream(cfg.seed, static_cast<std::uint64_t>(i), 0);
            bool good = draw_resample(strata, rng, cfg.equal_stratum_weights, stat);
            if (!good) {
                Xoshiro256 retry = substream(cfg.seed, static_cast<std::uint64_t>(i), 1);
                good = draw_resample(strata, retry, cfg.equal_stratum_weights, stat);
            }
            results[i] = std::move(stat);
            ok[i] = good ? 1 : 0;
        }
    };

    const int workers = std::min(cfg.workers, cfg.iterations);
    if (workers <= 1) {
        work(0, cfg.iterations);
    } else {
        std::vector<std::thread> pool;
        int chunk = (cfg.iterations + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            int begin = w * chunk;
            int end = std::min(cfg.iterations, begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& t : pool) t.join();
    }

    BootstrapRun run;
    run.stats.reserve(cfg.iterations);
    for (int i = 0; i < cfg.iterations; ++i) {
        if (ok[i])
            run.stats.push_back(std::move(results[i]));
        else
            ++run.degenerate_iterations;
    }
    return run;
}

}  // namespace credamp

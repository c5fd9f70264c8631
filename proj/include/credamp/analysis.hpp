#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "credamp/bca.hpp"
#include "credamp/bootstrap.hpp"
#include "credamp/ingest.hpp"
#include "credamp/strata.hpp"
#include "credamp/types.hpp"

namespace credamp {

enum class JackknifeMode {
    LeaveOneStratumOut,  // the stratum is the exchangeable unit of the matched design
    LeaveOneBlockOut,    // one (stratum, group) block per replicate
};

struct AnalyzeConfig {
    BootstrapConfig boot;
    int bins = 4;
    bool reuse_global_bins = false;  // restricted runs reuse the baseline bin edges
    int toxicity_clusters = 3;
    JackknifeMode jackknife = JackknifeMode::LeaveOneStratumOut;
};

// One cell of the 4x4 stratum matrix.
struct StratumCell {
    StratumKey key;
    std::size_t n_low = 0;   // population sizes, not draw counts
    std::size_t n_high = 0;
    bool skipped = false;
    double mean_abs_diff = 0.0;  // over bootstrap draws
    double mean_pct_diff = 0.0;
};

// Per-included-stratum detail kept for drilldown.
struct StratumCellDetail {
    std::vector<std::string> low_ids;
    std::vector<std::string> high_ids;
    std::vector<double> abs_series;  // per usable iteration, draw-mean difference
};

struct BaselineResult {
    double observed_pct = 0.0;  // population analogue of the resample statistic
    double observed_abs = 0.0;
    double mean_pct = 0.0;
    double median_pct = 0.0;
    double mean_abs = 0.0;
    double median_abs = 0.0;
    double positive_share = 0.0;  // percent of iterations with abs_diff > 0
    BcaInterval interval_pct;
    BcaInterval interval_abs;
    std::vector<StratumCell> matrix;
    std::vector<StratumKey> skipped_strata;
    int degenerate_iterations = 0;
    bool low_iteration_warning = false;  // fewer than 100 usable iterations
    std::vector<ResampleStatistic> iterations;
    std::vector<StratumKey> included_keys;  // parallel to ResampleStatistic::stratum_draws
    std::map<StratumKey, StratumCellDetail> details;
    BinEdges engagement_edges;
    BinEdges follower_edges;
    std::size_t n_low = 0;
    std::size_t n_high = 0;
};

namespace detail {

inline double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, 0.5);
}

struct ObservedStat {
    double pct = 0.0;
    double abs = 0.0;
};

// Population analogue of the resample statistic: per-stratum group means
// pooled with the matched weights.
inline ObservedStat observed_statistic(const std::vector<StratumGroup>& strata, bool equal_weights,
                                       std::span<const std::size_t> exclude = {}) {
    double sum_low = 0.0, sum_high = 0.0, total_w = 0.0;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        if (std::find(exclude.begin(), exclude.end(), s) != exclude.end()) continue;
        const auto& g = strata[s];
        double ml = 0.0, mh = 0.0;
        for (double v : g.low) ml += v;
        for (double v : g.high) mh += v;
        ml /= static_cast<double>(g.low.size());
        mh /= static_cast<double>(g.high.size());
        double w = equal_weights ? 1.0 : static_cast<double>(g.matched_size());
        sum_low += ml * w;
        sum_high += mh * w;
        total_w += w;
    }
    ObservedStat st;
    if (total_w == 0.0) return st;
    double l = sum_low / total_w, h = sum_high / total_w;
    st.abs = l - h;
    st.pct = h != 0.0 ? 100.0 * (l - h) / h : 0.0;
    return st;
}

inline void jackknife_replicates(const std::vector<StratumGroup>& strata, bool equal_weights,
                                 JackknifeMode mode, std::vector<double>& jack_pct,
                                 std::vector<double>& jack_abs) {
    jack_pct.clear();
    jack_abs.clear();
    if (strata.size() < 2) return;
    const int copies = mode == JackknifeMode::LeaveOneBlockOut ? 2 : 1;
    for (std::size_t s = 0; s < strata.size(); ++s) {
        std::size_t ex[1] = {s};
        auto st = observed_statistic(strata, equal_weights, ex);
        // Removing either group's block removes the whole stratum from the
        // matched statistic, so the block mode contributes two identical
        // replicates per stratum.
        for (int c = 0; c < copies; ++c) {
            jack_pct.push_back(st.pct);
            jack_abs.push_back(st.abs);
        }
    }
}

}  // namespace detail

// Full matched analysis of one post set: base strata, bootstrap, distribution
// summaries, BCa intervals, and the per-stratum matrix.
inline BaselineResult run_matched_analysis(std::span<const LabeledPost* const> posts,
                                           const AnalyzeConfig& cfg,
                                           const BinEdges* eng_edges = nullptr,
                                           const BinEdges* fol_edges = nullptr) {
    cfg.boot.validate();
    std::vector<const LabeledPost*> labeled;
    labeled.reserve(posts.size());
    for (const auto* p : posts)
        if (p->label != CredibilityLabel::Unlabeled) labeled.push_back(p);
    if (labeled.empty()) throw AnalysisError("no labeled posts");

    BaseStrata base = (eng_edges && fol_edges)
                          ? assign_base_strata_with_edges(labeled, *eng_edges, *fol_edges)
                          : assign_base_strata(labeled, cfg.bins);

    // Cell populations.
    struct CellPop {
        StratumGroup group;
        StratumCellDetail detail;
    };
    std::map<StratumKey, CellPop> cells;
    for (std::size_t i = 0; i < labeled.size(); ++i) {
        auto& cell = cells[base.keys[i]];
        cell.group.key = base.keys[i];
        double imp = static_cast<double>(labeled[i]->post.impressions);
        if (labeled[i]->label == CredibilityLabel::Low) {
            cell.group.low.push_back(imp);
            cell.detail.low_ids.push_back(labeled[i]->post.id);
        } else {
            cell.group.high.push_back(imp);
            cell.detail.high_ids.push_back(labeled[i]->post.id);
        }
    }

    BaselineResult res;
    res.engagement_edges = base.engagement_edges;
    res.follower_edges = base.follower_edges;

    std::vector<StratumGroup> included;
    const std::size_t floor = static_cast<std::size_t>(cfg.boot.min_stratum_size);
    for (auto& [key, cell] : cells) {
        StratumCell mc;
        mc.key = key;
        mc.n_low = cell.group.low.size();
        mc.n_high = cell.group.high.size();
        res.n_low += mc.n_low;
        res.n_high += mc.n_high;
        if (cell.group.low.size() >= floor && cell.group.high.size() >= floor) {
            res.included_keys.push_back(key);
            included.push_back(std::move(cell.group));
            res.details.emplace(key, std::move(cell.detail));
        } else {
            mc.skipped = true;
            res.skipped_strata.push_back(key);
        }
        res.matrix.push_back(mc);
    }
    if (included.empty()) throw AnalysisError("all strata skipped by the size floor");

    auto run = run_bootstrap(included, cfg.boot);
    res.degenerate_iterations = run.degenerate_iterations;
    res.iterations = std::move(run.stats);
    if (res.iterations.empty()) throw AnalysisError("no usable bootstrap iterations");
    res.low_iteration_warning = res.iterations.size() < 100;

    // Distribution summaries.
    std::vector<double> pcts, abss;
    pcts.reserve(res.iterations.size());
    abss.reserve(res.iterations.size());
    std::size_t positive = 0;
    for (const auto& it : res.iterations) {
        pcts.push_back(it.pct_diff);
        abss.push_back(it.abs_diff);
        if (it.abs_diff > 0.0) ++positive;
    }
    for (double v : pcts) res.mean_pct += v;
    res.mean_pct /= static_cast<double>(pcts.size());
    for (double v : abss) res.mean_abs += v;
    res.mean_abs /= static_cast<double>(abss.size());
    res.median_pct = detail::median_of(pcts);
    res.median_abs = detail::median_of(abss);
    res.positive_share = 100.0 * static_cast<double>(positive) / static_cast<double>(res.iterations.size());

    auto obs = detail::observed_statistic(included, cfg.boot.equal_stratum_weights);
    res.observed_pct = obs.pct;
    res.observed_abs = obs.abs;

    std::vector<double> jack_pct, jack_abs;
    detail::jackknife_replicates(included, cfg.boot.equal_stratum_weights, cfg.jackknife,
                                 jack_pct, jack_abs);
    res.interval_pct = bca_interval(obs.pct, pcts, jack_pct, cfg.boot.confidence);
    res.interval_abs = bca_interval(obs.abs, abss, jack_abs, cfg.boot.confidence);

    // Per-stratum matrix means over bootstrap draws.
    std::map<StratumKey, std::size_t> key_slot;
    for (std::size_t s = 0; s < res.included_keys.size(); ++s) key_slot[res.included_keys[s]] = s;
    for (auto& mc : res.matrix) {
        if (mc.skipped) continue;
        std::size_t s = key_slot.at(mc.key);
        auto& det = res.details.at(mc.key);
        det.abs_series.reserve(res.iterations.size());
        double sum_abs = 0.0, sum_pct = 0.0;
        std::size_t pct_n = 0;
        for (const auto& it : res.iterations) {
            const auto& d = it.stratum_draws[s];
            double diff = d.low_mean - d.high_mean;
            det.abs_series.push_back(diff);
            sum_abs += diff;
            if (d.high_mean > 0.0) {
                sum_pct += 100.0 * diff / d.high_mean;
                ++pct_n;
            }
        }
        mc.mean_abs_diff = sum_abs / static_cast<double>(res.iterations.size());
        mc.mean_pct_diff = pct_n > 0 ? sum_pct / static_cast<double>(pct_n) : 0.0;
    }
    return res;
}

inline BaselineResult baseline_analysis(std::span<const LabeledPost> posts,
                                        const AnalyzeConfig& cfg) {
    std::vector<const LabeledPost*> ptrs;
    ptrs.reserve(posts.size());
    for (const auto& p : posts) ptrs.push_back(&p);
    return run_matched_analysis(ptrs, cfg);
}

enum class DeltaVariable { Toxicity, Bias, Verified };

inline const char* to_string(DeltaVariable v) {
    switch (v) {
        case DeltaVariable::Toxicity: return "toxicity";
        case DeltaVariable::Bias: return "bias";
        default: return "verified";
    }
}

struct DeltaValue {
    std::string value;
    bool estimable = false;
    std::string reason;  // why not estimable
    double amplification_pct = 0.0;
    double delta_pp = 0.0;  // amplification_pct - baseline mean_pct, exactly
    std::size_t n_low = 0;
    std::size_t n_high = 0;
};

struct DeltaResult {
    std::string variable;
    std::vector<DeltaValue> values;
    std::optional<ToxicityClusters> toxicity;  // set for the toxicity variable
};

namespace detail {

inline DeltaValue run_delta_value(const std::string& value,
                                  std::span<const LabeledPost* const> restricted,
                                  const AnalyzeConfig& cfg, double baseline_mean_pct,
                                  const BaselineResult* baseline) {
    DeltaValue dv;
    dv.value = value;
    for (const auto* p : restricted) {
        if (p->label == CredibilityLabel::Low) ++dv.n_low;
        if (p->label == CredibilityLabel::High) ++dv.n_high;
    }
    if (dv.n_low == 0 || dv.n_high == 0) {
        dv.reason = "empty low or high group";
        return dv;
    }
    try {
        BaselineResult r =
            cfg.reuse_global_bins && baseline
                ? run_matched_analysis(restricted, cfg, &baseline->engagement_edges,
                                       &baseline->follower_edges)
                : run_matched_analysis(restricted, cfg);
        dv.estimable = true;
        dv.amplification_pct = r.mean_pct;
        dv.delta_pp = r.mean_pct - baseline_mean_pct;
    } catch (const AnalysisError& e) {
        dv.reason = e.what();
    }
    return dv;
}

}  // namespace detail

// Re-runs the baseline procedure within each value of one extra variable and
// reports the raw percentage-point delta against the unrestricted baseline.
inline DeltaResult stratified_delta(std::span<const LabeledPost> posts, DeltaVariable var,
                                    const AnalyzeConfig& cfg, const BaselineResult& baseline,
                                    const RatingTable* table = nullptr) {
    DeltaResult out;
    out.variable = to_string(var);

    std::vector<const LabeledPost*> labeled;
    for (const auto& p : posts)
        if (p.label != CredibilityLabel::Unlabeled) labeled.push_back(&p);

    switch (var) {
        case DeltaVariable::Verified: {
            for (bool flag : {true, false}) {
                std::vector<const LabeledPost*> restricted;
                for (const auto* p : labeled)
                    if (p->post.verified == flag) restricted.push_back(p);
                out.values.push_back(detail::run_delta_value(flag ? "true" : "false", restricted,
                                                             cfg, baseline.mean_pct, &baseline));
            }
            break;
        }
        case DeltaVariable::Toxicity: {
            std::vector<const LabeledPost*> scored;
            std::vector<double> scores;
            for (const auto* p : labeled) {
                if (p->post.toxicity) {
                    scored.push_back(p);
                    scores.push_back(*p->post.toxicity);
                }
            }
            if (scores.empty()) throw DataError("toxicity delta: no posts carry toxicity scores");
            ToxicityClusters clusters = fit_toxicity_clusters(scores, cfg.toxicity_clusters);
            out.toxicity = clusters;
            for (int c = 0; c < static_cast<int>(clusters.centroids.size()); ++c) {
                std::vector<const LabeledPost*> restricted;
                for (std::size_t i = 0; i < scored.size(); ++i)
                    if (clusters.cluster_of(scores[i]) == c) restricted.push_back(scored[i]);
                out.values.push_back(detail::run_delta_value(ToxicityClusters::label_of(c),
                                                             restricted, cfg, baseline.mean_pct,
                                                             &baseline));
            }
            break;
        }
        case DeltaVariable::Bias: {
            if (!table) throw ConfigError("bias delta requires a bias table");
            for (BiasGroup grp : {BiasGroup::RightBias, BiasGroup::LeftBias}) {
                std::vector<const LabeledPost*> restricted;
                for (const auto* p : labeled) {
                    if (p->matched_domain.empty()) continue;
                    auto rating = table->match(p->matched_domain);
                    if (rating && group_bias(rating->bias) == grp) restricted.push_back(p);
                }
                out.values.push_back(detail::run_delta_value(to_string(grp), restricted, cfg,
                                                             baseline.mean_pct, &baseline));
            }
            break;
        }
    }
    return out;
}

// Drilldown into one matrix cell: per-iteration draw-mean history plus the
// population member ids.
struct Drilldown {
    StratumKey key;
    bool skipped = false;
    std::vector<double> abs_series;
    std::vector<std::string> low_ids;
    std::vector<std::string> high_ids;
};

inline Drilldown stratum_drilldown(const BaselineResult& result, const StratumKey& key) {
    Drilldown d;
    d.key = key;
    auto cell = std::find_if(result.matrix.begin(), result.matrix.end(),
                             [&](const StratumCell& c) { return c.key == key; });
    if (cell == result.matrix.end()) throw AnalysisError("unknown stratum key " + to_string(key));
    if (cell->skipped) {
        d.skipped = true;
        return d;
    }
    const auto& det = result.details.at(key);
    d.abs_series = det.abs_series;
    d.low_ids = det.low_ids;
    d.high_ids = det.high_ids;
    return d;
}

}  // namespace credamp

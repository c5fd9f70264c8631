#include <doctest.h>

#include <cmath>
#include <vector>

#include "credamp/analysis.hpp"
#include "credamp/synth.hpp"

using namespace credamp;

namespace {

std::vector<LabeledPost> labeled_corpus(const SynthConfig& cfg) {
    auto corpus = generate(cfg);
    RatingTable table;
    for (const auto& r : corpus.ratings) table.add(r);
    return label_posts(corpus.posts, table);
}

RatingTable corpus_table(const SynthConfig& cfg) {
    auto corpus = generate(cfg);
    RatingTable table;
    for (const auto& r : corpus.ratings) table.add(r);
    return table;
}

SynthConfig small_config(double gamma, GammaScope scope = GammaScope::All) {
    SynthConfig cfg;
    cfg.n_posts = 8000;
    cfg.low_fraction = 0.25;
    cfg.planted_gamma = gamma;
    cfg.gamma_scope = scope;
    cfg.sigma = 0.8;
    cfg.seed = 20240817;
    return cfg;
}

}  // namespace

TEST_CASE("baseline_analysis recovers a planted uplift") {
    auto posts = labeled_corpus(small_config(1.5));
    AnalyzeConfig cfg;
    cfg.boot.iterations = 400;
    cfg.boot.seed = 1;
    auto res = baseline_analysis(posts, cfg);
    CHECK(std::abs(res.mean_pct - 50.0) < 8.0);
    CHECK(res.positive_share > 95.0);
    CHECK(res.degenerate_iterations == 0);
    CHECK_FALSE(res.low_iteration_warning);
    CHECK(res.matrix.size() <= 16);
}

TEST_CASE("baseline_analysis near-null on identical distributions") {
    auto posts = labeled_corpus(small_config(1.0));
    AnalyzeConfig cfg;
    cfg.boot.iterations = 400;
    cfg.boot.seed = 1;
    auto res = baseline_analysis(posts, cfg);
    CHECK(std::abs(res.mean_pct) < 8.0);
    CHECK(res.interval_pct.lower < res.interval_pct.upper);
}

TEST_CASE("reconstruction: pooled abs_diff equals the m_s-weighted stratum average") {
    auto posts = labeled_corpus(small_config(1.3));
    AnalyzeConfig cfg;
    cfg.boot.iterations = 50;
    cfg.boot.seed = 9;
    auto res = baseline_analysis(posts, cfg);

    // Matched sizes per included stratum, from the population.
    std::vector<double> weights;
    for (const auto& key : res.included_keys) {
        const auto& det = res.details.at(key);
        weights.push_back(static_cast<double>(std::min(det.low_ids.size(), det.high_ids.size())));
    }
    for (const auto& it : res.iterations) {
        double acc = 0.0, tw = 0.0;
        for (std::size_t s = 0; s < it.stratum_draws.size(); ++s) {
            acc += (it.stratum_draws[s].low_mean - it.stratum_draws[s].high_mean) * weights[s];
            tw += weights[s];
        }
        CHECK(it.abs_diff == doctest::Approx(acc / tw).epsilon(1e-10));
    }
}

TEST_CASE("positive_share equals a recount from the stored statistics") {
    auto posts = labeled_corpus(small_config(1.1));
    AnalyzeConfig cfg;
    cfg.boot.iterations = 300;
    cfg.boot.seed = 5;
    auto res = baseline_analysis(posts, cfg);
    std::size_t pos = 0;
    for (const auto& it : res.iterations)
        if (it.abs_diff > 0.0) ++pos;
    CHECK(res.positive_share ==
          doctest::Approx(100.0 * pos / static_cast<double>(res.iterations.size())));
}

TEST_CASE("stratified_delta: verified-only planted uplift shows up in the right value") {
    auto scfg = small_config(2.0, GammaScope::VerifiedOnly);
    scfg.n_posts = 20000;
    auto posts = labeled_corpus(scfg);
    AnalyzeConfig cfg;
    cfg.boot.iterations = 300;
    cfg.boot.seed = 3;
    auto baseline = baseline_analysis(posts, cfg);
    auto delta = stratified_delta(posts, DeltaVariable::Verified, cfg, baseline);

    REQUIRE(delta.values.size() == 2);
    const auto& v_true = delta.values[0];
    const auto& v_false = delta.values[1];
    REQUIRE(v_true.value == "true");
    REQUIRE(v_true.estimable);
    REQUIRE(v_false.estimable);
    CHECK(std::abs(v_true.amplification_pct - 100.0) < 15.0);
    CHECK(std::abs(v_false.amplification_pct) < 8.0);
    CHECK(v_true.delta_pp == v_true.amplification_pct - baseline.mean_pct);  // exact identity
    CHECK(v_false.delta_pp == v_false.amplification_pct - baseline.mean_pct);
}

TEST_CASE("stratified_delta: value with an empty group is marked not estimable") {
    auto posts = labeled_corpus(small_config(1.2));
    for (auto& p : posts) p.post.verified = false;  // no verified posts at all
    AnalyzeConfig cfg;
    cfg.boot.iterations = 100;
    cfg.boot.seed = 2;
    auto baseline = baseline_analysis(posts, cfg);
    auto delta = stratified_delta(posts, DeltaVariable::Verified, cfg, baseline);
    REQUIRE(delta.values.size() == 2);
    CHECK_FALSE(delta.values[0].estimable);  // "true"
    CHECK(delta.values[1].estimable);
}

TEST_CASE("restriction covering all posts reproduces the baseline bit-identically") {
    auto posts = labeled_corpus(small_config(1.4));
    for (auto& p : posts) p.post.verified = true;
    AnalyzeConfig cfg;
    cfg.boot.iterations = 200;
    cfg.boot.seed = 77;
    auto baseline = baseline_analysis(posts, cfg);
    auto delta = stratified_delta(posts, DeltaVariable::Verified, cfg, baseline);
    REQUIRE(delta.values[0].estimable);
    CHECK(delta.values[0].amplification_pct == baseline.mean_pct);
    CHECK(delta.values[0].delta_pp == 0.0);
}

TEST_CASE("stratified_delta over bias groups uses the domain table") {
    auto scfg = small_config(1.0);
    auto posts = labeled_corpus(scfg);
    auto table = corpus_table(scfg);
    AnalyzeConfig cfg;
    cfg.boot.iterations = 120;
    cfg.boot.seed = 4;
    auto baseline = baseline_analysis(posts, cfg);
    auto delta = stratified_delta(posts, DeltaVariable::Bias, cfg, baseline, &table);
    REQUIRE(delta.values.size() == 2);
    CHECK(delta.values[0].value == "right-bias");
    CHECK(delta.values[1].value == "left-bias");
    CHECK(delta.values[0].estimable);
    CHECK(delta.values[1].estimable);
}

TEST_CASE("stratified_delta over toxicity clusters recovers the generator's groups") {
    auto posts = labeled_corpus(small_config(1.0));
    AnalyzeConfig cfg;
    cfg.boot.iterations = 120;
    cfg.boot.seed = 4;
    auto baseline = baseline_analysis(posts, cfg);
    auto delta = stratified_delta(posts, DeltaVariable::Toxicity, cfg, baseline);
    REQUIRE(delta.toxicity);
    REQUIRE(delta.toxicity->centroids.size() == 3);
    CHECK(delta.toxicity->centroids[0] == doctest::Approx(0.1).epsilon(0.2));
    CHECK(delta.toxicity->centroids[2] == doctest::Approx(0.9).epsilon(0.05));
    REQUIRE(delta.values.size() == 3);
    CHECK(delta.values[0].value == "low");
    CHECK(delta.values[2].value == "high");
}

TEST_CASE("stratum_drilldown returns series and members; unknown key errors") {
    auto posts = labeled_corpus(small_config(1.2));
    AnalyzeConfig cfg;
    cfg.boot.iterations = 80;
    cfg.boot.seed = 8;
    auto res = baseline_analysis(posts, cfg);
    REQUIRE_FALSE(res.included_keys.empty());

    auto d = stratum_drilldown(res, res.included_keys.front());
    CHECK_FALSE(d.skipped);
    CHECK(d.abs_series.size() == res.iterations.size());
    CHECK_FALSE(d.low_ids.empty());
    CHECK_FALSE(d.high_ids.empty());

    CHECK_THROWS_AS(stratum_drilldown(res, StratumKey{9, 9, -1}), AnalysisError);
}

TEST_CASE("stratum_drilldown: per-stratum planted uplift is visible in cell (3,3)") {
    SynthConfig cfg;
    cfg.n_posts = 32000;
    cfg.low_fraction = 0.25;
    cfg.gamma_scope = GammaScope::PerStratum;
    cfg.stratum_gamma[{3, 3}] = 2.0;
    cfg.sigma = 0.6;
    cfg.seed = 11;
    auto posts = labeled_corpus(cfg);

    AnalyzeConfig acfg;
    acfg.boot.iterations = 200;
    acfg.boot.seed = 12;
    auto res = baseline_analysis(posts, acfg);

    for (const auto& cell : res.matrix) {
        if (cell.skipped) continue;
        if (cell.key == StratumKey{3, 3, -1}) {
            CHECK(std::abs(cell.mean_pct_diff - 100.0) < 15.0);
        } else {
            CHECK(std::abs(cell.mean_pct_diff) < 12.0);
        }
    }
}

TEST_CASE("analysis errors: no labeled posts") {
    std::vector<LabeledPost> posts(3);
    AnalyzeConfig cfg;
    CHECK_THROWS_AS(baseline_analysis(posts, cfg), AnalysisError);
}

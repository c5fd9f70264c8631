#include <doctest.h>

#include <cmath>
#include <sstream>

#include "credamp/ingest.hpp"
#include "credamp/synth.hpp"

using namespace credamp;

TEST_CASE("generate is deterministic for a fixed seed and differs across seeds") {
    SynthConfig cfg;
    cfg.n_posts = 200;
    auto a = generate(cfg);
    auto b = generate(cfg);
    REQUIRE(a.posts.size() == b.posts.size());
    for (std::size_t i = 0; i < a.posts.size(); ++i) {
        CHECK(a.posts[i].impressions == b.posts[i].impressions);
        CHECK(a.posts[i].followers == b.posts[i].followers);
        CHECK(a.posts[i].urls == b.posts[i].urls);
    }
    cfg.seed = 2;
    auto c = generate(cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.posts.size(); ++i)
        if (a.posts[i].impressions != c.posts[i].impressions) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("generated posts round-trip through the JSONL parser") {
    SynthConfig cfg;
    cfg.n_posts = 300;
    cfg.seed = 5;
    auto corpus = generate(cfg);

    std::ostringstream out;
    write_posts_jsonl(corpus.posts, out);
    std::istringstream in(out.str());
    auto parsed = parse_posts(in);
    CHECK(parsed.skipped == 0);
    REQUIRE(parsed.posts.size() == corpus.posts.size());
    for (std::size_t i = 0; i < parsed.posts.size(); ++i) {
        const auto& p = parsed.posts[i];
        const auto& q = corpus.posts[i];
        CHECK(p.id == q.id);
        CHECK(p.created_at == q.created_at);
        CHECK(p.impressions == q.impressions);
        CHECK(p.likes == q.likes);
        CHECK(p.retweets == q.retweets);
        CHECK(p.replies == q.replies);
        CHECK(p.quotes == q.quotes);
        CHECK(p.followers == q.followers);
        CHECK(p.verified == q.verified);
        CHECK(p.urls == q.urls);
        CHECK(p.topic == q.topic);
        REQUIRE(p.toxicity.has_value());
        CHECK(*p.toxicity == doctest::Approx(*q.toxicity).epsilon(1e-12));
    }
}

TEST_CASE("rating CSVs round-trip through the loaders") {
    SynthConfig cfg;
    cfg.n_posts = 10;
    auto corpus = generate(cfg);

    std::ostringstream cred, bias;
    write_credibility_csv(corpus.ratings, cred);
    write_bias_csv(corpus.ratings, bias);

    std::istringstream cred_in(cred.str());
    RatingTable table = load_credibility_csv(cred_in);
    std::istringstream bias_in(bias.str());
    load_bias_csv(bias_in, table);

    for (const auto& r : corpus.ratings) {
        auto m = table.match(r.domain);
        REQUIRE(m.has_value());
        CHECK(m->credibility == doctest::Approx(r.credibility).epsilon(1e-12));
        CHECK(m->bias == r.bias);
    }
}

TEST_CASE("every post links exactly one pool domain; labels split by pool") {
    SynthConfig cfg;
    cfg.n_posts = 1000;
    cfg.low_fraction = 0.3;
    cfg.seed = 9;
    auto corpus = generate(cfg);
    RatingTable table;
    for (const auto& r : corpus.ratings) table.add(r);
    auto labeled = label_posts(corpus.posts, table);

    std::size_t low = 0, high = 0;
    for (const auto& lp : labeled) {
        REQUIRE(lp.post.urls.size() == 1);
        REQUIRE(lp.label != CredibilityLabel::Unlabeled);
        CHECK_FALSE(lp.mixed);
        if (lp.label == CredibilityLabel::Low)
            ++low;
        else
            ++high;
    }
    // Binomial(1000, 0.3): five sigma is about 72.
    CHECK(std::abs(static_cast<double>(low) - 300.0) < 75.0);
    CHECK(low + high == labeled.size());
}

TEST_CASE("gamma=1 leaves the low and high impression distributions aligned") {
    SynthConfig cfg;
    cfg.n_posts = 20000;
    cfg.low_fraction = 0.5;
    cfg.planted_gamma = 1.0;
    cfg.seed = 3;
    auto corpus = generate(cfg);
    RatingTable table;
    for (const auto& r : corpus.ratings) table.add(r);
    auto labeled = label_posts(corpus.posts, table);

    double sum_low = 0.0, sum_high = 0.0;
    std::size_t n_low = 0, n_high = 0;
    for (const auto& lp : labeled) {
        if (lp.label == CredibilityLabel::Low) {
            sum_low += static_cast<double>(lp.post.impressions);
            ++n_low;
        } else {
            sum_high += static_cast<double>(lp.post.impressions);
            ++n_high;
        }
    }
    double rel = (sum_low / n_low) / (sum_high / n_high) - 1.0;
    CHECK(std::abs(rel) < 0.1);
}

TEST_CASE("ground truth algebra per scope") {
    SynthConfig cfg;
    cfg.n_posts = 1;  // the truth block depends only on the knobs
    cfg.planted_gamma = 1.5;
    auto truth = [&] { return generate(cfg).truth; };

    cfg.gamma_scope = GammaScope::All;
    CHECK(truth().expected_baseline_pct == doctest::Approx(50.0));

    cfg.gamma_scope = GammaScope::VerifiedOnly;
    cfg.verified_fraction = 0.3;
    auto t = truth();
    CHECK(t.expected_baseline_pct == doctest::Approx(15.0));
    CHECK(t.expected_pct.at("true") == doctest::Approx(50.0));
    CHECK(t.expected_pct.at("false") == 0.0);

    cfg.gamma_scope = GammaScope::ToxicityHighOnly;
    t = truth();
    CHECK(t.expected_pct.at("high") == doctest::Approx(50.0));
    CHECK(t.expected_pct.at("low") == 0.0);

    cfg.gamma_scope = GammaScope::BiasRightOnly;
    t = truth();
    CHECK(t.expected_pct.at("right-bias") == doctest::Approx(50.0));
    CHECK(t.expected_pct.at("left-bias") == 0.0);
}

TEST_CASE("ground truth serializes and parses back") {
    SynthConfig cfg;
    cfg.n_posts = 5;
    cfg.planted_gamma = 1.2;
    cfg.gamma_scope = GammaScope::VerifiedOnly;
    auto corpus = generate(cfg);
    auto j = to_json(corpus.truth);
    auto back = ground_truth_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.gamma == corpus.truth.gamma);
    CHECK(back.scope == corpus.truth.scope);
    CHECK(back.expected_baseline_pct == corpus.truth.expected_baseline_pct);
    CHECK(back.expected_pct == corpus.truth.expected_pct);
}

TEST_CASE("config validation rejects bad knobs") {
    SynthConfig cfg;
    cfg.n_posts = 0;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = {};
    cfg.low_fraction = 1.0;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
    cfg = {};
    cfg.planted_gamma = -0.5;
    CHECK_THROWS_AS(generate(cfg), ConfigError);
}

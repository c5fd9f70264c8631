#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "credamp/ingest.hpp"
#include "credamp/normal.hpp"
#include "credamp/rng.hpp"
#include "credamp/types.hpp"

namespace credamp {

enum class GammaScope { All, VerifiedOnly, ToxicityHighOnly, BiasRightOnly, PerStratum };

inline const char* to_string(GammaScope s) {
    switch (s) {
        case GammaScope::All: return "all";
        case GammaScope::VerifiedOnly: return "verified-only";
        case GammaScope::ToxicityHighOnly: return "toxicity-high-only";
        case GammaScope::BiasRightOnly: return "bias-right-only";
        default: return "per-stratum";
    }
}

inline std::optional<GammaScope> parse_gamma_scope(const std::string& s) {
    if (s == "all") return GammaScope::All;
    if (s == "verified-only") return GammaScope::VerifiedOnly;
    if (s == "toxicity-high-only") return GammaScope::ToxicityHighOnly;
    if (s == "bias-right-only") return GammaScope::BiasRightOnly;
    if (s == "per-stratum") return GammaScope::PerStratum;
    return std::nullopt;
}

struct SynthConfig {
    std::size_t n_posts = 10000;
    double low_fraction = 0.03;
    double mu = 4.0;          // impressions log-normal
    double sigma = 1.0;
    double follower_mu = 6.0;  // followers log-normal
    double follower_sigma = 1.5;
    double planted_gamma = 1.0;  // multiplicative uplift on low-credibility impressions
    GammaScope gamma_scope = GammaScope::All;
    std::map<std::pair<int, int>, double> stratum_gamma;  // PerStratum only
    double engagement_coupling = 0.05;
    double verified_fraction = 0.3;
    std::uint64_t seed = 1;
    std::string topic = "synthetic";

    void validate() const {
        if (n_posts == 0) throw ConfigError("synth: n_posts must be positive");
        if (!(low_fraction > 0.0 && low_fraction < 1.0))
            throw ConfigError("synth: low_fraction must lie in (0,1)");
        if (planted_gamma < 0.0) throw ConfigError("synth: planted_gamma must be >= 0");
        if (sigma < 0.0 || follower_sigma < 0.0) throw ConfigError("synth: sigma must be >= 0");
        if (!(verified_fraction >= 0.0 && verified_fraction <= 1.0))
            throw ConfigError("synth: verified_fraction must lie in [0,1]");
    }
};

struct GroundTruth {
    double gamma = 1.0;
    std::string scope;
    double expected_baseline_pct = 0.0;          // pooled expectation over the low group
    std::map<std::string, double> expected_pct;  // per scope value
};

struct SynthCorpus {
    std::vector<PostRecord> posts;
    std::vector<DomainRating> ratings;
    GroundTruth truth;
};

namespace detail {

struct SynthDomain {
    const char* domain;
    double score;
    BiasLabel bias;
};

// Fictional pools; one third of each pool is right-leaning and one third
// left-leaning so the bias grouping has mass on both sides.
inline const std::vector<SynthDomain>& low_domain_pool() {
    static const std::vector<SynthDomain> pool = {
        {"daily-truth-wire.example", 0.05, BiasLabel::FarRight},
        {"patriot-ledger-news.example", 0.10, BiasLabel::Right},
        {"peoples-voice-report.example", 0.15, BiasLabel::FarLeft},
        {"red-flag-bulletin.example", 0.20, BiasLabel::Left},
        {"miracle-health-times.example", 0.30, BiasLabel::None},
        {"shock-news-today.example", 0.40, BiasLabel::Unknown},
    };
    return pool;
}

inline const std::vector<SynthDomain>& high_domain_pool() {
    static const std::vector<SynthDomain> pool = {
        {"national-chronicle.example", 0.95, BiasLabel::Right},
        {"heartland-gazette.example", 0.90, BiasLabel::Right},
        {"metro-observer.example", 0.85, BiasLabel::Left},
        {"union-daily-press.example", 0.80, BiasLabel::Left},
        {"civic-science-desk.example", 0.70, BiasLabel::None},
        {"evening-standard-times.example", 0.60, BiasLabel::Unknown},
    };
    return pool;
}

}  // namespace detail

// Generates a labeled synthetic corpus with a known planted amplification.
// Impressions are log-normal; engagement is a noisy increasing function of
// the *pre-uplift* impressions, so the planted effect is orthogonal to the
// matching variables and the estimator's target equals 100*(gamma-1).
inline SynthCorpus generate(const SynthConfig& cfg) {
    cfg.validate();
    SynthCorpus corpus;
    corpus.posts.reserve(cfg.n_posts);

    const auto& low_pool = detail::low_domain_pool();
    const auto& high_pool = detail::high_domain_pool();
    for (const auto& d : low_pool)
        corpus.ratings.push_back(DomainRating{d.domain, d.score, d.bias});
    for (const auto& d : high_pool)
        corpus.ratings.push_back(DomainRating{d.domain, d.score, d.bias});

    constexpr std::int64_t kEpochBase = 1672531200;  // 2023-01-01T00:00:00Z
    constexpr double kToxCenters[3] = {0.1, 0.5, 0.9};

    for (std::size_t i = 0; i < cfg.n_posts; ++i) {
        Xoshiro256 rng = substream(cfg.seed, i);
        PostRecord p;
        p.id = "synth-" + std::to_string(i);
        p.created_at = kEpochBase + static_cast<std::int64_t>(i);
        p.topic = cfg.topic;

        const bool is_low = rng.next_double() < cfg.low_fraction;
        p.verified = rng.next_double() < cfg.verified_fraction;
        const int tox_cluster = static_cast<int>(rng.next_below(3));
        p.toxicity = kToxCenters[tox_cluster] + (rng.next_double() - 0.5) * 0.1;

        const auto& pool = is_low ? low_pool : high_pool;
        const auto& dom = pool[rng.next_below(pool.size())];
        p.urls.push_back(std::string("https://www.") + dom.domain + "/p/" + std::to_string(i));

        const double base_impressions = std::exp(cfg.mu + cfg.sigma * norm_inv(rng.next_open()));

        // Engagement is coupled to the latent popularity, not the uplifted
        // impressions, keeping the matching variables exchangeable between
        // groups within strata.
        const double eng_noise = std::exp(0.25 * norm_inv(rng.next_open()));
        std::int64_t engagement = static_cast<std::int64_t>(
            std::llround(cfg.engagement_coupling * std::pow(base_impressions, 0.7) * eng_noise));
        p.followers = std::llround(std::exp(cfg.follower_mu + cfg.follower_sigma * norm_inv(rng.next_open())));

        double gamma_eff = 1.0;
        if (is_low) {
            switch (cfg.gamma_scope) {
                case GammaScope::All:
                    gamma_eff = cfg.planted_gamma;
                    break;
                case GammaScope::VerifiedOnly:
                    gamma_eff = p.verified ? cfg.planted_gamma : 1.0;
                    break;
                case GammaScope::ToxicityHighOnly:
                    gamma_eff = tox_cluster == 2 ? cfg.planted_gamma : 1.0;
                    break;
                case GammaScope::BiasRightOnly:
                    gamma_eff = (dom.bias == BiasLabel::Right || dom.bias == BiasLabel::FarRight)
                                    ? cfg.planted_gamma
                                    : 1.0;
                    break;
                case GammaScope::PerStratum:
                    gamma_eff = 1.0;  // resolved below from the structured cell
                    break;
            }
        }

        if (cfg.gamma_scope == GammaScope::PerStratum) {
            // Structured mode: quartile groups are planted directly so the
            // quantile bins recover them, making per-cell uplift testable.
            const int cell = static_cast<int>(i % 16);
            const int e_grp = cell % 4, f_grp = cell / 4;
            engagement = static_cast<std::int64_t>(e_grp) * 10000 + 1 +
                         static_cast<std::int64_t>(rng.next_below(9000));
            p.followers = static_cast<std::int64_t>(f_grp) * 1000000 + 1 +
                          static_cast<std::int64_t>(rng.next_below(900000));
            if (is_low) {
                auto it = cfg.stratum_gamma.find({e_grp, f_grp});
                gamma_eff = it != cfg.stratum_gamma.end() ? it->second : 1.0;
            }
        }

        p.impressions = std::llround(base_impressions * gamma_eff);
        p.likes = engagement / 2;
        p.retweets = engagement / 4;
        p.replies = (engagement * 3) / 20;
        p.quotes = engagement - p.likes - p.retweets - p.replies;

        corpus.posts.push_back(std::move(p));
    }

    auto& t = corpus.truth;
    t.gamma = cfg.planted_gamma;
    t.scope = to_string(cfg.gamma_scope);
    const double uplift = 100.0 * (cfg.planted_gamma - 1.0);
    switch (cfg.gamma_scope) {
        case GammaScope::All:
            t.expected_baseline_pct = uplift;
            t.expected_pct["baseline"] = uplift;
            break;
        case GammaScope::VerifiedOnly:
            t.expected_baseline_pct = cfg.verified_fraction * uplift;
            t.expected_pct["true"] = uplift;
            t.expected_pct["false"] = 0.0;
            break;
        case GammaScope::ToxicityHighOnly:
            t.expected_baseline_pct = uplift / 3.0;
            t.expected_pct["high"] = uplift;
            t.expected_pct["medium"] = 0.0;
            t.expected_pct["low"] = 0.0;
            break;
        case GammaScope::BiasRightOnly:
            t.expected_baseline_pct = uplift / 3.0;  // one third of the low pool is right-leaning
            t.expected_pct["right-bias"] = uplift;
            t.expected_pct["left-bias"] = 0.0;
            break;
        case GammaScope::PerStratum: {
            double sum = 0.0;
            for (int e = 0; e < 4; ++e) {
                for (int f = 0; f < 4; ++f) {
                    auto it = cfg.stratum_gamma.find({e, f});
                    double g = it != cfg.stratum_gamma.end() ? it->second : 1.0;
                    t.expected_pct["(" + std::to_string(e) + "," + std::to_string(f) + ")"] =
                        100.0 * (g - 1.0);
                    sum += 100.0 * (g - 1.0);
                }
            }
            t.expected_baseline_pct = sum / 16.0;
            break;
        }
    }
    return corpus;
}

// --- file emission; the formats mirror what ingest consumes ---

inline void write_posts_jsonl(const std::vector<PostRecord>& posts, std::ostream& out,
                              const FieldMap& fm = {}) {
    for (const auto& p : posts) {
        nlohmann::ordered_json j;
        j[fm.id] = p.id;
        j[fm.created_at] = p.created_at;
        j[fm.impressions] = p.impressions;
        j[fm.likes] = p.likes;
        j[fm.retweets] = p.retweets;
        j[fm.replies] = p.replies;
        j[fm.quotes] = p.quotes;
        j[fm.followers] = p.followers;
        j[fm.verified] = p.verified;
        if (p.toxicity) j[fm.toxicity] = *p.toxicity;
        j[fm.urls] = p.urls;
        if (!p.topic.empty()) j[fm.topic] = p.topic;
        out << j.dump() << '\n';
    }
}

inline void write_credibility_csv(const std::vector<DomainRating>& ratings, std::ostream& out) {
    out << "domain,score\n";
    char buf[64];
    for (const auto& r : ratings) {
        std::snprintf(buf, sizeof(buf), "%.10g", r.credibility);
        out << r.domain << ',' << buf << '\n';
    }
}

inline void write_bias_csv(const std::vector<DomainRating>& ratings, std::ostream& out) {
    out << "domain,bias\n";
    for (const auto& r : ratings) out << r.domain << ',' << to_string(r.bias) << '\n';
}

inline nlohmann::ordered_json to_json(const GroundTruth& t) {
    nlohmann::ordered_json j;
    j["gamma"] = t.gamma;
    j["scope"] = t.scope;
    j["expected_baseline_pct"] = t.expected_baseline_pct;
    j["expected_pct"] = t.expected_pct;
    return j;
}

inline GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    GroundTruth t;
    t.gamma = j.at("gamma").get<double>();
    t.scope = j.at("scope").get<std::string>();
    t.expected_baseline_pct = j.at("expected_baseline_pct").get<double>();
    for (const auto& [k, v] : j.at("expected_pct").items()) t.expected_pct[k] = v.get<double>();
    return t;
}

inline void write_corpus(const SynthCorpus& corpus, const std::string& dir) {
    auto open = [](const std::string& path) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw DataError("cannot write " + path);
        return f;
    };
    auto posts = open(dir + "/posts.jsonl");
    write_posts_jsonl(corpus.posts, posts);
    auto cred = open(dir + "/credibility.csv");
    write_credibility_csv(corpus.ratings, cred);
    auto bias = open(dir + "/bias.csv");
    write_bias_csv(corpus.ratings, bias);
    auto truth = open(dir + "/ground_truth.json");
    truth << to_json(corpus.truth).dump(2) << '\n';
}

}  // namespace credamp

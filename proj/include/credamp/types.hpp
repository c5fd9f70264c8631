#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace credamp {

// Exit-code aligned error categories: usage/config -> 1, data -> 2, analysis -> 3.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One social-media post with exposure, engagement, author and annotation attributes.
struct PostRecord {
    std::string id;
    std::int64_t created_at = 0;  // epoch seconds, UTC
    std::int64_t impressions = 0;
    std::int64_t likes = 0;
    std::int64_t retweets = 0;
    std::int64_t replies = 0;
    std::int64_t quotes = 0;
    std::int64_t followers = 0;
    bool verified = false;
    std::optional<double> toxicity;  // in [0,1] when present
    std::vector<std::string> urls;
    std::string topic;
};

enum class CredibilityLabel { Low, High, Unlabeled };

enum class BiasLabel { FarLeft, Left, None, Right, FarRight, Unknown };

enum class BiasGroup { RightBias, LeftBias, Excluded };

// Normalized registrable domain with a credibility score and optional bias label.
struct DomainRating {
    std::string domain;       // lowercase, no scheme/path/port/leading "www."
    double credibility = 0.0; // in [0,1]
    BiasLabel bias = BiasLabel::Unknown;
};

inline std::int64_t compute_engagement(const PostRecord& p) {
    return p.likes + p.retweets + p.replies + p.quotes;
}

// A post after credibility labeling, carrying the derived fields the
// analysis stages need.
struct LabeledPost {
    PostRecord post;
    CredibilityLabel label = CredibilityLabel::Unlabeled;
    std::string matched_domain;  // domain whose score decided the label ("" if none)
    double matched_score = -1.0;
    bool mixed = false;  // matched both a low- and a high-credibility domain
    std::int64_t engagement = 0;
};

// Cell identifier of the matching design.
struct StratumKey {
    int engagement_bin = 0;
    int follower_bin = 0;
    int extra = -1;  // optional extra-variable value; -1 = unused

    friend auto operator<=>(const StratumKey&, const StratumKey&) = default;
};

inline std::string to_string(const StratumKey& k) {
    std::string s = "(" + std::to_string(k.engagement_bin) + "," + std::to_string(k.follower_bin);
    if (k.extra >= 0) s += "," + std::to_string(k.extra);
    return s + ")";
}

inline const char* to_string(CredibilityLabel l) {
    switch (l) {
        case CredibilityLabel::Low: return "low";
        case CredibilityLabel::High: return "high";
        default: return "unlabeled";
    }
}

inline const char* to_string(BiasLabel b) {
    switch (b) {
        case BiasLabel::FarLeft: return "far-left";
        case BiasLabel::Left: return "left";
        case BiasLabel::None: return "none";
        case BiasLabel::Right: return "right";
        case BiasLabel::FarRight: return "far-right";
        default: return "unknown";
    }
}

inline std::optional<BiasLabel> parse_bias_label(const std::string& s) {
    if (s == "far-left") return BiasLabel::FarLeft;
    if (s == "left") return BiasLabel::Left;
    if (s == "none" || s == "no bias") return BiasLabel::None;
    if (s == "right") return BiasLabel::Right;
    if (s == "far-right") return BiasLabel::FarRight;
    if (s == "unknown" || s == "-1") return BiasLabel::Unknown;
    return std::nullopt;
}

}  // namespace credamp

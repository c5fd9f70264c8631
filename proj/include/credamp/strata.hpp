#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "credamp/kmeans1d.hpp"
#include "credamp/quantile.hpp"
#include "credamp/types.hpp"

namespace credamp {

struct BaseStrata {
    BinEdges engagement_edges;
    BinEdges follower_edges;
    std::vector<StratumKey> keys;  // parallel to the input posts
};

// Quantile bins for engagement and followers, computed once over the union of
// the Low and High posts, then applied to every post.
inline BaseStrata assign_base_strata(std::span<const LabeledPost* const> posts, int bins = 4) {
    bool has_low = false, has_high = false;
    for (const auto* p : posts) {
        if (p->label == CredibilityLabel::Low) has_low = true;
        if (p->label == CredibilityLabel::High) has_high = true;
    }
    if (!has_low || !has_high)
        throw AnalysisError("base strata require at least one low- and one high-credibility post");

    std::vector<double> eng, fol;
    eng.reserve(posts.size());
    fol.reserve(posts.size());
    for (const auto* p : posts) {
        eng.push_back(static_cast<double>(p->engagement));
        fol.push_back(static_cast<double>(p->post.followers));
    }

    auto eb = quantile_bins(eng, bins);
    auto fb = quantile_bins(fol, bins);

    BaseStrata out;
    out.engagement_edges = eb.edges;
    out.follower_edges = fb.edges;
    out.keys.resize(posts.size());
    for (std::size_t i = 0; i < posts.size(); ++i)
        out.keys[i] = StratumKey{eb.assignment[i], fb.assignment[i], -1};
    return out;
}

// Same, but reusing externally computed edges (global-bin reuse for
// sensitivity analysis of restricted runs).
inline BaseStrata assign_base_strata_with_edges(std::span<const LabeledPost* const> posts,
                                                const BinEdges& eng_edges,
                                                const BinEdges& fol_edges) {
    BaseStrata out;
    out.engagement_edges = eng_edges;
    out.follower_edges = fol_edges;
    out.keys.resize(posts.size());
    for (std::size_t i = 0; i < posts.size(); ++i) {
        out.keys[i] = StratumKey{eng_edges.bin_of(static_cast<double>(posts[i]->engagement)),
                                 fol_edges.bin_of(static_cast<double>(posts[i]->post.followers)), -1};
    }
    return out;
}

inline BiasGroup group_bias(BiasLabel bias) {
    switch (bias) {
        case BiasLabel::Right:
        case BiasLabel::FarRight:
            return BiasGroup::RightBias;
        case BiasLabel::Left:
        case BiasLabel::FarLeft:
            return BiasGroup::LeftBias;
        default:
            return BiasGroup::Excluded;
    }
}

inline const char* to_string(BiasGroup g) {
    switch (g) {
        case BiasGroup::RightBias: return "right-bias";
        case BiasGroup::LeftBias: return "left-bias";
        default: return "excluded";
    }
}

// Toxicity clusters: ascending centroids with labels {low, medium, high}.
struct ToxicityClusters {
    std::vector<double> centroids;  // ascending

    int cluster_of(double score) const {
        int best = 0;
        double best_d = std::abs(score - centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            double d = std::abs(score - centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        return best;
    }

    static const char* label_of(int cluster) {
        switch (cluster) {
            case 0: return "low";
            case 1: return "medium";
            default: return "high";
        }
    }
};

// Fits toxicity clusters over the given scores (combined Low+High posts).
// Falls back to a distinct-value partition when fewer than k distinct scores
// exist.
inline ToxicityClusters fit_toxicity_clusters(std::span<const double> scores, int k = 3) {
    if (scores.empty()) throw DataError("toxicity clustering: no scores");
    try {
        auto km = kmeans_1d(scores, k);
        return ToxicityClusters{km.centroids};
    } catch (const DataError&) {
        std::vector<double> distinct(scores.begin(), scores.end());
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        return ToxicityClusters{distinct};
    }
}

}  // namespace credamp

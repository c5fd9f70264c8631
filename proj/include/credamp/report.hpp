#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "credamp/analysis.hpp"
#include "credamp/types.hpp"

namespace credamp {

inline constexpr const char* kToolVersion = "0.1.0";

// FNV-1a 64, used as the dataset audit digest.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xCBF29CE484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string digest_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open for digest: " + path);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        h = fnv1a64(buf, static_cast<std::size_t>(in.gcount()), h);
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

struct DomainCount {
    std::string domain;
    std::size_t count = 0;
};

struct LabelingSummary {
    std::size_t n_low = 0;
    std::size_t n_high = 0;
    std::size_t n_unlabeled = 0;
    std::size_t n_mixed = 0;
    std::size_t skipped_records = 0;
    std::vector<DomainCount> top_low_domains;   // at most 5
    std::vector<DomainCount> top_high_domains;  // at most 5
};

inline LabelingSummary summarize_labeling(const std::vector<LabeledPost>& posts,
                                          std::size_t skipped_records = 0) {
    LabelingSummary s;
    s.skipped_records = skipped_records;
    std::map<std::string, std::size_t> low_counts, high_counts;
    for (const auto& p : posts) {
        switch (p.label) {
            case CredibilityLabel::Low:
                ++s.n_low;
                ++low_counts[p.matched_domain];
                break;
            case CredibilityLabel::High:
                ++s.n_high;
                ++high_counts[p.matched_domain];
                break;
            default:
                ++s.n_unlabeled;
        }
        if (p.mixed) ++s.n_mixed;
    }
    auto top5 = [](const std::map<std::string, std::size_t>& counts) {
        std::vector<DomainCount> v;
        for (const auto& [d, c] : counts) v.push_back({d, c});
        std::sort(v.begin(), v.end(), [](const DomainCount& a, const DomainCount& b) {
            return a.count != b.count ? a.count > b.count : a.domain < b.domain;
        });
        if (v.size() > 5) v.resize(5);
        return v;
    };
    s.top_low_domains = top5(low_counts);
    s.top_high_domains = top5(high_counts);
    return s;
}

// Full analysis output: self-describing, reproducible from its own metadata.
struct AmplificationReport {
    std::uint64_t seed = 0;
    nlohmann::ordered_json config_echo;  // every knob needed to re-run
    std::string dataset_digest;
    LabelingSummary labeling;
    BaselineResult baseline;
    std::vector<DeltaResult> deltas;
};

namespace detail {

inline nlohmann::ordered_json interval_json(const BcaInterval& ci) {
    return {{"point_estimate", ci.point_estimate}, {"lower", ci.lower},   {"upper", ci.upper},
            {"z0", ci.z0},                         {"accel", ci.accel},   {"level", ci.level}};
}

inline nlohmann::ordered_json domain_counts_json(const std::vector<DomainCount>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& dc : v) arr.push_back({{"domain", dc.domain}, {"count", dc.count}});
    return arr;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const AmplificationReport& r) {
    nlohmann::ordered_json j;
    j["metadata"] = {{"tool", "credamp"},
                     {"version", kToolVersion},
                     {"seed", r.seed},
                     {"config", r.config_echo},
                     {"dataset_digest", r.dataset_digest}};

    j["labeling"] = {{"n_low", r.labeling.n_low},
                     {"n_high", r.labeling.n_high},
                     {"n_unlabeled", r.labeling.n_unlabeled},
                     {"n_mixed", r.labeling.n_mixed},
                     {"skipped_records", r.labeling.skipped_records},
                     {"top_low_domains", detail::domain_counts_json(r.labeling.top_low_domains)},
                     {"top_high_domains", detail::domain_counts_json(r.labeling.top_high_domains)}};

    const auto& b = r.baseline;
    nlohmann::ordered_json jb;
    jb["observed_pct"] = b.observed_pct;
    jb["observed_abs"] = b.observed_abs;
    jb["mean_pct"] = b.mean_pct;
    jb["median_pct"] = b.median_pct;
    jb["mean_abs"] = b.mean_abs;
    jb["median_abs"] = b.median_abs;
    jb["positive_share"] = b.positive_share;
    jb["interval_pct"] = detail::interval_json(b.interval_pct);
    jb["interval_abs"] = detail::interval_json(b.interval_abs);
    jb["n_low"] = b.n_low;
    jb["n_high"] = b.n_high;
    jb["usable_iterations"] = b.iterations.size();
    jb["degenerate_iterations"] = b.degenerate_iterations;
    jb["low_iteration_warning"] = b.low_iteration_warning;

    nlohmann::ordered_json skipped = nlohmann::ordered_json::array();
    for (const auto& k : b.skipped_strata) skipped.push_back(to_string(k));
    jb["skipped_strata"] = skipped;

    nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
    for (const auto& c : b.matrix) {
        nlohmann::ordered_json cell;
        cell["engagement_bin"] = c.key.engagement_bin;
        cell["follower_bin"] = c.key.follower_bin;
        cell["n_low"] = c.n_low;
        cell["n_high"] = c.n_high;
        cell["skipped"] = c.skipped;
        if (!c.skipped) {
            cell["mean_abs_diff"] = c.mean_abs_diff;
            cell["mean_pct_diff"] = c.mean_pct_diff;
        }
        matrix.push_back(cell);
    }
    jb["stratum_matrix"] = matrix;
    j["baseline"] = jb;

    nlohmann::ordered_json strata;
    strata["engagement_cuts"] = b.engagement_edges.cuts;
    strata["follower_cuts"] = b.follower_edges.cuts;
    for (const auto& d : r.deltas)
        if (d.toxicity) strata["toxicity_centroids"] = d.toxicity->centroids;
    j["strata"] = strata;

    nlohmann::ordered_json deltas = nlohmann::ordered_json::array();
    for (const auto& d : r.deltas) {
        nlohmann::ordered_json jd;
        jd["variable"] = d.variable;
        nlohmann::ordered_json values = nlohmann::ordered_json::array();
        for (const auto& v : d.values) {
            nlohmann::ordered_json jv;
            jv["value"] = v.value;
            jv["estimable"] = v.estimable;
            if (v.estimable) {
                jv["amplification_pct"] = v.amplification_pct;
                jv["delta_pp"] = v.delta_pp;
            } else {
                jv["reason"] = v.reason;
            }
            jv["n_low"] = v.n_low;
            jv["n_high"] = v.n_high;
            values.push_back(jv);
        }
        jd["values"] = values;
        deltas.push_back(jd);
    }
    j["deltas"] = deltas;
    return j;
}

namespace detail {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write report file: " + path);
    return f;
}

}  // namespace detail

inline void emit_json(const AmplificationReport& r, const std::string& path) {
    auto f = detail::open_out(path);
    f << to_json(r).dump(2) << '\n';
    if (!f) throw DataError("write failed: " + path);
}

// CSV bundle: per-iteration distribution, stratum matrix, deltas, labeling.
inline void emit_csv_bundle(const AmplificationReport& r, const std::string& dir) {
    using detail::fmt_double;
    {
        auto f = detail::open_out(dir + "/baseline_distribution.csv");
        f << "iteration,mean_low,mean_high,abs_diff,pct_diff\n";
        for (const auto& it : r.baseline.iterations) {
            f << it.iteration << ',' << fmt_double(it.mean_low) << ',' << fmt_double(it.mean_high)
              << ',' << fmt_double(it.abs_diff) << ',' << fmt_double(it.pct_diff) << '\n';
        }
    }
    {
        auto f = detail::open_out(dir + "/stratum_matrix.csv");
        f << "engagement_bin,follower_bin,n_low,n_high,skipped,mean_abs_diff,mean_pct_diff\n";
        for (const auto& c : r.baseline.matrix) {
            f << c.key.engagement_bin << ',' << c.key.follower_bin << ',' << c.n_low << ','
              << c.n_high << ',' << (c.skipped ? "true" : "false") << ',';
            if (c.skipped)
                f << ",\n";
            else
                f << fmt_double(c.mean_abs_diff) << ',' << fmt_double(c.mean_pct_diff) << '\n';
        }
    }
    {
        auto f = detail::open_out(dir + "/deltas.csv");
        f << "variable,value,estimable,amplification_pct,delta_pp,n_low,n_high\n";
        for (const auto& d : r.deltas) {
            for (const auto& v : d.values) {
                f << d.variable << ',' << v.value << ',' << (v.estimable ? "true" : "false") << ',';
                if (v.estimable)
                    f << fmt_double(v.amplification_pct) << ',' << fmt_double(v.delta_pp);
                else
                    f << ',';
                f << ',' << v.n_low << ',' << v.n_high << '\n';
            }
        }
    }
    {
        auto f = detail::open_out(dir + "/labeling_summary.csv");
        f << "metric,value\n";
        f << "n_low," << r.labeling.n_low << '\n';
        f << "n_high," << r.labeling.n_high << '\n';
        f << "n_unlabeled," << r.labeling.n_unlabeled << '\n';
        f << "n_mixed," << r.labeling.n_mixed << '\n';
        f << "skipped_records," << r.labeling.skipped_records << '\n';
        for (const auto& dc : r.labeling.top_low_domains)
            f << "top_low_domain:" << dc.domain << ',' << dc.count << '\n';
        for (const auto& dc : r.labeling.top_high_domains)
            f << "top_high_domain:" << dc.domain << ',' << dc.count << '\n';
    }
}

}  // namespace credamp

#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "credamp/types.hpp"
#include "credamp/url.hpp"

namespace credamp {

// Maps input field names to PostRecord fields. Defaults follow the common
// API export naming.
struct FieldMap {
    std::string id = "id";
    std::string created_at = "created_at";
    std::string impressions = "impression_count";
    std::string likes = "like_count";
    std::string retweets = "retweet_count";
    std::string replies = "reply_count";
    std::string quotes = "quote_count";
    std::string followers = "followers_count";
    std::string verified = "verified";
    std::string toxicity = "toxicity";
    std::string urls = "urls";
    std::string topic = "topic";
};

struct ParseResult {
    std::vector<PostRecord> posts;
    std::size_t skipped = 0;
};

namespace detail {

inline std::optional<std::int64_t> get_count(const nlohmann::json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_number()) return static_cast<std::int64_t>(it->get<double>());
    if (it->is_string()) {
        try {
            return std::stoll(it->get<std::string>());
        } catch (...) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// Accepts epoch seconds or ISO-8601 "YYYY-MM-DDThh:mm:ss[Z]".
inline std::int64_t parse_timestamp(const nlohmann::json& v) {
    if (v.is_number()) return static_cast<std::int64_t>(v.get<double>());
    if (!v.is_string()) return 0;
    const std::string s = v.get<std::string>();
    int y, mo, d, h, mi, sec;
    if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &sec) == 6) {
        // days since epoch, civil-from-days (Howard Hinnant's algorithm)
        std::int64_t yy = y - (mo <= 2);
        std::int64_t era = (yy >= 0 ? yy : yy - 399) / 400;
        unsigned yoe = static_cast<unsigned>(yy - era * 400);
        unsigned doy = (153u * (mo + (mo > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        std::int64_t days = era * 146097 + static_cast<std::int64_t>(doe) - 719468;
        return days * 86400 + h * 3600 + mi * 60 + sec;
    }
    try {
        return std::stoll(s);
    } catch (...) {
        return 0;
    }
}

}  // namespace detail

// Parses one record line. Returns nullopt when the record must be skipped
// (missing required field, negative count, out-of-range toxicity).
inline std::optional<PostRecord> parse_post_line(const std::string& line, const FieldMap& fm) {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;

    PostRecord p;
    auto id_it = j.find(fm.id);
    if (id_it == j.end() || id_it->is_null()) return std::nullopt;
    p.id = id_it->is_string() ? id_it->get<std::string>() : id_it->dump();
    if (p.id.empty()) return std::nullopt;

    auto imp = detail::get_count(j, fm.impressions);
    auto fol = detail::get_count(j, fm.followers);
    if (!imp || !fol || *imp < 0 || *fol < 0) return std::nullopt;
    p.impressions = *imp;
    p.followers = *fol;

    auto opt_count = [&](const std::string& key, std::int64_t& out) -> bool {
        auto v = detail::get_count(j, key);
        if (!v) return true;  // optional, defaults to 0
        if (*v < 0) return false;
        out = *v;
        return true;
    };
    if (!opt_count(fm.likes, p.likes) || !opt_count(fm.retweets, p.retweets) ||
        !opt_count(fm.replies, p.replies) || !opt_count(fm.quotes, p.quotes)) {
        return std::nullopt;
    }

    if (auto it = j.find(fm.created_at); it != j.end() && !it->is_null())
        p.created_at = detail::parse_timestamp(*it);
    if (auto it = j.find(fm.verified); it != j.end() && it->is_boolean())
        p.verified = it->get<bool>();
    if (auto it = j.find(fm.toxicity); it != j.end() && it->is_number()) {
        double t = it->get<double>();
        if (t < 0.0 || t > 1.0) return std::nullopt;
        p.toxicity = t;
    }
    if (auto it = j.find(fm.urls); it != j.end() && it->is_array()) {
        for (const auto& u : *it)
            if (u.is_string()) p.urls.push_back(u.get<std::string>());
    }
    if (auto it = j.find(fm.topic); it != j.end() && it->is_string())
        p.topic = it->get<std::string>();
    return p;
}

// Single-pass, order-preserving ingestion of line-delimited records.
// Malformed records are skipped and counted, never fatal.
inline ParseResult parse_posts(std::istream& in, const FieldMap& fm = {}) {
    if (!in.good() && !in.eof()) throw DataError("unreadable input stream");
    ParseResult r;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (auto p = parse_post_line(line, fm)) {
            r.posts.push_back(std::move(*p));
        } else {
            ++r.skipped;
        }
    }
    return r;
}

inline ParseResult parse_posts_file(const std::string& path, const FieldMap& fm = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open post file: " + path);
    return parse_posts(in, fm);
}

// Domain -> rating lookup with deterministic suffix matching.
class RatingTable {
  public:
    void add(DomainRating r) { table_[r.domain] = std::move(r); }

    // Exact match first; otherwise strip leftmost labels one at a time
    // ("a.b.example.com" -> "b.example.com" -> "example.com").
    std::optional<DomainRating> match(const std::string& domain) const {
        std::string d = domain;
        while (true) {
            if (auto it = table_.find(d); it != table_.end()) return it->second;
            auto dot = d.find('.');
            if (dot == std::string::npos) return std::nullopt;
            d = d.substr(dot + 1);
            if (d.find('.') == std::string::npos) return std::nullopt;  // bare TLD
        }
    }

    void set_bias(const std::string& domain, BiasLabel b) {
        auto it = table_.find(domain);
        if (it != table_.end()) {
            it->second.bias = b;
        } else {
            table_[domain] = DomainRating{domain, -1.0, b};
        }
    }

    std::size_t size() const { return table_.size(); }
    const std::map<std::string, DomainRating>& entries() const { return table_; }

  private:
    std::map<std::string, DomainRating> table_;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

// CSV with header `domain,score`; score decimal in [0,1].
inline RatingTable load_credibility_csv(std::istream& in) {
    RatingTable t;
    std::string line;
    if (!std::getline(in, line)) throw DataError("credibility table: empty file");
    bool first = true;
    do {
        auto cols = detail::split_csv_line(line);
        if (first) {
            first = false;
            if (cols.size() >= 2 && cols[0] == "domain") continue;  // header
        }
        if (line.empty()) continue;
        if (cols.size() < 2) throw DataError("credibility table: bad row: " + line);
        double score;
        try {
            score = std::stod(cols[1]);
        } catch (...) {
            throw DataError("credibility table: bad score: " + line);
        }
        if (score < 0.0 || score > 1.0) throw DataError("credibility table: score out of [0,1]: " + line);
        auto dom = extract_domain(cols[0]);
        if (!dom) throw DataError("credibility table: bad domain: " + cols[0]);
        t.add(DomainRating{*dom, score, BiasLabel::Unknown});
    } while (std::getline(in, line));
    return t;
}

inline RatingTable load_credibility_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open credibility table: " + path);
    return load_credibility_csv(in);
}

// CSV with header `domain,bias`; merged into an existing table.
inline void load_bias_csv(std::istream& in, RatingTable& table) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("bias table: empty file");
    bool first = true;
    do {
        auto cols = detail::split_csv_line(line);
        if (first) {
            first = false;
            if (cols.size() >= 2 && cols[0] == "domain") continue;
        }
        if (line.empty()) continue;
        if (cols.size() < 2) throw DataError("bias table: bad row: " + line);
        auto bias = parse_bias_label(cols[1]);
        if (!bias) throw DataError("bias table: bad bias label: " + cols[1]);
        auto dom = extract_domain(cols[0]);
        if (!dom) throw DataError("bias table: bad domain: " + cols[0]);
        table.set_bias(*dom, *bias);
    } while (std::getline(in, line));
}

inline void load_bias_csv_file(const std::string& path, RatingTable& table) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open bias table: " + path);
    load_bias_csv(in, table);
}

// Labels one post. Low wins over High when a post cites domains of both
// kinds; `mixed` records that case.
inline LabeledPost label_credibility(const PostRecord& post, const RatingTable& table,
                                     double low_max = 0.4, double high_min = 0.6) {
    if (!(0.0 <= low_max && low_max < high_min && high_min <= 1.0))
        throw ConfigError("credibility thresholds must satisfy 0 <= low_max < high_min <= 1");

    LabeledPost lp;
    lp.post = post;
    lp.engagement = compute_engagement(post);

    bool have_min = false, have_max = false;
    DomainRating min_r, max_r;
    for (const auto& url : post.urls) {
        auto dom = extract_domain(url);
        if (!dom) continue;  // post keeps its other URLs
        auto r = table.match(*dom);
        if (!r || r->credibility < 0.0) continue;  // bias-only entry
        if (!have_min || r->credibility < min_r.credibility) {
            min_r = *r;
            have_min = true;
        }
        if (!have_max || r->credibility > max_r.credibility) {
            max_r = *r;
            have_max = true;
        }
    }

    if (have_min && min_r.credibility <= low_max) {
        lp.label = CredibilityLabel::Low;
        lp.matched_domain = min_r.domain;
        lp.matched_score = min_r.credibility;
        lp.mixed = have_max && max_r.credibility >= high_min;
    } else if (have_max && max_r.credibility >= high_min) {
        lp.label = CredibilityLabel::High;
        lp.matched_domain = max_r.domain;
        lp.matched_score = max_r.credibility;
    } else {
        lp.label = CredibilityLabel::Unlabeled;
        if (have_min) {
            lp.matched_domain = min_r.domain;
            lp.matched_score = min_r.credibility;
        }
    }
    return lp;
}

inline std::vector<LabeledPost> label_posts(const std::vector<PostRecord>& posts,
                                            const RatingTable& table, double low_max = 0.4,
                                            double high_min = 0.6) {
    std::vector<LabeledPost> out;
    out.reserve(posts.size());
    for (const auto& p : posts) out.push_back(label_credibility(p, table, low_max, high_min));
    return out;
}

}  // namespace credamp

// credamp command-line tool: label posts by URL-domain credibility, measure
// impression amplification with a matched stratified BCa bootstrap, generate
// synthetic validation corpora, and verify estimates against planted truth.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "credamp/credamp.hpp"

namespace {

using namespace credamp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitAnalysis = 3;

struct LabeledInput {
    std::vector<LabeledPost> posts;
    std::size_t skipped = 0;
    RatingTable table;  // may hold bias-only entries
};

// Reads a file produced by `credamp label` (records carry credamp_* fields).
LabeledInput read_labeled_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open labeled file: " + path);
    LabeledInput out;
    FieldMap fm;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto p = parse_post_line(line, fm);
        if (!p) {
            ++out.skipped;
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(line);
        LabeledPost lp;
        lp.post = std::move(*p);
        lp.engagement = compute_engagement(lp.post);
        std::string label = j.value("credamp_label", "unlabeled");
        lp.label = label == "low"    ? CredibilityLabel::Low
                   : label == "high" ? CredibilityLabel::High
                                     : CredibilityLabel::Unlabeled;
        lp.matched_domain = j.value("credamp_domain", "");
        lp.matched_score = j.value("credamp_score", -1.0);
        lp.mixed = j.value("credamp_mixed", false);
        out.posts.push_back(std::move(lp));
    }
    return out;
}

struct CommonOpts {
    std::string input;
    std::string credibility;
    std::string bias;
    double low_threshold = 0.4;
    double high_threshold = 0.6;
};

LabeledInput load_and_label(const CommonOpts& opts) {
    if (opts.credibility.empty()) {
        // Pre-labeled input from `credamp label`.
        LabeledInput in = read_labeled_file(opts.input);
        if (!opts.bias.empty()) load_bias_csv_file(opts.bias, in.table);
        return in;
    }
    auto parsed = parse_posts_file(opts.input);
    LabeledInput out;
    out.skipped = parsed.skipped;
    out.table = load_credibility_csv_file(opts.credibility);
    if (!opts.bias.empty()) load_bias_csv_file(opts.bias, out.table);
    out.posts = label_posts(parsed.posts, out.table, opts.low_threshold, opts.high_threshold);
    return out;
}

int cmd_label(const CommonOpts& opts, const std::string& output) {
    if (opts.credibility.empty()) throw ConfigError("label requires --credibility");
    auto in = load_and_label(opts);

    std::ofstream out(output, std::ios::binary);
    if (!out) throw DataError("cannot write labeled file: " + output);
    FieldMap fm;
    for (const auto& lp : in.posts) {
        nlohmann::ordered_json j;
        const auto& p = lp.post;
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
        j["credamp_label"] = to_string(lp.label);
        if (!lp.matched_domain.empty()) {
            j["credamp_domain"] = lp.matched_domain;
            j["credamp_score"] = lp.matched_score;
        }
        j["credamp_mixed"] = lp.mixed;
        out << j.dump() << '\n';
    }
    if (!out) throw DataError("write failed: " + output);

    auto summary = summarize_labeling(in.posts, in.skipped);
    nlohmann::ordered_json js;
    js["n_low"] = summary.n_low;
    js["n_high"] = summary.n_high;
    js["n_unlabeled"] = summary.n_unlabeled;
    js["n_mixed"] = summary.n_mixed;
    js["skipped_records"] = summary.skipped_records;
    js["output"] = output;
    std::cout << js.dump(2) << '\n';
    return kExitOk;
}

struct AnalyzeOpts {
    CommonOpts common;
    AnalyzeConfig cfg;
    std::vector<std::string> stratify;
    std::string format = "json";
    std::string output;
};

AmplificationReport run_analysis(const AnalyzeOpts& opts) {
    auto in = load_and_label(opts.common);

    AmplificationReport report;
    report.seed = opts.cfg.boot.seed;
    report.dataset_digest = digest_file(opts.common.input);
    report.labeling = summarize_labeling(in.posts, in.skipped);
    report.baseline = baseline_analysis(in.posts, opts.cfg);

    for (const auto& var : opts.stratify) {
        DeltaVariable v;
        if (var == "toxicity")
            v = DeltaVariable::Toxicity;
        else if (var == "bias")
            v = DeltaVariable::Bias;
        else if (var == "verified")
            v = DeltaVariable::Verified;
        else
            throw ConfigError("unknown stratification variable: " + var);
        report.deltas.push_back(
            stratified_delta(in.posts, v, opts.cfg, report.baseline, &in.table));
    }

    nlohmann::ordered_json echo;
    echo["input"] = opts.common.input;
    echo["credibility"] = opts.common.credibility;
    echo["bias"] = opts.common.bias;
    echo["low_threshold"] = opts.common.low_threshold;
    echo["high_threshold"] = opts.common.high_threshold;
    echo["bins"] = opts.cfg.bins;
    echo["iterations"] = opts.cfg.boot.iterations;
    echo["seed"] = opts.cfg.boot.seed;
    echo["confidence"] = opts.cfg.boot.confidence;
    echo["min_stratum_size"] = opts.cfg.boot.min_stratum_size;
    echo["stratify"] = opts.stratify;
    echo["reuse_global_bins"] = opts.cfg.reuse_global_bins;
    echo["equal_stratum_weights"] = opts.cfg.boot.equal_stratum_weights;
    report.config_echo = echo;
    return report;
}

int cmd_analyze(const AnalyzeOpts& opts) {
    auto report = run_analysis(opts);
    if (opts.format == "json") {
        emit_json(report, opts.output);
    } else if (opts.format == "csv") {
        std::filesystem::create_directories(opts.output);
        emit_csv_bundle(report, opts.output);
    } else {
        throw ConfigError("unknown format: " + opts.format);
    }
    std::cout << "report written to " << opts.output << '\n';
    return kExitOk;
}

int cmd_synth(const SynthConfig& cfg, const std::string& output) {
    std::filesystem::create_directories(output);
    auto corpus = generate(cfg);
    write_corpus(corpus, output);
    std::cout << "corpus written to " << output << " (" << corpus.posts.size() << " posts)\n";
    return kExitOk;
}

int cmd_verify(const std::string& dir, AnalyzeOpts opts, double tolerance) {
    std::ifstream tf(dir + "/ground_truth.json");
    if (!tf) throw DataError("cannot open " + dir + "/ground_truth.json");
    auto truth = ground_truth_from_json(nlohmann::json::parse(tf));

    opts.common.input = dir + "/posts.jsonl";
    opts.common.credibility = dir + "/credibility.csv";
    opts.common.bias = dir + "/bias.csv";
    if (truth.scope == "verified-only")
        opts.stratify = {"verified"};
    else if (truth.scope == "toxicity-high-only")
        opts.stratify = {"toxicity"};
    else if (truth.scope == "bias-right-only")
        opts.stratify = {"bias"};
    else
        opts.stratify.clear();

    auto report = run_analysis(opts);

    bool ok = true;
    auto check = [&](const std::string& name, double got, double want) {
        bool pass = std::abs(got - want) <= tolerance;
        ok = ok && pass;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << ": estimate " << got
                  << ", expected " << want << " (tolerance " << tolerance << ")\n";
    };

    if (opts.stratify.empty()) {
        check("baseline mean_pct", report.baseline.mean_pct, truth.expected_baseline_pct);
    } else {
        for (const auto& d : report.deltas) {
            for (const auto& v : d.values) {
                auto it = truth.expected_pct.find(v.value);
                if (it == truth.expected_pct.end()) continue;
                if (!v.estimable) {
                    std::cout << "[FAIL] " << d.variable << "=" << v.value
                              << ": not estimable (" << v.reason << ")\n";
                    ok = false;
                    continue;
                }
                check(d.variable + "=" + v.value, v.amplification_pct, it->second);
            }
        }
    }
    std::cout << (ok ? "verify: OK\n" : "verify: FAILED\n");
    return ok ? kExitOk : kExitAnalysis;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"credamp: algorithmic amplification audit for low-credibility content"};
    app.require_subcommand(1);

    CommonOpts common;
    AnalyzeOpts analyze;
    SynthConfig synth_cfg;
    std::string label_output = "labeled.jsonl";
    std::string synth_output = "synth_corpus";
    std::string verify_dir;
    double verify_tolerance = 5.0;

    auto add_common = [&](CLI::App* cmd, CommonOpts& o, bool input_required) {
        auto* i = cmd->add_option("--input", o.input, "input post file (JSONL)");
        if (input_required) i->required();
        cmd->add_option("--credibility", o.credibility, "credibility table CSV (domain,score)");
        cmd->add_option("--bias", o.bias, "bias table CSV (domain,bias)");
        cmd->add_option("--low-threshold", o.low_threshold, "low-credibility cutoff")
            ->capture_default_str();
        cmd->add_option("--high-threshold", o.high_threshold, "high-credibility cutoff")
            ->capture_default_str();
    };

    auto* label = app.add_subcommand("label", "ingest posts and assign credibility labels");
    add_common(label, common, true);
    label->add_option("--output", label_output, "labeled output file")->capture_default_str();

    auto* an = app.add_subcommand("analyze", "run the amplification benchmark");
    add_common(an, analyze.common, true);
    an->add_option("--bins", analyze.cfg.bins, "quantile bins per dimension")->capture_default_str();
    an->add_option("--iterations", analyze.cfg.boot.iterations, "bootstrap iterations")
        ->capture_default_str();
    an->add_option("--seed", analyze.cfg.boot.seed, "random seed")->capture_default_str();
    an->add_option("--confidence", analyze.cfg.boot.confidence, "BCa confidence level")
        ->capture_default_str();
    an->add_option("--min-stratum-size", analyze.cfg.boot.min_stratum_size,
                   "minimum per-group stratum size")
        ->capture_default_str();
    an->add_option("--stratify", analyze.stratify,
                   "extra stratification variable (toxicity|bias|verified), repeatable");
    an->add_option("--format", analyze.format, "output format (json|csv)")->capture_default_str();
    an->add_option("--output", analyze.output, "output path (file for json, directory for csv)")
        ->required();
    an->add_option("--workers", analyze.cfg.boot.workers, "bootstrap worker threads")
        ->capture_default_str();
    an->add_flag("--reuse-global-bins", analyze.cfg.reuse_global_bins,
                 "restricted delta runs reuse baseline bin edges");
    an->add_flag("--equal-stratum-weights", analyze.cfg.boot.equal_stratum_weights,
                 "weight strata equally instead of by matched size");

    auto* sy = app.add_subcommand("synth", "generate a synthetic corpus with planted uplift");
    std::string scope_str = "all";
    sy->add_option("--n", synth_cfg.n_posts, "number of posts")->capture_default_str();
    sy->add_option("--low-fraction", synth_cfg.low_fraction, "low-credibility fraction")
        ->capture_default_str();
    sy->add_option("--gamma", synth_cfg.planted_gamma, "planted uplift factor")
        ->capture_default_str();
    sy->add_option("--scope", scope_str,
                   "uplift scope (all|verified-only|toxicity-high-only|bias-right-only)")
        ->capture_default_str();
    sy->add_option("--mu", synth_cfg.mu, "impressions log-normal mu")->capture_default_str();
    sy->add_option("--sigma", synth_cfg.sigma, "impressions log-normal sigma")
        ->capture_default_str();
    sy->add_option("--follower-mu", synth_cfg.follower_mu, "followers log-normal mu")
        ->capture_default_str();
    sy->add_option("--follower-sigma", synth_cfg.follower_sigma, "followers log-normal sigma")
        ->capture_default_str();
    sy->add_option("--verified-fraction", synth_cfg.verified_fraction, "verified author share")
        ->capture_default_str();
    sy->add_option("--seed", synth_cfg.seed, "random seed")->capture_default_str();
    sy->add_option("--output", synth_output, "output directory")->capture_default_str();

    auto* ve = app.add_subcommand("verify", "analyze a synthetic corpus against its ground truth");
    ve->add_option("--input", verify_dir, "synth corpus directory")->required();
    ve->add_option("--tolerance", verify_tolerance, "allowed deviation in percentage points")
        ->capture_default_str();
    ve->add_option("--iterations", analyze.cfg.boot.iterations, "bootstrap iterations")
        ->capture_default_str();
    ve->add_option("--seed", analyze.cfg.boot.seed, "random seed")->capture_default_str();
    ve->add_option("--workers", analyze.cfg.boot.workers, "bootstrap worker threads")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (label->parsed()) return cmd_label(common, label_output);
        if (an->parsed()) return cmd_analyze(analyze);
        if (sy->parsed()) {
            auto scope = parse_gamma_scope(scope_str);
            if (!scope) throw ConfigError("unknown scope: " + scope_str);
            synth_cfg.gamma_scope = *scope;
            return cmd_synth(synth_cfg, synth_output);
        }
        if (ve->parsed()) return cmd_verify(verify_dir, analyze, verify_tolerance);
    } catch (const ConfigError& e) {
        std::cerr << "{\"error\":\"config\",\"message\":\"" << e.what() << "\"}\n";
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "{\"error\":\"data\",\"message\":\"" << e.what() << "\"}\n";
        return kExitData;
    } catch (const AnalysisError& e) {
        std::cerr << "{\"error\":\"analysis\",\"message\":\"" << e.what() << "\"}\n";
        return kExitAnalysis;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"internal\",\"message\":\"" << e.what() << "\"}\n";
        return kExitAnalysis;
    }
    return kExitUsage;
}

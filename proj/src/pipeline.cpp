#include "asbench/pipeline.hpp"

#include "asbench/io.hpp"

#include <omp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace asbench {

namespace fs = std::filesystem;

RunTable compute_runs(const BenchConfig &config, bool truth) {
    const auto seeds = stage_seeds(config);
    const auto suite = list_suite(config.dim, config.instances_per_class);
    return run_portfolio(suite, config.budget(), truth ? config.truth_repetitions : config.train_repetitions,
                         truth ? seeds.truth_runs : seeds.train_runs);
}

std::vector<InstanceFeatures> compute_features(const BenchConfig &config, FeatureSet set) {
    const auto seeds = stage_seeds(config);
    const auto suite = list_suite(config.dim, config.instances_per_class);
    return extract_suite_features(suite, set, config.samples_per_dim, seeds.samples,
                                  noninf_spec(config.noninf_count, seeds.noninf_spec));
}

namespace {

class Stages {
public:
    Stages(const BenchConfig &config, const PipelineOptions &options)
        : config_(config), options_(options), dir_(config.output_dir), digests_(stage_digests(config)) {
        fs::create_directories(dir_);
        const auto path = dir_ / "MANIFEST";
        if (fs::exists(path)) {
            try {
                previous_ = nlohmann::json::parse(read_file(path));
            } catch (const nlohmann::json::exception &) {
                previous_ = nlohmann::json::object();
            }
        }
        manifest_ = {{"tool_version", kToolVersion},
                     {"config_digest", config_digest(config)},
                     {"config", to_ini(config)},
                     {"stages", nlohmann::json::object()}};
        const auto s = stage_seeds(config);
        manifest_["seeds"] = {{"master", config.master_seed},      {"train_runs", s.train_runs},
                              {"truth_runs", s.truth_runs},        {"samples", s.samples},
                              {"noninf_spec", s.noninf_spec},      {"splits", s.splits},
                              {"random_model", s.random_model},    {"forest", s.forest},
                              {"scale_runs", s.scale_runs}};
    }

    /// True when `stage` can be loaded from disk.
    bool reusable(const std::string &stage, const std::vector<std::string> &files,
                  const std::vector<std::string> &upstream) {
        bool present = true;
        for (const auto &f : files) {
            present = present && fs::exists(dir_ / f);
        }
        bool upstream_clean = true;
        for (const auto &u : upstream) {
            upstream_clean = upstream_clean && !recomputed_.count(u);
        }
        const auto &prev = previous_.contains("stages") ? previous_["stages"] : nlohmann::json::object();
        const bool digest_ok = prev.contains(stage) && prev[stage].value("digest", "") == digests_.at(stage);
        if (present && digest_ok && upstream_clean) {
            return true;
        }
        if (options_.no_recompute) {
            if (!present) {
                throw StaleCacheError("stage " + stage + ": cached output missing and recomputation disabled");
            }
            if (!digest_ok) {
                throw StaleCacheError("stage " + stage + ": cached output was produced by a different config");
            }
            throw StaleCacheError("stage " + stage + ": upstream stage changed and recomputation disabled");
        }
        return false;
    }

    void done(const std::string &stage, const std::vector<std::string> &files, bool reused) {
        (reused ? reused_ : recomputed_).insert(stage);
        (reused ? result_reused : result_recomputed).push_back(stage);
        manifest_["stages"][stage] = {{"digest", digests_.at(stage)}, {"files", files}, {"reused", reused}};
        write_manifest();
    }

    void write_manifest() {
        nlohmann::json m = manifest_;
        // "reused" flags depend on cache state, not on the config.
        for (auto &[name, s] : m["stages"].items()) {
            s.erase("reused");
        }
        write_file_atomic(dir_ / "MANIFEST", m.dump(2) + "\n");
    }

    void note(const std::string &key, nlohmann::json value) { manifest_[key] = std::move(value); }

    void log(const std::string &line) const {
        if (options_.log) {
            *options_.log << line << std::endl;
        }
    }

    const fs::path &dir() const { return dir_; }
    const std::string &digest(const std::string &stage) const { return digests_.at(stage); }

    std::vector<std::string> result_recomputed;
    std::vector<std::string> result_reused;

private:
    const BenchConfig &config_;
    const PipelineOptions &options_;
    fs::path dir_;
    std::map<std::string, std::string> digests_;
    nlohmann::json previous_ = nlohmann::json::object();
    nlohmann::json manifest_;
    std::set<std::string> recomputed_;
    std::set<std::string> reused_;
};

template <typename F>
double timed(F &&f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string seconds(double s) {
    std::ostringstream os;
    os.precision(3);
    os << s << " s";
    return os.str();
}

RunTable runs_stage(Stages &st, const BenchConfig &config, bool truth) {
    const std::string stage = truth ? "runs-truth" : "runs-train";
    const std::string file = truth ? "runs-truth.csv" : "runs.csv";
    RunTable table;
    if (st.reusable(stage, {file}, {})) {
        std::ifstream in(st.dir() / file);
        table = read_runs_csv(in, file);
        st.log(stage + ": reused " + file);
        st.done(stage, {file}, true);
        return table;
    }
    const double t = timed([&] { table = compute_runs(config, truth); });
    std::ostringstream os;
    write_runs_csv(os, table);
    write_file_atomic(st.dir() / file, os.str());
    st.log(stage + ": " + std::to_string(table.size()) + " runs in " + seconds(t));
    st.done(stage, {file}, false);
    return table;
}

std::vector<InstanceFeatures> features_stage(Stages &st, const BenchConfig &config, FeatureSet set) {
    const std::string stage = "features-" + std::string(feature_set_name(set));
    const std::string file = stage + ".csv";
    std::vector<InstanceFeatures> rows;
    if (st.reusable(stage, {file}, {})) {
        std::ifstream in(st.dir() / file);
        rows = read_features_csv(in, set, file);
        st.log(stage + ": reused " + file);
        st.done(stage, {file}, true);
        return rows;
    }
    const double t = timed([&] { rows = compute_features(config, set); });
    std::ostringstream os;
    write_features_csv(os, rows);
    write_file_atomic(st.dir() / file, os.str());
    std::size_t flagged = 0;
    for (const auto &r : rows) {
        flagged += !r.features.flags.empty();
    }
    st.log(stage + ": " + std::to_string(rows.size()) + " instances in " + seconds(t) +
           (flagged ? " (" + std::to_string(flagged) + " with degenerate-feature flags)" : ""));
    st.done(stage, {file}, false);
    return rows;
}

std::pair<TargetTable, TargetTable> targets_stage(Stages &st, const RunTable &runs, bool truth) {
    const std::string stage = truth ? "targets-truth" : "targets-train";
    const std::string prefix = truth ? "targets-truth-" : "targets-";
    const std::vector<std::string> files = {prefix + "rank.csv", prefix + "precision.csv"};
    const std::string upstream = truth ? "runs-truth" : "runs-train";
    if (st.reusable(stage, files, {upstream})) {
        std::ifstream rank_in(st.dir() / files[0]);
        std::ifstream prec_in(st.dir() / files[1]);
        auto rank = read_targets_csv(rank_in, files[0]);
        auto prec = read_targets_csv(prec_in, files[1]);
        st.log(stage + ": reused");
        st.done(stage, files, true);
        return {std::move(rank), std::move(prec)};
    }
    auto rank = build_targets(runs, TargetKind::Rank);
    auto prec = build_targets(runs, TargetKind::Precision);
    std::ostringstream r;
    std::ostringstream p;
    write_targets_csv(r, rank);
    write_targets_csv(p, prec);
    write_file_atomic(st.dir() / files[0], r.str());
    write_file_atomic(st.dir() / files[1], p.str());
    st.log(stage + ": " + std::to_string(rank.values.size()) + " instances");
    st.done(stage, files, false);
    return {std::move(rank), std::move(prec)};
}

} // namespace

PipelineResult run_pipeline(const BenchConfig &config, const PipelineOptions &options) {
    config.validate();
    if (config.threads > 0) {
        omp_set_num_threads(config.threads);
    }
    Stages st(config, options);

    std::set<FeatureSet> sets(config.feature_sets.begin(), config.feature_sets.end());
    if (config.leakage_audit) {
        sets.insert({FeatureSet::Ela, FeatureSet::NonInformative, FeatureSet::Class});
    }
    if (config.scale_audit) {
        sets.insert(FeatureSet::Scale);
    }

    const auto train = runs_stage(st, config, false);
    const auto truth = runs_stage(st, config, true);
    st.note("run_counts", {{"train", train.size()}, {"truth", truth.size()}});
    st.write_manifest();

    AuditData data;
    for (const auto set : sets) {
        data.features[set] = to_feature_table(features_stage(st, config, set));
    }
    std::tie(data.train_rank, data.train_precision) = targets_stage(st, train, false);
    std::tie(data.truth_rank, data.truth_precision) = targets_stage(st, truth, true);
    for (const auto &[key, _] : data.train_rank.values) {
        data.keys.push_back(key);
    }

    const std::vector<std::string> audit_files = {"report.json", "report-folds.csv", "plotdata-fig1.csv",
                                                  "plotdata-fig2.csv", "plotdata-fig3.csv"};
    std::vector<std::string> upstream = {"runs-train", "runs-truth", "targets-train", "targets-truth"};
    for (const auto set : sets) {
        upstream.push_back("features-" + std::string(feature_set_name(set)));
    }

    PipelineResult result;
    if (st.reusable("audit", audit_files, upstream)) {
        result.report = report_from_json(nlohmann::json::parse(read_file(st.dir() / "report.json")));
        st.log("audit: reused report.json");
        st.done("audit", audit_files, true);
    } else {
        EvaluationReport &rep = result.report;
        if (config.leakage_audit) {
            const double t = timed([&] { rep.merge(leakage_audit(data, config)); });
            st.log("audit leakage: " + seconds(t));
        }
        if (config.scale_audit) {
            const double t = timed([&] {
                rep.merge(scale_audit(data, config));
                rep.scale_table = rescaling_table(config);
            });
            st.log("audit scale: " + seconds(t));
        }
        rep.provenance["tool_version"] = kToolVersion;
        rep.provenance["config_digest"] = config_digest(config);
        rep.provenance["master_seed"] = config.master_seed;
        rep.provenance["audit_digest"] = st.digest("audit");
        rep.provenance["train_runs"] = train.size();
        rep.provenance["truth_runs"] = truth.size();
        write_file_atomic(st.dir() / "report.json", report_to_json(rep).dump(2) + "\n");
        write_file_atomic(st.dir() / "report-folds.csv", folds_csv(rep));
        write_file_atomic(st.dir() / "plotdata-fig1.csv", plotdata_fig1(rep));
        write_file_atomic(st.dir() / "plotdata-fig2.csv", plotdata_fig2(rep));
        write_file_atomic(st.dir() / "plotdata-fig3.csv", plotdata_fig3(rep));
        st.done("audit", audit_files, false);
    }
    result.recomputed = st.result_recomputed;
    result.reused = st.result_reused;
    return result;
}

} // namespace asbench

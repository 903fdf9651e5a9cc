// Command-line front end: one subcommand per pipeline stage plus the
// end-to-end `pipeline` command.

#include "asbench/audits.hpp"
#include "asbench/config.hpp"
#include "asbench/io.hpp"
#include "asbench/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace asbench;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<int> dim;
    std::optional<int> instances;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<int> threads;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
    cmd->add_option("--config", o.config_path, "INI config file")->check(CLI::ExistingFile);
    cmd->add_option("--param", o.overrides, "Override a config key, e.g. --param forest.n_trees=50");
    cmd->add_option("--dim", o.dim, "Problem dimension");
    cmd->add_option("--instances", o.instances, "Instances per class");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--output-dir", o.output_dir, "Artifact directory");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
}

BenchConfig make_config(const CommonOptions &o) {
    BenchConfig c = o.config_path.empty() ? BenchConfig{} : load_config(o.config_path);
    for (const auto &kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
        }
        set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (o.dim) c.dim = *o.dim;
    if (o.instances) c.instances_per_class = *o.instances;
    if (o.seed) c.master_seed = *o.seed;
    if (o.output_dir) c.output_dir = *o.output_dir;
    if (o.threads) c.threads = *o.threads;
    c.validate();
    return c;
}

void emit(const std::string &out_path, const std::string &text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        write_file_atomic(out_path, text);
    }
}

int print_report(const EvaluationReport &report, bool check) {
    std::cout << render_report(report);
    if (check) {
        for (const auto &c : check_acceptance(report)) {
            if (!c.passed) {
                return kExitCheckFailed;
            }
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Algorithm-selection benchmark: suite, portfolio, features, meta-models and audits"};
    app.require_subcommand(1);

    // suite list
    auto *suite = app.add_subcommand("suite", "Problem suite");
    suite->require_subcommand(1);
    auto *suite_list = suite->add_subcommand("list", "List instances with f_opt and an f-range estimate");
    CommonOptions suite_opts;
    int range_points = 10000;
    std::string suite_out;
    add_common(suite_list, suite_opts);
    suite_list->add_option("--range-points", range_points, "LHS points for the f-range estimate");
    suite_list->add_option("--out", suite_out, "Output CSV (default stdout)");

    // portfolio run
    auto *portfolio = app.add_subcommand("portfolio", "Optimizer portfolio");
    portfolio->require_subcommand(1);
    auto *portfolio_run = portfolio->add_subcommand("run", "Run every algorithm on every instance");
    CommonOptions port_opts;
    std::optional<int> budget_per_dim;
    std::optional<int> reps;
    bool truth = false;
    std::string runs_out = "runs.csv";
    add_common(portfolio_run, port_opts);
    portfolio_run->add_option("--budget-per-dim", budget_per_dim, "Evaluations per dimension");
    portfolio_run->add_option("--reps", reps, "Repetitions (default: training repetitions)");
    portfolio_run->add_flag("--truth", truth, "Use the ground-truth seed stream and repetition count");
    portfolio_run->add_option("--out", runs_out, "Output CSV");

    // features extract
    auto *features = app.add_subcommand("features", "Landscape and baseline features");
    features->require_subcommand(1);
    auto *features_extract = features->add_subcommand("extract", "Extract one feature set for the suite");
    CommonOptions feat_opts;
    std::string set_name;
    std::optional<int> samples_per_dim;
    std::optional<int> noninf_count;
    std::string features_out = "features.csv";
    add_common(features_extract, feat_opts);
    features_extract->add_option("--set", set_name, "ela | noninf | class | scale")->required();
    features_extract->add_option("--samples-per-dim", samples_per_dim, "LHS points per dimension");
    features_extract->add_option("--noninf-count", noninf_count, "Number of non-informative features");
    features_extract->add_option("--out", features_out, "Output CSV");

    // targets build
    auto *targets = app.add_subcommand("targets", "Meta-model targets");
    targets->require_subcommand(1);
    auto *targets_build = targets->add_subcommand("build", "Mean ranks or mean precision per instance");
    std::string kind_name;
    std::string runs_in;
    std::string targets_out = "targets.csv";
    targets_build->add_option("--kind", kind_name, "rank | precision")->required();
    targets_build->add_option("--runs", runs_in, "Runs CSV")->required()->check(CLI::ExistingFile);
    targets_build->add_option("--out", targets_out, "Output CSV");

    // audit leakage / audit scale
    auto *audit = app.add_subcommand("audit", "Evaluation audits");
    audit->require_subcommand(1);
    auto *audit_leakage = audit->add_subcommand("leakage", "LIO vs LPO comparison of rank meta-models");
    auto *audit_scale = audit->add_subcommand("scale", "Precision vs rank meta-models under LPO");
    CommonOptions audit_opts;
    bool audit_no_recompute = false;
    for (auto *cmd : {audit_leakage, audit_scale}) {
        add_common(cmd, audit_opts);
        cmd->add_flag("--no-recompute", audit_no_recompute, "Fail instead of recomputing stale stages");
    }

    // report
    auto *report = app.add_subcommand("report", "Summarize a report.json");
    std::string report_path;
    bool check = false;
    report->add_option("report", report_path, "report.json")->required()->check(CLI::ExistingFile);
    report->add_flag("--check", check, "Exit with status 2 if any acceptance criterion fails");

    // pipeline
    auto *pipeline = app.add_subcommand("pipeline", "Run every stage and both audits");
    CommonOptions pipe_opts;
    bool pipe_no_recompute = false;
    bool pipe_check = false;
    add_common(pipeline, pipe_opts);
    pipeline->add_flag("--no-recompute", pipe_no_recompute, "Fail instead of recomputing stale stages");
    pipeline->add_flag("--check", pipe_check, "Exit with status 2 if any acceptance criterion fails");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (suite_list->parsed()) {
            const auto c = make_config(suite_opts);
            std::ostringstream os;
            write_suite_csv(os, list_suite(c.dim, c.instances_per_class), range_points, c.master_seed);
            emit(suite_out, os.str());
        } else if (portfolio_run->parsed()) {
            auto c = make_config(port_opts);
            if (budget_per_dim) c.budget_per_dim = *budget_per_dim;
            if (reps) (truth ? c.truth_repetitions : c.train_repetitions) = *reps;
            c.validate();
            std::ostringstream os;
            write_runs_csv(os, compute_runs(c, truth));
            emit(runs_out, os.str());
        } else if (features_extract->parsed()) {
            auto c = make_config(feat_opts);
            if (samples_per_dim) c.samples_per_dim = *samples_per_dim;
            if (noninf_count) c.noninf_count = *noninf_count;
            c.validate();
            std::ostringstream os;
            write_features_csv(os, compute_features(c, parse_feature_set(set_name)));
            emit(features_out, os.str());
        } else if (targets_build->parsed()) {
            std::ifstream in(runs_in);
            const auto table = read_runs_csv(in, runs_in);
            std::ostringstream os;
            write_targets_csv(os, build_targets(table, parse_target_kind(kind_name)));
            emit(targets_out, os.str());
        } else if (audit_leakage->parsed() || audit_scale->parsed()) {
            auto c = make_config(audit_opts);
            c.leakage_audit = audit_leakage->parsed();
            c.scale_audit = audit_scale->parsed();
            PipelineOptions opts;
            opts.no_recompute = audit_no_recompute;
            opts.log = &std::cerr;
            const auto result = run_pipeline(c, opts);
            std::cout << render_report(result.report);
        } else if (report->parsed()) {
            const auto j = nlohmann::json::parse(read_file(report_path));
            return print_report(report_from_json(j), check);
        } else if (pipeline->parsed()) {
            const auto c = make_config(pipe_opts);
            PipelineOptions opts;
            opts.no_recompute = pipe_no_recompute;
            opts.log = &std::cerr;
            const auto result = run_pipeline(c, opts);
            return print_report(result.report, pipe_check);
        }
    } catch (const nlohmann::json::parse_error &e) {
        std::cerr << "error: " << report_path << ": " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}

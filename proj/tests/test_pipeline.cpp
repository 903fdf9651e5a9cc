#include "asbench/io.hpp"
#include "asbench/pipeline.hpp"

#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>

using namespace asbench;
namespace fs = std::filesystem;

namespace {

BenchConfig small_config(const fs::path &dir) {
    BenchConfig c;
    c.instances_per_class = 3;
    c.budget_per_dim = 200;
    c.train_repetitions = 2;
    c.truth_repetitions = 3;
    c.samples_per_dim = 20;
    c.forest.n_trees = 5;
    c.lio_repeats = 2;
    c.output_dir = dir;
    return c;
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("asbench-test-" + std::to_string(::getpid()))) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

bool contains(const std::vector<std::string> &v, const std::string &s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace

TEST_CASE("pipeline writes artifacts and reuses its cache") {
    TempDir tmp;
    const auto c = small_config(tmp.path);
    const auto first = run_pipeline(c);
    CHECK(first.reused.empty());
    for (const char *f : {"runs.csv", "runs-truth.csv", "features-ela.csv", "features-noninf.csv",
                          "features-class.csv", "features-scale.csv", "targets-rank.csv", "targets-precision.csv",
                          "targets-truth-rank.csv", "targets-truth-precision.csv", "report.json",
                          "report-folds.csv", "plotdata-fig1.csv", "plotdata-fig2.csv", "plotdata-fig3.csv",
                          "MANIFEST"}) {
        CAPTURE(f);
        CHECK(fs::exists(tmp.path / f));
    }
    const auto manifest = nlohmann::json::parse(read_file(tmp.path / "MANIFEST"));
    CHECK(manifest.at("run_counts").at("train") == 72 * 5 * 2);
    CHECK(manifest.at("run_counts").at("truth") == 72 * 5 * 3);
    CHECK(manifest.at("config_digest") == config_digest(c));
    const auto report_text = read_file(tmp.path / "report.json");
    const auto report = nlohmann::json::parse(report_text);
    CHECK(report.at("provenance").at("config_digest") == config_digest(c));
    CHECK(report.at("tool_version") == kToolVersion);
    CHECK(read_file(tmp.path / "report-folds.csv").rfind("audit,protocol,fold,model,metric,value\n", 0) == 0);

    // Every fold of every model is present, PRE in [0, 1], MSE >= 0.
    const auto &rep = first.report;
    for (const char *m : {"random", "mean", "ela", "non-inf", "class"}) {
        CHECK(rep.values("LIO", m, "pre").size() == 2);
        CHECK(rep.values("LPO", m, "pre").size() == 24);
    }
    for (const auto &f : rep.folds) {
        CHECK(f.value >= 0.0);
        if (f.metric == "pre") {
            CHECK(f.value <= 1.0);
        }
    }
    CHECK(rep.values("LPO", "rf-precision", "mse").size() == 24);
    CHECK(rep.scale_table.size() == 15);

    SUBCASE("identical rerun reuses every stage and reproduces the report") {
        const auto second = run_pipeline(c);
        CHECK(second.recomputed.empty());
        CHECK(read_file(tmp.path / "report.json") == report_text);
    }
    SUBCASE("deleting one feature file recomputes that stage and the audit only") {
        fs::remove(tmp.path / "features-ela.csv");
        const auto again = run_pipeline(c);
        CHECK(again.recomputed == std::vector<std::string>{"features-ela", "audit"});
        CHECK(read_file(tmp.path / "report.json") == report_text);
    }
    SUBCASE("changing forest parameters keeps run tables") {
        auto d = c;
        d.forest.n_trees = 3;
        const auto again = run_pipeline(d);
        CHECK(contains(again.reused, "runs-train"));
        CHECK(contains(again.reused, "runs-truth"));
        CHECK(contains(again.recomputed, "audit"));
    }
    SUBCASE("stale cache with recomputation disabled") {
        auto d = c;
        d.budget_per_dim = 300;
        PipelineOptions opts;
        opts.no_recompute = true;
        CHECK_THROWS_AS(run_pipeline(d, opts), StaleCacheError);
        CHECK_NOTHROW(run_pipeline(c, opts));
    }
    SUBCASE("thread count does not change results") {
        fs::remove_all(tmp.path);
        auto d = c;
        d.threads = 1;
        run_pipeline(d);
        CHECK(read_file(tmp.path / "report.json") == report_text);
    }
}

TEST_CASE("report JSON round trip") {
    TempDir tmp;
    const auto c = small_config(tmp.path);
    const auto rep = run_pipeline(c).report;
    const auto back = report_from_json(report_to_json(rep));
    CHECK(report_to_json(back).dump() == report_to_json(rep).dump());
    CHECK(render_report(back) == render_report(rep));
    CHECK_THROWS_AS(report_from_json(nlohmann::json::parse("{\"folds\": 3}")), ParseError);
}

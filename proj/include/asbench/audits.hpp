#pragma once

#include "asbench/config.hpp"
#include "asbench/evaluation.hpp"
#include "asbench/meta_models.hpp"
#include "asbench/stats.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asbench {

/// Everything the audits consume, already computed.
struct AuditData {
    std::vector<InstanceKey> keys;
    TargetTable train_rank;
    TargetTable train_precision;
    /// Ground truth from the independent, larger run table.
    TargetTable truth_rank;
    TargetTable truth_precision;
    std::map<FeatureSet, FeatureTable> features;
};

struct FoldMetric {
    std::string audit;
    std::string protocol;
    int fold = 0;
    std::string model;
    std::string metric;
    double value = 0.0;
};

struct TestRecord {
    std::string name;
    /// "wilcoxon" or "friedman".
    std::string test;
    std::string protocol;
    std::string metric;
    std::vector<std::string> models;
    TestResult result;
    /// Non-empty when the test could not be computed.
    std::string note;
};

/// One row of the rescaling table: an instance at one scale factor.
struct ScaleRow {
    int class_id = 0;
    int instance_id = 0;
    double factor = 1.0;
    double f_scale = 0.0;
    AlgorithmValues precision{};
    RankVector rank{};
};

struct EvaluationReport {
    std::vector<FoldMetric> folds;
    std::vector<TestRecord> tests;
    std::vector<ScaleRow> scale_table;
    nlohmann::json provenance = nlohmann::json::object();

    /// Per-fold values in fold order.
    std::vector<double> values(std::string_view protocol, std::string_view model, std::string_view metric) const;
    std::optional<double> median(std::string_view protocol, std::string_view model, std::string_view metric) const;
    const TestRecord *find_test(std::string_view name) const;
    void merge(const EvaluationReport &other);
};

double median_of(std::vector<double> v);

/// Trains {random, mean, ela, non-inf, class} on rank targets under LIO and
/// LPO; records per-fold PRE (mean over test instances) against the truth
/// ranks, plus Wilcoxon tests of class and non-inf against mean.
EvaluationReport leakage_audit(const AuditData &data, const BenchConfig &config);

/// LPO comparison of {mean-precision, rf-precision, mean-rank, rf-rank} with
/// the f_scale feature: per-fold MSE of the precision models, per-fold PRE
/// of all four, Wilcoxon on MSE and Friedman on the PRE matrix.
EvaluationReport scale_audit(const AuditData &data, const BenchConfig &config);

/// Runs the portfolio on instance 1 of each configured class rescaled by
/// each factor, with seeds that do not depend on the factor.
std::vector<ScaleRow> rescaling_table(const BenchConfig &config);

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Criteria that are decided by the audit results (1-6).
std::vector<CriterionResult> check_acceptance(const EvaluationReport &report);

nlohmann::json report_to_json(const EvaluationReport &report);
EvaluationReport report_from_json(const nlohmann::json &j);

/// Long-format per-fold CSV: audit, protocol, fold, model, metric, value.
std::string folds_csv(const EvaluationReport &report);
std::string plotdata_fig1(const EvaluationReport &report);
std::string plotdata_fig2(const EvaluationReport &report);
std::string plotdata_fig3(const EvaluationReport &report);

/// Median tables, test outcomes and criterion lines.
std::string render_report(const EvaluationReport &report);

} // namespace asbench

#pragma once

#include "asbench/features.hpp"
#include "asbench/forest.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace asbench {

/// Every knob of the end-to-end pipeline. Defaults reproduce the reference
/// experiment: 5-D, 24 x 15 instances, 1000 evaluations per dimension,
/// 30 training and 100 ground-truth repetitions, 250 * dim samples.
struct BenchConfig {
    int dim = 5;
    int instances_per_class = 15;
    int budget_per_dim = 1000;
    int train_repetitions = 30;
    int truth_repetitions = 100;
    int samples_per_dim = 250;
    std::vector<FeatureSet> feature_sets = {FeatureSet::Ela, FeatureSet::NonInformative, FeatureSet::Class,
                                            FeatureSet::Scale};
    int noninf_count = kElaFeatureCount;
    ForestParams forest;
    double lio_test_fraction = 1.0 / 3.0;
    int lio_repeats = 10;
    bool leakage_audit = true;
    bool scale_audit = true;
    std::vector<int> scale_classes = {4, 13, 24};
    std::vector<double> scale_factors = {1e-2, 1e-1, 1.0, 1e1, 1e2};
    std::uint64_t master_seed = 20240517;
    std::filesystem::path output_dir = "asbench-out";
    /// 0 = OpenMP default.
    int threads = 0;

    int budget() const { return budget_per_dim * dim; }
    void validate() const;
};

/// INI text with sections [suite] [portfolio] [features] [forest] [splits]
/// [audit] [run]. Unknown keys are rejected.
BenchConfig parse_config(std::string_view text);
BenchConfig load_config(const std::filesystem::path &path);

/// Sets one "section.key" entry from a string, as a command-line override.
void set_config_value(BenchConfig &config, std::string_view dotted_key, std::string_view value);

/// Canonical INI rendering; parse_config(to_ini(c)) == c.
std::string to_ini(const BenchConfig &config);

std::string sha256_hex(std::string_view data);

/// Digest of the canonical config, minus output_dir and threads, which do
/// not affect results.
std::string config_digest(const BenchConfig &config);

/// Per-stage seeds, all derived from master_seed.
struct StageSeeds {
    std::uint64_t train_runs;
    std::uint64_t truth_runs;
    std::uint64_t samples;
    std::uint64_t noninf_spec;
    std::uint64_t splits;
    std::uint64_t random_model;
    std::uint64_t forest;
    std::uint64_t scale_runs;
};
StageSeeds stage_seeds(const BenchConfig &config);

/// Stage name -> digest of the config keys (and upstream stages) it depends on.
std::map<std::string, std::string> stage_digests(const BenchConfig &config);

} // namespace asbench

#pragma once

#include "asbench/features.hpp"
#include "asbench/meta_models.hpp"
#include "asbench/metrics.hpp"
#include "asbench/portfolio.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbench {

inline constexpr const char *kToolVersion = "1.0.0";

/// Malformed input file; the message carries file and line.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest text that parses back to the same double.
std::string format_double(double v);

void write_runs_csv(std::ostream &out, const RunTable &table);
RunTable read_runs_csv(std::istream &in, const std::string &source = "runs");

void write_features_csv(std::ostream &out, const std::vector<InstanceFeatures> &rows);
std::vector<InstanceFeatures> read_features_csv(std::istream &in, FeatureSet set,
                                                const std::string &source = "features");

void write_targets_csv(std::ostream &out, const TargetTable &table);
TargetTable read_targets_csv(std::istream &in, const std::string &source = "targets");

void write_suite_csv(std::ostream &out, const std::vector<ProblemInstance> &suite, int range_points,
                     std::uint64_t seed);

/// Writes `text` to `path` through a temporary file and a rename, so a
/// crash never leaves a truncated artifact behind.
void write_file_atomic(const std::filesystem::path &path, const std::string &text);
std::string read_file(const std::filesystem::path &path);

} // namespace asbench

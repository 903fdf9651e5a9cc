#pragma once

#include "asbench/audits.hpp"
#include "asbench/config.hpp"
#include "asbench/portfolio.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbench {

/// A cached stage output exists but was produced under a different config,
/// and recomputation was not allowed.
class StaleCacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PipelineOptions {
    /// Fail with StaleCacheError instead of recomputing a stage.
    bool no_recompute = false;
    /// Progress lines; null for silence.
    std::ostream *log = nullptr;
};

struct PipelineResult {
    EvaluationReport report;
    std::vector<std::string> recomputed;
    std::vector<std::string> reused;
};

RunTable compute_runs(const BenchConfig &config, bool truth);
std::vector<InstanceFeatures> compute_features(const BenchConfig &config, FeatureSet set);

/// suite -> runs -> features -> targets -> audits, writing every artifact to
/// config.output_dir. A stage is reused when its recorded digest matches
/// and its files are present and nothing upstream was recomputed.
PipelineResult run_pipeline(const BenchConfig &config, const PipelineOptions &options = {});

} // namespace asbench

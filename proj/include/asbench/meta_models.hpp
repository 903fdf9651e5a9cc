#pragma once

#include "asbench/features.hpp"
#include "asbench/forest.hpp"
#include "asbench/metrics.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

namespace asbench {

enum class MetaKind { Random, Mean, Ela, NonInformative, Class, MeanPrecision, MeanRank, RfPrecision, RfRank };

std::string_view meta_kind_name(MetaKind kind);
MetaKind parse_meta_kind(std::string_view name);

/// Kinds that ignore the feature table.
bool is_constant_kind(MetaKind kind);

using FeatureTable = std::map<InstanceKey, FeatureVector>;

FeatureTable to_feature_table(const std::vector<InstanceFeatures> &rows);

struct MetaModel {
    MetaKind kind = MetaKind::Mean;
    std::uint64_t seed = 0;
    /// Training means (mean kinds only).
    AlgorithmValues constants{};
    /// One forest per algorithm (forest kinds only).
    std::vector<RegressionForest> forests;
    std::vector<std::string> feature_names;

    /// Predicted target values for one instance. `features` may be null for
    /// the constant kinds.
    AlgorithmValues predict(const InstanceKey &key, const FeatureVector *features) const;
};

/// Trains `kind` on the instances in `train`. Forest kinds fit one
/// independent forest per algorithm on instance-level rows; the forest seed
/// for algorithm a is derived from (params.seed, a).
MetaModel fit_meta(MetaKind kind, const FeatureTable &features, const TargetTable &targets,
                   const std::vector<InstanceKey> &train, const ForestParams &params, std::uint64_t seed = 0);

/// Predicted values converted to averaged-ties ranks; a lower value ranks
/// better.
std::map<InstanceKey, RankVector> predict_ranks(const MetaModel &model, const FeatureTable &features,
                                                const std::vector<InstanceKey> &keys);

std::map<InstanceKey, AlgorithmValues> predict_values(const MetaModel &model, const FeatureTable &features,
                                                      const std::vector<InstanceKey> &keys);

void to_json(nlohmann::json &j, const MetaModel &m);

} // namespace asbench

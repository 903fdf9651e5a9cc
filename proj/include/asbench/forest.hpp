#pragma once

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace asbench {

/// Hyperparameters of the CART regression forest. Defaults follow the usual
/// regression-forest defaults: 100 fully grown trees on bootstrap samples,
/// every feature considered at each split.
struct ForestParams {
    int n_trees = 100;
    /// <= 0 means unlimited.
    int max_depth = 0;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    double max_features = 1.0;
    bool bootstrap = true;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Dense row-major design matrix.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

/// Flattened binary tree. feature[i] < 0 marks a leaf.
struct RegressionTree {
    std::vector<int> feature;
    std::vector<double> threshold;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<double> value;
    /// Number of (bootstrap) training samples that reached each node.
    std::vector<int> samples;

    std::size_t node_count() const { return feature.size(); }
    double predict(std::span<const double> x) const;
};

struct RegressionForest {
    ForestParams params;
    std::vector<std::string> feature_names;
    std::vector<RegressionTree> trees;

    /// Mean of the per-tree leaf values, kept within their range.
    double predict(std::span<const double> x) const;
};

/// Fits a forest; trees are built in parallel, each from its own seed
/// derived from (params.seed, tree index), so the result does not depend on
/// the number of threads.
RegressionForest fit_forest(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params,
                            std::vector<std::string> feature_names = {});

/// Single-threaded reference of fit_forest.
RegressionForest fit_forest_serial(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params,
                                   std::vector<std::string> feature_names = {});

void to_json(nlohmann::json &j, const ForestParams &p);
void from_json(const nlohmann::json &j, ForestParams &p);
void to_json(nlohmann::json &j, const RegressionForest &f);
void from_json(const nlohmann::json &j, RegressionForest &f);

} // namespace asbench

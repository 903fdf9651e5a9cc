#include "asbench/forest.hpp"

#include "asbench/rng.hpp"


#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace asbench {

void ForestParams::validate() const {
    if (n_trees < 1) {
        throw std::invalid_argument("n_trees must be >= 1");
    }
    if (!(max_features > 0.0 && max_features <= 1.0)) {
        throw std::invalid_argument("max_features must be in (0, 1]");
    }
    if (min_samples_split < 2) {
        throw std::invalid_argument("min_samples_split must be >= 2");
    }
    if (min_samples_leaf < 1) {
        throw std::invalid_argument("min_samples_leaf must be >= 1");
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (feature[node] >= 0) {
        node = x[feature[node]] <= threshold[node] ? left[node] : right[node];
    }
    return value[node];
}

double RegressionForest::predict(std::span<const double> x) const {
    if (x.size() != feature_names.size() && !feature_names.empty()) {
        throw std::invalid_argument("feature count mismatch");
    }
    double s = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto &t : trees) {
        const double v = t.predict(x);
        s += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Rounding can push the sum outside the range of the tree outputs.
    return std::clamp(s / static_cast<double>(trees.size()), lo, hi);
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = -std::numeric_limits<double>::infinity();
    std::size_t left_count = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params, std::uint64_t seed)
        : x_(x), y_(y), params_(params), rng_(seed) {
        n_candidates_ = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(params.max_features * static_cast<double>(x.cols))));
        n_candidates_ = std::min(n_candidates_, x.cols);
    }

    RegressionTree build() {
        std::vector<int> idx(x_.rows);
        if (params_.bootstrap) {
            for (auto &i : idx) {
                i = static_cast<int>(rng_.below(x_.rows));
            }
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }
        grow(idx, 0);
        return std::move(tree_);
    }

private:
    int add_node() {
        tree_.feature.push_back(-1);
        tree_.threshold.push_back(0.0);
        tree_.left.push_back(-1);
        tree_.right.push_back(-1);
        tree_.value.push_back(0.0);
        tree_.samples.push_back(0);
        return static_cast<int>(tree_.feature.size() - 1);
    }

    std::vector<int> candidate_features() {
        std::vector<int> feats(x_.cols);
        std::iota(feats.begin(), feats.end(), 0);
        if (n_candidates_ < x_.cols) {
            // Partial Fisher-Yates, then ascending order for deterministic tie-breaks.
            for (std::size_t i = 0; i < n_candidates_; ++i) {
                const auto j = i + rng_.below(x_.cols - i);
                std::swap(feats[i], feats[j]);
            }
            feats.resize(n_candidates_);
            std::sort(feats.begin(), feats.end());
        }
        return feats;
    }

    Split best_split(std::vector<int> &idx) {
        Split best;
        const std::size_t n = idx.size();
        const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
        double total = 0.0;
        for (const int i : idx) {
            total += y_[i];
        }
        for (const int f : candidate_features()) {
            std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return x_(a, f) < x_(b, f); });
            double left_sum = 0.0;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                left_sum += y_[idx[k]];
                const double v = x_(idx[k], f);
                const double next = x_(idx[k + 1], f);
                if (!(v < next)) {
                    continue;
                }
                const std::size_t nl = k + 1;
                const std::size_t nr = n - nl;
                if (nl < min_leaf || nr < min_leaf) {
                    continue;
                }
                // Maximizing this proxy maximizes the weighted variance reduction.
                const double right_sum = total - left_sum;
                const double score = left_sum * left_sum / static_cast<double>(nl) +
                                     right_sum * right_sum / static_cast<double>(nr);
                if (score > best.score) {
                    double thr = 0.5 * (v + next);
                    if (!(thr < next)) {
                        thr = v;
                    }
                    best = {f, thr, score, nl};
                }
            }
        }
        return best;
    }

    int grow(std::vector<int> &idx, int depth) {
        const int node = add_node();
        tree_.samples[node] = static_cast<int>(idx.size());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double sum = 0.0;
        for (const int i : idx) {
            lo = std::min(lo, y_[i]);
            hi = std::max(hi, y_[i]);
            sum += y_[i];
        }
        if (lo == hi) {
            tree_.value[node] = lo;
            return node;
        }
        tree_.value[node] = std::clamp(sum / static_cast<double>(idx.size()), lo, hi);

        const bool depth_ok = params_.max_depth <= 0 || depth < params_.max_depth;
        if (!depth_ok || idx.size() < static_cast<std::size_t>(params_.min_samples_split) ||
            idx.size() < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) {
            return node;
        }
        const Split split = best_split(idx);
        if (split.feature < 0) {
            return node;
        }
        std::vector<int> left_idx;
        std::vector<int> right_idx;
        left_idx.reserve(split.left_count);
        right_idx.reserve(idx.size() - split.left_count);
        for (const int i : idx) {
            (x_(i, split.feature) <= split.threshold ? left_idx : right_idx).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();
        tree_.feature[node] = split.feature;
        tree_.threshold[node] = split.threshold;
        const int l = grow(left_idx, depth + 1);
        tree_.left[node] = l;
        const int r = grow(right_idx, depth + 1);
        tree_.right[node] = r;
        return node;
    }

    const FeatureMatrix &x_;
    std::span<const double> y_;
    const ForestParams &params_;
    Rng rng_;
    std::size_t n_candidates_ = 1;
    RegressionTree tree_;
};

void check_inputs(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params) {
    params.validate();
    if (x.rows < 2) {
        throw std::invalid_argument("forest needs at least 2 training rows");
    }
    if (x.cols < 1) {
        throw std::invalid_argument("forest needs at least 1 feature");
    }
    if (y.size() != x.rows) {
        throw std::invalid_argument("target length does not match the number of rows");
    }
    for (const double v : x.data) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("non-finite feature value");
        }
    }
    for (const double v : y) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("non-finite target value");
        }
    }
}

RegressionTree build_tree(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params, int t) {
    TreeBuilder builder(x, y, params, derive_seed({params.seed, 0x7f0e5ULL, static_cast<std::uint64_t>(t)}));
    return builder.build();
}

} // namespace

RegressionForest fit_forest(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params,
                            std::vector<std::string> feature_names) {
    check_inputs(x, y, params);
    RegressionForest forest;
    forest.params = params;
    forest.feature_names = std::move(feature_names);
    forest.trees.resize(params.n_trees);
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < params.n_trees; ++t) {
        forest.trees[t] = build_tree(x, y, params, t);
    }
    return forest;
}

RegressionForest fit_forest_serial(const FeatureMatrix &x, std::span<const double> y, const ForestParams &params,
                                   std::vector<std::string> feature_names) {
    check_inputs(x, y, params);
    RegressionForest forest;
    forest.params = params;
    forest.feature_names = std::move(feature_names);
    forest.trees.reserve(params.n_trees);
    for (int t = 0; t < params.n_trees; ++t) {
        forest.trees.push_back(build_tree(x, y, params, t));
    }
    return forest;
}

void to_json(nlohmann::json &j, const ForestParams &p) {
    j = nlohmann::json{{"n_trees", p.n_trees},
                       {"max_depth", p.max_depth},
                       {"min_samples_split", p.min_samples_split},
                       {"min_samples_leaf", p.min_samples_leaf},
                       {"max_features", p.max_features},
                       {"bootstrap", p.bootstrap},
                       {"seed", p.seed}};
}

void from_json(const nlohmann::json &j, ForestParams &p) {
    j.at("n_trees").get_to(p.n_trees);
    j.at("max_depth").get_to(p.max_depth);
    j.at("min_samples_split").get_to(p.min_samples_split);
    j.at("min_samples_leaf").get_to(p.min_samples_leaf);
    j.at("max_features").get_to(p.max_features);
    j.at("bootstrap").get_to(p.bootstrap);
    j.at("seed").get_to(p.seed);
}

void to_json(nlohmann::json &j, const RegressionForest &f) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto &t : f.trees) {
        trees.push_back({{"feature", t.feature},
                         {"threshold", t.threshold},
                         {"left", t.left},
                         {"right", t.right},
                         {"value", t.value},
                         {"samples", t.samples}});
    }
    j = nlohmann::json{{"params", f.params}, {"feature_names", f.feature_names}, {"trees", std::move(trees)}};
}

void from_json(const nlohmann::json &j, RegressionForest &f) {
    j.at("params").get_to(f.params);
    j.at("feature_names").get_to(f.feature_names);
    f.trees.clear();
    for (const auto &jt : j.at("trees")) {
        RegressionTree t;
        jt.at("feature").get_to(t.feature);
        jt.at("threshold").get_to(t.threshold);
        jt.at("left").get_to(t.left);
        jt.at("right").get_to(t.right);
        jt.at("value").get_to(t.value);
        jt.at("samples").get_to(t.samples);
        f.trees.push_back(std::move(t));
    }
}

} // namespace asbench

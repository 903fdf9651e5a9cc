#pragma once

#include "asbench/problem_suite.hpp"
#include "asbench/sampling.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asbench {

enum class FeatureSet { Ela, NonInformative, Class, Scale };

std::string_view feature_set_name(FeatureSet set);
FeatureSet parse_feature_set(std::string_view name);

/// Named features of one instance, in a fixed order per feature set.
struct FeatureVector {
    FeatureSet set = FeatureSet::Ela;
    std::vector<std::string> names;
    std::vector<double> values;
    /// Degenerate computations that fell back to 0 (e.g. "lin_simple:singular").
    std::vector<std::string> flags;

    std::size_t size() const { return values.size(); }
    void add(std::string name, double value) {
        names.push_back(std::move(name));
        values.push_back(value);
    }
    std::optional<double> find(std::string_view name) const;
    double at(std::string_view name) const;
};

// ---- non-informative features: agg(tr(sc * y)) ----------------------------

enum class Transform { Sin, Cos, Root6, Root3, Sqrt, Square, Log1p };
enum class Aggregate { Mean, Median, Std, Q5, Q25, Q75, Q95 };

inline constexpr double kNoninfScalars[] = {0.2, 0.3, 0.5, 0.7, 1.0, 2.0, 3.0, 5.0, 7.0, 9.0};
inline constexpr Transform kNoninfTransforms[] = {Transform::Sin,  Transform::Cos,    Transform::Root6,
                                                  Transform::Root3, Transform::Sqrt, Transform::Square,
                                                  Transform::Log1p};
inline constexpr Aggregate kNoninfAggregates[] = {Aggregate::Mean, Aggregate::Median, Aggregate::Std,
                                                  Aggregate::Q5,   Aggregate::Q25,    Aggregate::Q75,
                                                  Aggregate::Q95};

std::string_view transform_name(Transform t);
std::string_view aggregate_name(Aggregate a);
double apply_transform(Transform t, double v);
double apply_aggregate(Aggregate a, std::span<const double> values);

struct FeatureRecipe {
    double scalar = 1.0;
    Transform transform = Transform::Sin;
    Aggregate aggregate = Aggregate::Mean;

    friend bool operator==(const FeatureRecipe &, const FeatureRecipe &) = default;
};

/// Ordered recipe list; entry j is applied identically to every instance.
struct GeneratorSpec {
    std::vector<FeatureRecipe> recipes;
    std::uint64_t seed = 0;
};

GeneratorSpec noninf_spec(int m, std::uint64_t seed);
FeatureVector noninf_features(std::span<const double> y_scaled, const GeneratorSpec &spec);
FeatureVector noninf_features(const DesignSample &sample, const GeneratorSpec &spec);

// ---- ELA-like landscape features ------------------------------------------

/// Number of features produced by ela_features.
inline constexpr int kElaFeatureCount = 46;

/// y-distribution, meta-model fits, dispersion, information content,
/// nearest-better clustering and PCA features on (X, y_scaled).
/// Requires n >= 10 * dim.
FeatureVector ela_features(const DesignSample &sample);

/// Number of peaks of a Gaussian KDE (Silverman bandwidth, 512-point grid)
/// that exceed 10% of the highest density.
int kde_peak_count(std::span<const double> values);

/// Adjusted R^2 of an ordinary least-squares fit with intercept.
/// Returns std::nullopt for a singular design or constant response.
struct LinearFit {
    std::vector<double> coefficients; // intercept first
    double adjusted_r2 = 0.0;
};
std::optional<LinearFit> least_squares_fit(const std::vector<std::vector<double>> &columns,
                                           std::span<const double> y);

// ---- trivial sets ----------------------------------------------------------

FeatureVector class_feature(const ProblemInstance &instance);
FeatureVector scale_feature(const DesignSample &sample);

// ---- whole-suite extraction ------------------------------------------------

struct InstanceFeatures {
    int class_id = 0;
    int instance_id = 0;
    FeatureVector features;
};

/// Per-instance sample seed used by every extractor of the suite.
std::uint64_t sample_seed(std::uint64_t master_seed, int class_id, int instance_id);

/// Samples each instance with n = samples_per_dim * dim points and extracts
/// `set`. Parallel over instances; output order follows `suite`.
std::vector<InstanceFeatures> extract_suite_features(const std::vector<ProblemInstance> &suite, FeatureSet set,
                                                     int samples_per_dim, std::uint64_t master_seed,
                                                     const GeneratorSpec &noninf);

/// Single-threaded reference of extract_suite_features.
std::vector<InstanceFeatures> extract_suite_features_serial(const std::vector<ProblemInstance> &suite,
                                                            FeatureSet set, int samples_per_dim,
                                                            std::uint64_t master_seed, const GeneratorSpec &noninf);

} // namespace asbench

#include "asbench/features.hpp"
#include "asbench/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace asbench;

TEST_CASE("LHS puts one point in every stratum") {
    const int n = 1250;
    const int dim = 5;
    const auto x = lhs_design(n, dim, 3);
    REQUIRE(x.size() == static_cast<std::size_t>(n * dim));
    for (int d = 0; d < dim; ++d) {
        std::vector<int> hits(n, 0);
        for (int i = 0; i < n; ++i) {
            const double v = x[i * dim + d];
            REQUIRE(v >= kDomainLower);
            REQUIRE(v < kDomainUpper);
            ++hits[static_cast<int>((v - kDomainLower) / (kDomainUpper - kDomainLower) * n)];
        }
        CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
    CHECK(lhs_design(n, dim, 3) == x);
    CHECK(lhs_design(n, dim, 4) != x);
}

TEST_CASE("lhs_sample evaluates and scales") {
    const auto inst = make_instance(8, 1, 5);
    const auto s = lhs_sample(inst, 250 * 5, 11);
    CHECK(s.n == 1250);
    REQUIRE(s.y_raw.size() == 1250u);
    for (int i = 0; i < s.n; i += 50) {
        CHECK(s.y_raw[i] == evaluate(inst, s.point(i)));
    }
    CHECK(*std::min_element(s.y_scaled.begin(), s.y_scaled.end()) == 0.0);
    CHECK(*std::max_element(s.y_scaled.begin(), s.y_scaled.end()) == 1.0);
    const std::vector<double> flat = {2.0, 2.0, 2.0};
    CHECK(min_max_scale(flat) == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("noninf_spec draws from the documented sets") {
    const auto spec = noninf_spec(85, 5);
    REQUIRE(spec.recipes.size() == 85);
    const std::set<double> scalars(std::begin(kNoninfScalars), std::end(kNoninfScalars));
    for (const auto &r : spec.recipes) {
        CHECK(scalars.count(r.scalar) == 1);
    }
    CHECK(noninf_spec(85, 5).recipes == spec.recipes);
    CHECK(noninf_spec(85, 6).recipes != spec.recipes);
    CHECK_THROWS(noninf_spec(0, 1));
}

TEST_CASE("non-informative template by hand") {
    GeneratorSpec spec;
    spec.recipes = {{2.0, Transform::Square, Aggregate::Mean}};
    const std::vector<double> y = {1.0, 2.0};
    // mean((2*1)^2, (2*2)^2) = 10
    CHECK(noninf_features(y, spec).values.at(0) == doctest::Approx(10.0));

    spec.recipes = {{3.0, Transform::Log1p, Aggregate::Std}};
    const std::vector<double> zeros(20, 0.0);
    CHECK(noninf_features(zeros, spec).values.at(0) == 0.0);
}

TEST_CASE("non-informative features ignore point order and X") {
    const auto inst = make_instance(10, 1, 5);
    const auto s = lhs_sample(inst, 500, 2);
    const auto spec = noninf_spec(46, 8);
    auto shuffled = s.y_scaled;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 123, shuffled.end());
    const auto a = noninf_features(s, spec);
    const auto b = noninf_features(shuffled, spec);
    REQUIRE(a.size() == 46u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a.values[k] == doctest::Approx(b.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("quantiles interpolate linearly") {
    const std::vector<double> v = {4.0, 1.0, 3.0, 2.0, 5.0};
    CHECK(apply_aggregate(Aggregate::Median, v) == 3.0);
    CHECK(apply_aggregate(Aggregate::Q25, v) == 2.0);
    CHECK(apply_aggregate(Aggregate::Q5, v) == doctest::Approx(1.2));
    CHECK(apply_aggregate(Aggregate::Q95, v) == doctest::Approx(4.8));
    CHECK(apply_aggregate(Aggregate::Std, v) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("ELA vector shape and determinism") {
    const auto inst = make_instance(5, 1, 5);
    const auto s = lhs_sample(inst, 1250, 4);
    const auto a = ela_features(s);
    CHECK(a.size() == static_cast<std::size_t>(kElaFeatureCount));
    CHECK(a.names.size() == a.values.size());
    CHECK(std::set<std::string>(a.names.begin(), a.names.end()).size() == a.names.size());
    for (const double v : a.values) {
        CHECK(std::isfinite(v));
    }
    const auto b = ela_features(s);
    CHECK(a.values == b.values);
    CHECK(ela_features(lhs_sample(make_instance(17, 3, 5), 1250, 4)).names == a.names);
}

TEST_CASE("ELA linear fit is exact for a linear function") {
    DesignSample s;
    s.dim = 5;
    s.n = 500;
    s.x = lhs_design(s.n, s.dim, 12);
    for (int i = 0; i < s.n; ++i) {
        s.y_raw.push_back(s.point(i)[0]);
    }
    s.y_scaled = min_max_scale(s.y_raw);
    const auto f = ela_features(s);
    CHECK(f.at("ela_meta.lin_simple.adj_r2") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("ELA needs ten points per dimension") {
    const auto s = lhs_sample(make_instance(1, 1, 5), 49, 1);
    CHECK_THROWS(ela_features(s));
}

TEST_CASE("y-distribution peak counts of sphere and Rastrigin variants") {
    auto median_peaks = [](int class_id) {
        std::vector<double> v;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            v.push_back(
                ela_features(lhs_sample(make_instance(class_id, 1, 5), 1250, seed)).at("ela_distr.number_of_peaks"));
        }
        std::sort(v.begin(), v.end());
        return 0.5 * (v[14] + v[15]);
    };
    const double sphere = median_peaks(1);
    // The quadratic envelope dominates the plain Rastrigin y-distribution at
    // this density threshold, so only the asymmetric variant separates.
    CHECK(median_peaks(4) > sphere);
    CHECK(median_peaks(3) >= sphere);
}

TEST_CASE("class and scale features") {
    const auto inst = make_instance(13, 4, 5);
    CHECK(class_feature(inst).at("class") == 13.0);
    DesignSample s;
    s.y_raw = {0.0, 10.0};
    CHECK(scale_feature(s).at("f_scale") == 10.0);
    s.y_raw = {3.0, 3.0, 3.0};
    CHECK(scale_feature(s).at("f_scale") == 0.0);
    const auto base = lhs_sample(inst, 1250, 6);
    const auto big = lhs_sample(rescale(inst, 1e2), 1250, 6);
    CHECK(scale_feature(big).at("f_scale") == doctest::Approx(1e2 * scale_feature(base).at("f_scale")).epsilon(1e-9));
}

TEST_CASE("fitness-based extractors ignore positive rescaling") {
    const auto inst = make_instance(18, 2, 5);
    const auto a = lhs_sample(inst, 1250, 5);
    const auto b = lhs_sample(rescale(inst, 1e-2), 1250, 5);
    const auto spec = noninf_spec(46, 3);
    const auto na = noninf_features(a, spec);
    const auto nb = noninf_features(b, spec);
    for (std::size_t k = 0; k < na.size(); ++k) {
        CHECK(na.values[k] == doctest::Approx(nb.values[k]).epsilon(1e-9));
    }
    const auto ea = ela_features(a);
    const auto eb = ela_features(b);
    for (std::size_t k = 0; k < ea.size(); ++k) {
        CAPTURE(ea.names[k]);
        CHECK(ea.values[k] == doctest::Approx(eb.values[k]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("suite extraction is thread-independent") {
    const auto suite = list_suite(5, 2);
    const auto spec = noninf_spec(46, 1);
    for (const auto set : {FeatureSet::Ela, FeatureSet::NonInformative, FeatureSet::Class, FeatureSet::Scale}) {
        const auto p = extract_suite_features(suite, set, 50, 9, spec);
        const auto s = extract_suite_features_serial(suite, set, 50, 9, spec);
        REQUIRE(p.size() == s.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(p[i].features.values == s[i].features.values);
        }
    }
}

TEST_CASE("feature set names round-trip") {
    for (const auto set : {FeatureSet::Ela, FeatureSet::NonInformative, FeatureSet::Class, FeatureSet::Scale}) {
        CHECK(parse_feature_set(feature_set_name(set)) == set);
    }
    CHECK_THROWS(parse_feature_set("cells"));
}

#include "asbench/features.hpp"
#include "asbench/problem_suite.hpp"
#include "asbench/rng.hpp"
#include "asbench/sampling.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace asbench;

namespace {

double f_range(const ProblemInstance &inst, int n, std::uint64_t seed) {
    const auto x = lhs_design(n, inst.dim, seed);
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int i = 0; i < n; ++i) {
        const double v = evaluate(inst, {x.data() + i * inst.dim, static_cast<std::size_t>(inst.dim)});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
}

} // namespace

TEST_CASE("make_instance is deterministic and bounded") {
    CHECK(make_instance(1, 1, 5) == make_instance(1, 1, 5));
    CHECK_FALSE(make_instance(1, 1, 5) == make_instance(1, 2, 5));
    for (int c = 1; c <= kNumClasses; ++c) {
        for (int i = 1; i <= 15; ++i) {
            const auto inst = make_instance(c, i, 5);
            for (const double v : inst.x_opt) {
                CHECK(v >= -4.0);
                CHECK(v <= 4.0);
            }
            CHECK(inst.f_opt >= -100.0);
            CHECK(inst.f_opt <= 100.0);
            CHECK(inst.scale_factor == 1.0);
        }
    }
}

TEST_CASE("unknown class ids are rejected") {
    CHECK_THROWS_AS(make_instance(0, 1, 5), UnknownClassError);
    CHECK_THROWS_AS(make_instance(25, 1, 5), UnknownClassError);
    CHECK_THROWS(make_instance(1, 0, 5));
    CHECK_THROWS(make_instance(1, 1, 1));
}

TEST_CASE("rotations are orthogonal") {
    for (int c = 1; c <= kNumClasses; ++c) {
        const auto inst = make_instance(c, 3, 5);
        for (const auto &r : inst.rotations) {
            const Eigen::MatrixXd e = r.transpose() * r - Eigen::MatrixXd::Identity(5, 5);
            CHECK(e.cwiseAbs().maxCoeff() <= 1e-10);
        }
    }
}

TEST_CASE("optimum is attained at x_opt for the whole suite") {
    for (const auto &inst : list_suite(5, 15)) {
        CAPTURE(inst.class_id);
        CAPTURE(inst.instance_id);
        CHECK(std::fabs(evaluate(inst, inst.x_opt) - inst.f_opt) <= 1e-9);
        CHECK(evaluate_precision(inst, inst.x_opt) == 0.0);
    }
}

TEST_CASE("sphere evaluates to the sum of squares") {
    auto inst = make_instance(1, 1, 5);
    std::fill(inst.x_opt.begin(), inst.x_opt.end(), 0.0);
    inst.f_opt = 0.0;
    const std::vector<double> x = {1, 0, 0, 0, 0};
    CHECK(evaluate(inst, x) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("evaluate rejects a wrong dimension") {
    const auto inst = make_instance(1, 1, 5);
    CHECK_THROWS(evaluate(inst, std::vector<double>{0.0, 0.0}));
}

TEST_CASE("no point of the domain is below the optimum") {
    int checked = 0;
    for (const auto &inst : list_suite(5, 15)) {
        const int n = 10000;
        const auto x = lhs_design(n, 5, derive_seed({77, static_cast<std::uint64_t>(inst.class_id),
                                                     static_cast<std::uint64_t>(inst.instance_id)}));
        for (int i = 0; i < n; ++i) {
            const std::span<const double> p(x.data() + i * 5, 5);
            if (evaluate_precision(inst, p) < 0.0 || evaluate(inst, p) < inst.f_opt - 1e-9) {
                FAIL("value below f_opt on class " << inst.class_id << " instance " << inst.instance_id);
            }
            ++checked;
        }
    }
    CHECK(checked == 3600000);
}

TEST_CASE("ill-conditioned ellipsoid spans far more than the sphere") {
    const double sphere = f_range(make_instance(1, 1, 5), 10000, 5);
    const double ellipsoid = f_range(make_instance(2, 1, 5), 10000, 5);
    CHECK(ellipsoid / sphere >= 1e3);
}

TEST_CASE("class f-ranges span at least six orders of magnitude") {
    double lo = INFINITY;
    double hi = 0.0;
    for (int c = 1; c <= kNumClasses; ++c) {
        const double r = f_range(make_instance(c, 1, 5), 2000, 11);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    CHECK(hi / lo >= 1e6);
}

TEST_CASE("rescale multiplies precision and keeps the optimum") {
    const auto inst = make_instance(7, 2, 5);
    CHECK_THROWS(rescale(inst, 0.0));
    CHECK_THROWS(rescale(inst, -1.0));
    const auto same = rescale(inst, 1.0);
    const auto big = rescale(inst, 10.0);
    CHECK(big.x_opt == inst.x_opt);
    CHECK(big.f_opt == 10.0 * inst.f_opt);
    CHECK(evaluate(big, big.x_opt) == big.f_opt);
    Rng rng(3);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> x(5);
        for (auto &v : x) {
            v = rng.uniform(-5, 5);
        }
        CHECK(evaluate(same, x) == evaluate(inst, x));
        const double lhs = evaluate(big, x) - 10.0 * inst.f_opt;
        const double rhs = 10.0 * (evaluate(inst, x) - inst.f_opt);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        CHECK(evaluate_precision(big, x) == doctest::Approx(10.0 * evaluate_precision(inst, x)).epsilon(1e-12));
    }
}

TEST_CASE("rescaling preserves comparison order") {
    const auto inst = make_instance(21, 1, 5);
    Rng rng(9);
    for (const double factor : {1e-2, 1e-1, 10.0, 1e2}) {
        const auto r = rescale(inst, factor);
        for (int k = 0; k < 100; ++k) {
            std::vector<double> a(5);
            std::vector<double> b(5);
            for (int d = 0; d < 5; ++d) {
                a[d] = rng.uniform(-5, 5);
                b[d] = rng.uniform(-5, 5);
            }
            CHECK((evaluate_precision(inst, a) < evaluate_precision(inst, b)) ==
                  (evaluate_precision(r, a) < evaluate_precision(r, b)));
        }
    }
}

TEST_CASE("list_suite ordering") {
    const auto suite = list_suite(5, 15);
    REQUIRE(suite.size() == 360);
    CHECK(suite.front() == make_instance(1, 1, 5));
    CHECK(list_suite(5, 1).size() == 24);
    for (std::size_t i = 1; i < suite.size(); ++i) {
        CHECK(std::make_pair(suite[i - 1].class_id, suite[i - 1].instance_id) <
              std::make_pair(suite[i].class_id, suite[i].instance_id));
    }
    CHECK_THROWS(list_suite(5, 0));
}

TEST_CASE("instances of a class look alike through non-informative features") {
    const auto suite = list_suite(5, 15);
    const auto spec = noninf_spec(kElaFeatureCount, 42);
    const auto rows = extract_suite_features(suite, FeatureSet::NonInformative, 50, 7, spec);
    std::vector<double> within;
    std::vector<double> across;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < rows[i].features.size(); ++k) {
                const double t = rows[i].features.values[k] - rows[j].features.values[k];
                d += t * t;
            }
            (rows[i].class_id == rows[j].class_id ? within : across).push_back(std::sqrt(d));
        }
    }
    CHECK(median(within) < median(across));
}

#include "asbench/evaluation.hpp"
#include "asbench/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace asbench;

namespace {

std::vector<InstanceKey> suite_keys(int classes = 24, int instances = 15) {
    std::vector<InstanceKey> keys;
    for (int c = 1; c <= classes; ++c) {
        for (int i = 1; i <= instances; ++i) {
            keys.emplace_back(c, i);
        }
    }
    return keys;
}

} // namespace

TEST_CASE("PRE reference values") {
    const std::vector<double> id = {1, 2, 3, 4, 5};
    const std::vector<double> rev = {5, 4, 3, 2, 1};
    CHECK(pre(id, id) == 0.0);
    CHECK(pre(id, rev) == 1.0);
    CHECK(pre(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) == doctest::Approx(1.0 / 3.0));
    // A tie in one ranking against a strict order counts as a mismatch.
    CHECK(pre(std::vector<double>{1.5, 1.5, 3}, std::vector<double>{1, 2, 3}) == doctest::Approx(2.0 / 6.0));
    CHECK_THROWS(pre(id, std::vector<double>{1, 2}));
    CHECK_THROWS(pre(std::vector<double>{1}, std::vector<double>{1}));
}

TEST_CASE("PRE is symmetric and quantized for strict rankings") {
    Rng rng(1);
    std::vector<double> a = {1, 2, 3, 4, 5};
    std::vector<double> b = a;
    for (int k = 0; k < 500; ++k) {
        rng.shuffle(a.begin(), a.end());
        rng.shuffle(b.begin(), b.end());
        const double p = pre(a, b);
        CHECK(p == pre(b, a));
        const double units = p * 20.0 / 2.0;
        CHECK(units == std::round(units));
    }
}

TEST_CASE("PRE ignores strictly increasing transforms") {
    const std::vector<double> v = {0.2, 3.0, 0.01, 7.5, 0.2};
    std::vector<double> t;
    for (const double x : v) {
        t.push_back(std::exp(x) * 4.0 - 1.0);
    }
    const std::vector<double> truth = {2, 1, 3, 5, 4};
    CHECK(pre(v, truth) == pre(t, truth));
}

TEST_CASE("MSE") {
    CHECK(mse(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
    CHECK(mse(std::vector<double>{0, 0}, std::vector<double>{1, 3}) == 5.0);
    const std::vector<double> a = {0.5, 2.0, -1.0};
    const std::vector<double> b = {1.5, 1.0, 4.0};
    std::vector<double> ca;
    std::vector<double> cb;
    for (int i = 0; i < 3; ++i) {
        ca.push_back(100 * a[i]);
        cb.push_back(100 * b[i]);
    }
    CHECK(mse(ca, cb) == doctest::Approx(1e4 * mse(a, b)));
    CHECK_THROWS(mse(a, std::vector<double>{1}));
    CHECK_THROWS(mse(std::vector<double>{}, std::vector<double>{}));
}

TEST_CASE("LIO splits with defaults") {
    const auto keys = suite_keys();
    const auto plans = lio_splits(keys, 1.0 / 3.0, 10, 5);
    REQUIRE(plans.size() == 10);
    for (const auto &p : plans) {
        CHECK(p.kind == SplitKind::LIO);
        CHECK(p.train.size() == 240);
        CHECK(p.test.size() == 120);
        std::set<InstanceKey> all(p.train.begin(), p.train.end());
        all.insert(p.test.begin(), p.test.end());
        CHECK(all.size() == 360);
    }
    CHECK(plans[0].test != plans[1].test);
    const auto one = lio_splits(keys, 1.0 / 15.0, 1, 5);
    CHECK(one[0].test.size() == 24);
    CHECK_THROWS(lio_splits(keys, 0.0, 1, 1));
    CHECK_THROWS(lio_splits(keys, 1.0, 1, 1));
    CHECK_THROWS(lio_splits(keys, 0.99, 1, 1));
}

TEST_CASE("LPO splits") {
    const auto plans = lpo_splits(suite_keys());
    REQUIRE(plans.size() == 24);
    std::set<InstanceKey> seen;
    for (const auto &p : plans) {
        CHECK(p.test.size() == 15);
        CHECK(p.train.size() == 345);
        for (const auto &k : p.test) {
            CHECK(k.first == p.fold_id);
            CHECK(seen.insert(k).second);
        }
    }
    CHECK(plans[6].fold_id == 7);
}

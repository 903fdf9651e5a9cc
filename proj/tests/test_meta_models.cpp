#include "asbench/evaluation.hpp"
#include "asbench/meta_models.hpp"

#include <doctest.h>

#include <set>

using namespace asbench;

namespace {

// Two features per instance; targets depend on the first one.
struct Toy {
    FeatureTable features;
    TargetTable targets;
    std::vector<InstanceKey> keys;
};

Toy toy() {
    Toy t;
    t.targets.kind = TargetKind::Rank;
    for (int c = 1; c <= 4; ++c) {
        for (int i = 1; i <= 5; ++i) {
            const InstanceKey key{c, i};
            FeatureVector fv;
            fv.set = FeatureSet::Ela;
            fv.add("f0", c + 0.01 * i);
            fv.add("f1", 10.0 - i);
            t.features[key] = fv;
            RankVector r{};
            for (int a = 0; a < 5; ++a) {
                r[a] = static_cast<double>(1 + (a + c) % 5);
            }
            if (i == 5) {
                std::swap(r[0], r[1]);
            }
            t.targets.values[key] = r;
            t.keys.push_back(key);
        }
    }
    return t;
}

} // namespace

TEST_CASE("kind names round-trip") {
    for (const auto k : {MetaKind::Random, MetaKind::Mean, MetaKind::Ela, MetaKind::NonInformative, MetaKind::Class,
                         MetaKind::MeanPrecision, MetaKind::MeanRank, MetaKind::RfPrecision, MetaKind::RfRank}) {
        CHECK(parse_meta_kind(meta_kind_name(k)) == k);
    }
    CHECK_THROWS(parse_meta_kind("svm"));
}

TEST_CASE("mean model predicts the training mean everywhere") {
    const auto t = toy();
    const auto m = fit_meta(MetaKind::Mean, {}, t.targets, t.keys, {});
    AlgorithmValues expect{};
    for (const auto &k : t.keys) {
        for (int a = 0; a < 5; ++a) {
            expect[a] += t.targets.at(k)[a] / 20.0;
        }
    }
    const auto pred = predict_values(m, {}, {{1, 1}, {4, 3}});
    for (const auto &[key, v] : pred) {
        for (int a = 0; a < 5; ++a) {
            CHECK(v[a] == doctest::Approx(expect[a]));
        }
    }
    const auto ranks = predict_ranks(m, {}, t.keys);
    for (const auto &[key, r] : ranks) {
        CHECK(r == ranks.begin()->second);
    }
}

TEST_CASE("random model emits seeded permutations") {
    const auto t = toy();
    const auto m = fit_meta(MetaKind::Random, {}, t.targets, t.keys, {}, 77);
    const auto a = predict_ranks(m, {}, t.keys);
    const auto b = predict_ranks(fit_meta(MetaKind::Random, {}, t.targets, t.keys, {}, 77), {}, t.keys);
    CHECK(a == b);
    std::set<std::vector<double>> distinct;
    for (const auto &[key, r] : a) {
        std::vector<double> sorted(r.begin(), r.end());
        distinct.insert(sorted);
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<double>{1, 2, 3, 4, 5});
    }
    CHECK(distinct.size() > 5);
}

TEST_CASE("unbagged single-tree rf-rank reproduces its training ranks") {
    const auto t = toy();
    ForestParams p;
    p.n_trees = 1;
    p.bootstrap = false;
    const auto m = fit_meta(MetaKind::RfRank, t.features, t.targets, t.keys, p);
    double total = 0.0;
    for (const auto &[key, r] : predict_ranks(m, t.features, t.keys)) {
        total += pre(r, t.targets.at(key));
    }
    CHECK(total == 0.0);
}

TEST_CASE("precision and rank forests share one code path") {
    const auto t = toy();
    TargetTable prec = t.targets;
    prec.kind = TargetKind::Precision;
    ForestParams p;
    p.seed = 4;
    const auto a = fit_meta(MetaKind::RfRank, t.features, t.targets, t.keys, p);
    const auto b = fit_meta(MetaKind::RfPrecision, t.features, prec, t.keys, p);
    CHECK(predict_values(a, t.features, t.keys) == predict_values(b, t.features, t.keys));
}

TEST_CASE("predict_ranks orders by predicted value") {
    MetaModel m;
    m.kind = MetaKind::MeanPrecision;
    m.constants = {0.01, 5, 0.3, 2, 0.2};
    const auto r = predict_ranks(m, {}, {{1, 1}});
    CHECK(r.at({1, 1}) == RankVector{1, 5, 3, 4, 2});
    for (auto &v : m.constants) {
        v = std::log(v) * 3 + 1;
    }
    CHECK(predict_ranks(m, {}, {{1, 1}}).at({1, 1}) == RankVector{1, 5, 3, 4, 2});
}

TEST_CASE("missing features are reported") {
    auto t = toy();
    const auto m = fit_meta(MetaKind::Ela, t.features, t.targets, t.keys, {});
    FeatureTable partial = t.features;
    partial.erase({2, 2});
    CHECK_THROWS(predict_ranks(m, partial, {{2, 2}}));
    FeatureTable renamed = t.features;
    renamed[{2, 2}].names[1] = "other";
    CHECK_THROWS(predict_ranks(m, renamed, {{2, 2}}));
    CHECK_THROWS(fit_meta(MetaKind::Ela, partial, t.targets, t.keys, {}));
    TargetTable missing = t.targets;
    missing.values.erase({3, 1});
    CHECK_THROWS(fit_meta(MetaKind::Ela, t.features, missing, t.keys, {}));
}

TEST_CASE("model JSON lists one forest per algorithm") {
    const auto t = toy();
    ForestParams p;
    p.n_trees = 2;
    const nlohmann::json j = fit_meta(MetaKind::Class, t.features, t.targets, t.keys, p);
    CHECK(j.at("kind") == "class");
    CHECK(j.at("forests").size() == 5);
}

#include "asbench/metrics.hpp"

#include <doctest.h>

#include <numeric>

using namespace asbench;

namespace {

// A table whose best_f values are given per (algorithm, repetition).
RunTable table_from(const std::vector<std::array<double, 5>> &per_rep, int class_id = 1, int instance_id = 1) {
    std::vector<RunRecord> recs;
    for (const auto a : kPortfolio) {
        for (std::size_t r = 0; r < per_rep.size(); ++r) {
            RunRecord rec;
            rec.class_id = class_id;
            rec.instance_id = instance_id;
            rec.algorithm = a;
            rec.repetition = static_cast<int>(r);
            rec.best_f = per_rep[r][algorithm_index(a)];
            rec.precision = rec.best_f;
            recs.push_back(rec);
        }
    }
    return RunTable(recs, static_cast<int>(per_rep.size()));
}

} // namespace

TEST_CASE("rank_with_ties") {
    CHECK(rank_with_ties(std::vector<double>{0.1, 0.5, 0.3}) == std::vector<double>{1, 3, 2});
    CHECK(rank_with_ties(std::vector<double>{0.1, 0.1, 0.3}) == std::vector<double>{1.5, 1.5, 3});
    CHECK(rank_with_ties(std::vector<double>{7, 7, 7, 7, 7}) == std::vector<double>{3, 3, 3, 3, 3});
    const auto r = rank_with_ties(std::vector<double>{4, 2, 2, 9, 1, 2});
    CHECK(std::accumulate(r.begin(), r.end(), 0.0) == 21.0);
    CHECK(r == std::vector<double>{5, 3, 3, 6, 1, 3});
}

TEST_CASE("mean ranks") {
    SUBCASE("one algorithm always best") {
        std::vector<std::array<double, 5>> reps(30, {5, 4, 3, 2, 1});
        const auto m = mean_ranks(table_from(reps), 1, 1);
        CHECK(m[algorithm_index(AlgorithmId::CMAES)] == 1.0);
        CHECK(m[algorithm_index(AlgorithmId::GA)] == 5.0);
    }
    SUBCASE("all tied") {
        std::vector<std::array<double, 5>> reps(30, {2, 2, 2, 2, 2});
        const auto m = mean_ranks(table_from(reps), 1, 1);
        for (const double v : m) {
            CHECK(v == 3.0);
        }
    }
    SUBCASE("alternating winners share the mean rank") {
        std::vector<std::array<double, 5>> reps;
        for (int r = 0; r < 30; ++r) {
            reps.push_back(r < 15 ? std::array<double, 5>{1, 2, 5, 6, 7} : std::array<double, 5>{2, 1, 5, 6, 7});
        }
        const auto m = mean_ranks(table_from(reps), 1, 1);
        CHECK(m[0] == m[1]);
        CHECK(m[0] == 1.5);
    }
    SUBCASE("ranks are per repetition, not of the means") {
        // GA is better in 2 of 3 repetitions but has the worse mean best_f.
        std::vector<std::array<double, 5>> reps = {{1, 2, 1000, 1000, 1000}, {1, 2, 1000, 1000, 1000}, {100, 2, 1000, 1000, 1000}};
        const auto m = mean_ranks(table_from(reps), 1, 1);
        CHECK(m[0] < m[1]);
    }
}

TEST_CASE("mean_ranks rejects incomplete tables") {
    std::vector<std::array<double, 5>> reps(3, {1, 2, 3, 4, 5});
    auto recs = table_from(reps).records();
    recs.erase(recs.begin() + 4);
    CHECK_THROWS_AS(mean_ranks(RunTable(recs, 3), 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(mean_ranks(table_from(reps), 2, 1), std::invalid_argument);
}

TEST_CASE("target precision") {
    auto inst = make_instance(1, 1, 5);
    RunRecord r;
    r.class_id = 1;
    r.instance_id = 1;
    r.best_f = inst.f_opt;
    CHECK(target_precision(r, inst) == 0.0);
    inst.f_opt = 1.5;
    r.best_f = 3.5;
    CHECK(target_precision(r, inst) == 2.0);
    r.best_f = 1.0;
    CHECK_THROWS_AS(target_precision(r, inst), IntegrityError);
    r.best_f = 3.5;
    r.instance_id = 2;
    CHECK_THROWS_AS(target_precision(r, inst), IntegrityError);
}

TEST_CASE("build_targets on a real table") {
    const auto suite = list_suite(5, 2);
    const auto table = run_portfolio(suite, 5000, 5, 77);
    const auto ranks = build_targets(table, TargetKind::Rank);
    const auto prec = build_targets(table, TargetKind::Precision);
    CHECK(ranks.values.size() == 48);
    for (const auto &[key, v] : ranks.values) {
        CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(15.0));
        for (const double r : v) {
            CHECK(r >= 1.0);
            CHECK(r <= 5.0);
        }
    }
    for (const auto &[key, v] : prec.values) {
        for (const double p : v) {
            CHECK(p >= 0.0);
        }
    }
    for (int i = 1; i <= 2; ++i) {
        const auto &sphere = prec.at({1, i});
        CHECK(sphere[algorithm_index(AlgorithmId::CMAES)] < sphere[algorithm_index(AlgorithmId::GA)]);
    }
    CHECK_THROWS_AS(prec.at({25, 1}), std::out_of_range);
}

TEST_CASE("rank targets are rescaling-invariant, precision targets linear") {
    const auto inst = make_instance(13, 1, 5);
    const auto base = run_portfolio({inst}, 5000, 10, 3);
    for (const double factor : {1e-2, 1.0, 1e2}) {
        const auto scaled = run_portfolio({rescale(inst, factor)}, 5000, 10, 3);
        CHECK(mean_ranks(scaled, 13, 1) == mean_ranks(base, 13, 1));
        const auto p0 = build_targets(base, TargetKind::Precision).at({13, 1});
        const auto p1 = build_targets(scaled, TargetKind::Precision).at({13, 1});
        for (int a = 0; a < 5; ++a) {
            CHECK(p1[a] == doctest::Approx(factor * p0[a]).epsilon(1e-12));
        }
    }
}

TEST_CASE("target kind names") {
    CHECK(parse_target_kind("rank") == TargetKind::Rank);
    CHECK(parse_target_kind("precision") == TargetKind::Precision);
    CHECK_THROWS(parse_target_kind("ert"));
}

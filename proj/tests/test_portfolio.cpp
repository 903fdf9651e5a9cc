#include "asbench/portfolio.hpp"

#include <doctest.h>

#include <omp.h>

#include <algorithm>
#include <cmath>

using namespace asbench;

TEST_CASE("portfolio is the five algorithms in order") {
    REQUIRE(kPortfolio.size() == 5);
    CHECK(algorithm_name(kPortfolio[0]) == "GA");
    CHECK(algorithm_name(kPortfolio[1]) == "DE");
    CHECK(algorithm_name(kPortfolio[2]) == "PSO");
    CHECK(algorithm_name(kPortfolio[3]) == "ES");
    CHECK(algorithm_name(kPortfolio[4]) == "CMAES");
    for (const auto a : kPortfolio) {
        CHECK(parse_algorithm(algorithm_name(a)) == a);
    }
    CHECK_THROWS(parse_algorithm("SA"));
}

TEST_CASE("runs are reproducible and respect the budget") {
    const auto inst = make_instance(1, 1, 5);
    for (const auto a : kPortfolio) {
        CAPTURE(algorithm_name(a));
        const auto r1 = run(a, inst, 5000, 123);
        const auto r2 = run(a, inst, 5000, 123);
        CHECK(r1 == r2);
        CHECK(r1.evals_used <= 5000);
        CHECK(r1.evals_used == (5000 / population_size(a, 5)) * population_size(a, 5));
        CHECK(r1.best_f >= inst.f_opt);
        CHECK(r1.precision >= 0.0);
    }
}

TEST_CASE("budget below one population is an error") {
    const auto inst = make_instance(1, 1, 5);
    for (const auto a : kPortfolio) {
        CHECK_THROWS(run(a, inst, population_size(a, 5) - 1, 1));
        CHECK_NOTHROW(run(a, inst, population_size(a, 5), 1));
    }
}

TEST_CASE("CMA-ES solves the 5-D sphere") {
    const auto inst = make_instance(1, 1, 5);
    for (std::uint64_t s = 0; s < 30; ++s) {
        CHECK(run(AlgorithmId::CMAES, inst, 5000, s).best_f - inst.f_opt < 1e-6);
    }
}

TEST_CASE("best-so-far traces are non-increasing and end at the run result") {
    for (const int c : {3, 8, 16, 21}) {
        const auto inst = make_instance(c, 2, 5);
        for (const auto a : kPortfolio) {
            const auto trace = run_trace(a, inst, 2000, 17);
            const auto rec = run(a, inst, 2000, 17);
            REQUIRE(static_cast<int>(trace.size()) == rec.evals_used);
            CHECK(std::is_sorted(trace.rbegin(), trace.rend()));
            CHECK(trace.back() == rec.precision);
            // Truncating the trace can only leave a worse or equal best value.
            for (std::size_t k = 0; k < trace.size(); k += 97) {
                CHECK(trace[k] >= trace.back());
            }
        }
    }
}

TEST_CASE("paired runs on a rescaled instance follow identical trajectories") {
    for (const int c : {4, 13, 24}) {
        const auto inst = make_instance(c, 1, 5);
        for (const double factor : {1e-2, 1e2}) {
            const auto scaled = rescale(inst, factor);
            for (const auto a : kPortfolio) {
                const auto r = run(a, inst, 5000, 99);
                const auto rs = run(a, scaled, 5000, 99);
                CHECK(rs.precision == doctest::Approx(factor * r.precision).epsilon(1e-12));
                CHECK(rs.best_f - factor * inst.f_opt ==
                      doctest::Approx(factor * (r.best_f - inst.f_opt)).epsilon(1e-9).scale(factor));
                CHECK(rs.evals_used == r.evals_used);
            }
        }
    }
}

TEST_CASE("run_portfolio layout and thread independence") {
    const std::vector<ProblemInstance> suite = {make_instance(1, 1, 5), make_instance(15, 2, 5),
                                                make_instance(22, 3, 5)};
    const auto serial = run_portfolio_serial(suite, 1000, 3, 5);
    REQUIRE(serial.size() == 3u * 5u * 3u);
    CHECK(serial.complete());
    CHECK(serial.records()[0].class_id == 1);
    CHECK(serial.records()[0].algorithm == AlgorithmId::GA);
    CHECK(serial.records()[1].repetition == 1);
    for (const int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        const auto parallel = run_portfolio(suite, 1000, 3, 5);
        CHECK(parallel.records() == serial.records());
    }
    omp_set_num_threads(omp_get_num_procs());
    const auto runs = serial.lookup(15, 2, AlgorithmId::PSO);
    REQUIRE(runs.size() == 3);
    CHECK(runs[2].repetition == 2);
    CHECK(runs[1].seed == run_seed(5, 15, 2, AlgorithmId::PSO, 1));
    CHECK_THROWS_AS(serial.lookup(2, 1, AlgorithmId::PSO), std::out_of_range);
}

TEST_CASE("per-run seeds are distinct across the key space") {
    std::vector<std::uint64_t> seeds;
    for (int c = 1; c <= 24; ++c) {
        for (int i = 1; i <= 15; ++i) {
            for (const auto a : kPortfolio) {
                for (int r = 0; r < 4; ++r) {
                    seeds.push_back(run_seed(1, c, i, a, r));
                }
            }
        }
    }
    std::sort(seeds.begin(), seeds.end());
    CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("incomplete tables are detected") {
    const auto inst = make_instance(1, 1, 5);
    std::vector<RunRecord> recs;
    for (const auto a : kPortfolio) {
        for (int r = 0; r < 2; ++r) {
            auto rec = run(a, inst, 500, run_seed(0, 1, 1, a, r));
            rec.repetition = r;
            recs.push_back(rec);
        }
    }
    CHECK(RunTable(recs, 2).complete());
    recs.pop_back();
    CHECK_FALSE(RunTable(recs, 2).complete());
}

// Serial reference vs OpenMP kernels. Set OMP_NUM_THREADS to compare.
#include "asbench/features.hpp"
#include "asbench/forest.hpp"
#include "asbench/portfolio.hpp"
#include "asbench/problem_suite.hpp"
#include "asbench/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace asbench;

const std::vector<ProblemInstance> &suite() {
    static const auto s = list_suite(5, 1);
    return s;
}

void BM_portfolio_serial(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_portfolio_serial(suite(), 1000, 1, 7));
    }
}

void BM_portfolio_omp(benchmark::State &state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_portfolio(suite(), 1000, 1, 7));
    }
}

void BM_ela_serial(benchmark::State &state) {
    const auto spec = noninf_spec(46, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_suite_features_serial(suite(), FeatureSet::Ela, 250, 7, spec));
    }
}

void BM_ela_omp(benchmark::State &state) {
    const auto spec = noninf_spec(46, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extract_suite_features(suite(), FeatureSet::Ela, 250, 7, spec));
    }
}

struct ForestData {
    FeatureMatrix x{240, 46};
    std::vector<double> y;

    ForestData() {
        Rng rng(11);
        for (auto &v : x.data) {
            v = rng.uniform(-1.0, 1.0);
        }
        for (std::size_t r = 0; r < x.rows; ++r) {
            y.push_back(x(r, 0) * x(r, 1) + x(r, 2));
        }
    }
};

const ForestData &forest_data() {
    static const ForestData d;
    return d;
}

void BM_forest_serial(benchmark::State &state) {
    const auto &d = forest_data();
    ForestParams p;
    p.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_forest_serial(d.x, d.y, p));
    }
}

void BM_forest_omp(benchmark::State &state) {
    const auto &d = forest_data();
    ForestParams p;
    p.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_forest(d.x, d.y, p));
    }
}

} // namespace

BENCHMARK(BM_portfolio_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_portfolio_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ela_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ela_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_forest_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_forest_omp)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

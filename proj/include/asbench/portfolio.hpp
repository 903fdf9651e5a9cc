#pragma once

#include "asbench/problem_suite.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <tuple>
#include <vector>

namespace asbench {

enum class AlgorithmId { GA = 0, DE = 1, PSO = 2, ES = 3, CMAES = 4 };

inline constexpr int kPortfolioSize = 5;
inline constexpr std::array<AlgorithmId, kPortfolioSize> kPortfolio = {
    AlgorithmId::GA, AlgorithmId::DE, AlgorithmId::PSO, AlgorithmId::ES, AlgorithmId::CMAES};

std::string_view algorithm_name(AlgorithmId a);
AlgorithmId parse_algorithm(std::string_view name);
inline int algorithm_index(AlgorithmId a) { return static_cast<int>(a); }

/// Evaluations per generation; the budget must cover at least one.
int population_size(AlgorithmId a, int dim);

/// Outcome of one optimizer execution.
struct RunRecord {
    int class_id = 0;
    int instance_id = 0;
    AlgorithmId algorithm = AlgorithmId::GA;
    int repetition = 0;
    std::uint64_t seed = 0;
    /// f(x_best_found).
    double best_f = 0.0;
    int evals_used = 0;
    double scale_factor = 1.0;
    /// best_f - f_opt, tracked without cancellation.
    double precision = 0.0;

    friend bool operator==(const RunRecord &, const RunRecord &) = default;
};

/// Runs `algorithm` on `instance` for floor(budget / popsize) generations.
/// Every selection step compares fitness values only, so the visited points
/// are identical under any positive rescaling of the objective.
RunRecord run(AlgorithmId algorithm, const ProblemInstance &instance, int budget, std::uint64_t seed);

/// Best-so-far precision after each evaluation; used to check monotonicity
/// and anytime behaviour.
std::vector<double> run_trace(AlgorithmId algorithm, const ProblemInstance &instance, int budget,
                              std::uint64_t seed);

/// All runs of a suite, indexed by (class, instance, algorithm).
class RunTable {
public:
    RunTable() = default;
    RunTable(std::vector<RunRecord> records, int repetitions);

    const std::vector<RunRecord> &records() const { return records_; }
    int repetitions() const { return repetitions_; }
    std::size_t size() const { return records_.size(); }

    /// Records of one (instance, algorithm) pair ordered by repetition.
    /// Throws std::out_of_range when absent.
    std::vector<RunRecord> lookup(int class_id, int instance_id, AlgorithmId algorithm) const;

    /// Distinct (class_id, instance_id) keys in ascending order.
    std::vector<std::pair<int, int>> instance_keys() const;

    /// Every (instance, algorithm) pair has exactly repetitions() records
    /// with repetition indices 0..repetitions()-1.
    bool complete() const;

private:
    using Key = std::tuple<int, int, int>;
    std::vector<RunRecord> records_;
    std::map<Key, std::vector<std::size_t>> index_;
    int repetitions_ = 0;
};

std::uint64_t run_seed(std::uint64_t master_seed, int class_id, int instance_id, AlgorithmId algorithm,
                       int repetition);

/// One record per (instance, algorithm, repetition), in that nesting order.
/// Parallel over runs; identical to run_portfolio_serial.
RunTable run_portfolio(const std::vector<ProblemInstance> &suite, int budget, int repetitions,
                       std::uint64_t master_seed);

RunTable run_portfolio_serial(const std::vector<ProblemInstance> &suite, int budget, int repetitions,
                              std::uint64_t master_seed);

} // namespace asbench

#pragma once

#include "asbench/portfolio.hpp"
#include "asbench/problem_suite.hpp"

#include <array>
#include <map>
#include <span>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

namespace asbench {

/// (class_id, instance_id).
using InstanceKey = std::pair<int, int>;

/// One value per portfolio algorithm, indexed by algorithm_index.
using AlgorithmValues = std::array<double, kPortfolioSize>;

/// Averaged-ties ranks of the portfolio; sums to 15.
using RankVector = AlgorithmValues;

class IntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ascending ranks starting at 1; tied values share the mean of their positions.
std::vector<double> rank_with_ties(std::span<const double> values);

RankVector rank_algorithms(const AlgorithmValues &values);

/// Ranks the five algorithms within each repetition (paired by index) and
/// averages over repetitions. Runs are compared by their precision, which
/// orders them exactly like best_f.
RankVector mean_ranks(const RunTable &table, int class_id, int instance_id);

/// best_f - f_opt. Throws IntegrityError for a negative result or when the
/// record belongs to a different instance.
double target_precision(const RunRecord &record, const ProblemInstance &instance);

enum class TargetKind { Rank, Precision };

std::string_view target_kind_name(TargetKind kind);
TargetKind parse_target_kind(std::string_view name);

struct TargetTable {
    TargetKind kind = TargetKind::Rank;
    std::map<InstanceKey, AlgorithmValues> values;

    const AlgorithmValues &at(const InstanceKey &key) const;
};

/// Rank: mean_ranks per instance. Precision: mean precision over repetitions.
/// Throws std::invalid_argument for an incomplete table.
TargetTable build_targets(const RunTable &table, TargetKind kind);

} // namespace asbench

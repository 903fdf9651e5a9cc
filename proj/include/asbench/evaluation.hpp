#pragma once

#include "asbench/metrics.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace asbench {

enum class SplitKind { LIO, LPO };

std::string_view split_kind_name(SplitKind kind);

struct SplitPlan {
    SplitKind kind = SplitKind::LIO;
    int fold_id = 0;
    std::vector<InstanceKey> train;
    std::vector<InstanceKey> test;
};

/// Leave-instance-out: for each repeat and class, a seeded shuffle of the
/// class's instances puts the last ceil(count * test_fraction) into test.
std::vector<SplitPlan> lio_splits(const std::vector<InstanceKey> &suite, double test_fraction, int n_repeats,
                                  std::uint64_t seed);

/// Leave-problem-out: fold c tests every instance of the c-th class.
std::vector<SplitPlan> lpo_splits(const std::vector<InstanceKey> &suite);

/// Fraction of ordered algorithm pairs whose sign of rank difference
/// disagrees between `predicted` and `truth`.
double pre(std::span<const double> predicted, std::span<const double> truth);

double mse(std::span<const double> predicted, std::span<const double> truth);

} // namespace asbench

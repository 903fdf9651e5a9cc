#pragma once

#include <span>
#include <vector>

namespace asbench {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    /// Pairs (Wilcoxon) or rows (Friedman) that entered the test.
    int n = 0;
};

/// Two-sided Wilcoxon signed-rank test. Zero differences are dropped;
/// statistic is min(W+, W-) and p comes from the normal approximation with
/// tie correction, without continuity correction. Throws when fewer than 6
/// non-zero differences remain, unless all differences are zero (p = 1).
TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Friedman test on a rows x columns matrix (rows = blocks/folds,
/// columns = treatments/models), ranking within rows with averaged ties.
/// Tie-corrected chi-square with (columns - 1) degrees of freedom.
TestResult friedman(const std::vector<std::vector<double>> &matrix);

} // namespace asbench

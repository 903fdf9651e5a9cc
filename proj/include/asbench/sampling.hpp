#pragma once

#include "asbench/problem_suite.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace asbench {

/// n x dim Latin hypercube over the search domain, row-major. Every
/// coordinate has exactly one point in each of the n equal-width strata.
std::vector<double> lhs_design(int n, int dim, std::uint64_t seed);

/// Evaluated sample of one instance.
struct DesignSample {
    int class_id = 0;
    int instance_id = 0;
    int dim = 0;
    int n = 0;
    std::uint64_t seed = 0;
    /// n x dim, row-major.
    std::vector<double> x;
    std::vector<double> y_raw;
    /// y_raw min-max scaled to [0, 1]; all zeros when y_raw is constant.
    std::vector<double> y_scaled;

    std::span<const double> point(int i) const {
        return {x.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
    }
};

/// Min-max scaling to [0, 1]; a constant input maps to all zeros.
std::vector<double> min_max_scale(std::span<const double> y);

DesignSample lhs_sample(const ProblemInstance &instance, int n, std::uint64_t seed);

} // namespace asbench

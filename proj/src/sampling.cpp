#include "asbench/sampling.hpp"

#include "asbench/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asbench {

std::vector<double> lhs_design(int n, int dim, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("LHS needs at least 2 points");
    }
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n) * dim);
    std::vector<int> strata(n);
    const double width = (kDomainUpper - kDomainLower) / static_cast<double>(n);
    for (int j = 0; j < dim; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata.begin(), strata.end());
        for (int i = 0; i < n; ++i) {
            const double v = kDomainLower + (static_cast<double>(strata[i]) + rng.uniform()) * width;
            // Keep the point inside its own stratum despite rounding at the top edge.
            const double hi = kDomainLower + static_cast<double>(strata[i] + 1) * width;
            x[static_cast<std::size_t>(i) * dim + j] = std::min(v, std::nextafter(hi, kDomainLower));
        }
    }
    return x;
}

std::vector<double> min_max_scale(std::span<const double> y) {
    std::vector<double> out(y.size(), 0.0);
    if (y.empty()) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) {
        return out;
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = (y[i] - *lo) / range;
    }
    return out;
}

DesignSample lhs_sample(const ProblemInstance &instance, int n, std::uint64_t seed) {
    DesignSample s;
    s.class_id = instance.class_id;
    s.instance_id = instance.instance_id;
    s.dim = instance.dim;
    s.n = n;
    s.seed = seed;
    s.x = lhs_design(n, instance.dim, seed);
    s.y_raw.resize(n);
    for (int i = 0; i < n; ++i) {
        s.y_raw[i] = evaluate(instance, s.point(i));
    }
    s.y_scaled = min_max_scale(s.y_raw);
    return s;
}

} // namespace asbench

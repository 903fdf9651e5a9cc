#include "asbench/evaluation.hpp"

#include "asbench/rng.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace asbench {

std::string_view split_kind_name(SplitKind kind) {
    return kind == SplitKind::LIO ? "LIO" : "LPO";
}

namespace {

std::map<int, std::vector<InstanceKey>> by_class(const std::vector<InstanceKey> &suite) {
    std::map<int, std::vector<InstanceKey>> groups;
    for (const auto &k : suite) {
        groups[k.first].push_back(k);
    }
    return groups;
}

int sign(double v) {
    return (v > 0.0) - (v < 0.0);
}

} // namespace

std::vector<SplitPlan> lio_splits(const std::vector<InstanceKey> &suite, double test_fraction, int n_repeats,
                                  std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in (0, 1)");
    }
    if (n_repeats < 1) {
        throw std::invalid_argument("n_repeats must be >= 1");
    }
    const auto groups = by_class(suite);
    std::vector<SplitPlan> plans;
    for (int r = 0; r < n_repeats; ++r) {
        SplitPlan plan;
        plan.kind = SplitKind::LIO;
        plan.fold_id = r;
        for (const auto &[c, members] : groups) {
            const auto n = members.size();
            // Subtract a tiny slack so that e.g. 15 * (1/3) does not round up to 6.
            const auto n_test =
                static_cast<std::size_t>(std::ceil(static_cast<double>(n) * test_fraction - 1e-9));
            if (n_test < 1 || n_test >= n) {
                throw std::invalid_argument("class " + std::to_string(c) +
                                            " cannot be split with the requested test fraction");
            }
            auto shuffled = members;
            Rng rng(derive_seed({seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c)}));
            rng.shuffle(shuffled.begin(), shuffled.end());
            plan.train.insert(plan.train.end(), shuffled.begin(), shuffled.end() - static_cast<std::ptrdiff_t>(n_test));
            plan.test.insert(plan.test.end(), shuffled.end() - static_cast<std::ptrdiff_t>(n_test), shuffled.end());
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

std::vector<SplitPlan> lpo_splits(const std::vector<InstanceKey> &suite) {
    const auto groups = by_class(suite);
    if (groups.size() < 2) {
        throw std::invalid_argument("leave-problem-out needs at least 2 classes");
    }
    std::vector<SplitPlan> plans;
    for (const auto &[c, members] : groups) {
        SplitPlan plan;
        plan.kind = SplitKind::LPO;
        plan.fold_id = c;
        plan.test = members;
        for (const auto &[other, others] : groups) {
            if (other != c) {
                plan.train.insert(plan.train.end(), others.begin(), others.end());
            }
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

double pre(std::span<const double> predicted, std::span<const double> truth) {
    const auto k = predicted.size();
    if (k != truth.size()) {
        throw std::invalid_argument("rank vectors differ in length");
    }
    if (k < 2) {
        throw std::invalid_argument("pre needs at least 2 algorithms");
    }
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j && sign(predicted[i] - predicted[j]) != sign(truth[i] - truth[j])) {
                ++mismatches;
            }
        }
    }
    return static_cast<double>(mismatches) / static_cast<double>(k * (k - 1));
}

double mse(std::span<const double> predicted, std::span<const double> truth) {
    if (predicted.size() != truth.size()) {
        throw std::invalid_argument("mse: length mismatch");
    }
    if (predicted.empty()) {
        throw std::invalid_argument("mse: empty input");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = predicted[i] - truth[i];
        s += d * d;
    }
    return s / static_cast<double>(predicted.size());
}

} // namespace asbench

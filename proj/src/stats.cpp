#include "asbench/stats.hpp"

#include "asbench/metrics.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asbench {

namespace {

// sum over tie groups of (t^3 - t)
double tie_term(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double s = 0.0;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i + 1;
        while (j < values.size() && values[j] == values[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        s += t * t * t - t;
        i = j;
    }
    return s;
}

} // namespace

TestResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("wilcoxon: samples are not paired");
    }
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) {
            diffs.push_back(d);
        }
    }
    TestResult out;
    out.n = static_cast<int>(diffs.size());
    if (diffs.empty()) {
        return out;
    }
    if (diffs.size() < 6) {
        throw std::invalid_argument("wilcoxon: fewer than 6 non-zero differences");
    }
    std::vector<double> abs_d(diffs.size());
    std::transform(diffs.begin(), diffs.end(), abs_d.begin(), [](double d) { return std::fabs(d); });
    const auto ranks = rank_with_ties(abs_d);
    double w_plus = 0.0;
    double w_minus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        (diffs[i] > 0.0 ? w_plus : w_minus) += ranks[i];
    }
    const auto n = static_cast<double>(diffs.size());
    const double mean = n * (n + 1.0) / 4.0;
    const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(abs_d) / 48.0;
    out.statistic = std::min(w_plus, w_minus);
    if (var <= 0.0) {
        return out;
    }
    const double z = (out.statistic - mean) / std::sqrt(var);
    const boost::math::normal_distribution<double> normal;
    out.p_value = std::min(1.0, 2.0 * boost::math::cdf(normal, -std::fabs(z)));
    return out;
}

TestResult friedman(const std::vector<std::vector<double>> &matrix) {
    const auto n = matrix.size();
    if (n < 2) {
        throw std::invalid_argument("friedman: need at least 2 rows");
    }
    const auto k = matrix.front().size();
    if (k < 2) {
        throw std::invalid_argument("friedman: need at least 2 columns");
    }
    std::vector<double> rank_sums(k, 0.0);
    double ties = 0.0;
    for (const auto &row : matrix) {
        if (row.size() != k) {
            throw std::invalid_argument("friedman: ragged matrix");
        }
        const auto r = rank_with_ties(row);
        for (std::size_t j = 0; j < k; ++j) {
            rank_sums[j] += r[j];
        }
        ties += tie_term(row);
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    double ss = 0.0;
    for (const double rs : rank_sums) {
        ss += rs * rs;
    }
    TestResult out;
    out.n = static_cast<int>(n);
    const double chi = 12.0 / (nd * kd * (kd + 1.0)) * ss - 3.0 * nd * (kd + 1.0);
    const double correction = 1.0 - ties / (nd * (kd * kd * kd - kd));
    if (correction <= 0.0) {
        return out;
    }
    out.statistic = std::max(0.0, chi / correction);
    const boost::math::chi_squared_distribution<double> dist(kd - 1.0);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
    return out;
}

} // namespace asbench

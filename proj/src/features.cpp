#include "asbench/features.hpp"

#include "asbench/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace asbench {

namespace {

double mean_of(std::span<const double> v) {
    if (v.empty()) {
        return 0.0;
    }
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Population standard deviation.
double std_of(std::span<const double> v) {
    if (v.size() < 2) {
        return 0.0;
    }
    const double m = mean_of(v);
    double s = 0.0;
    for (const double x : v) {
        s += (x - m) * (x - m);
    }
    return std::sqrt(s / static_cast<double>(v.size()));
}

/// Linear interpolation between order statistics of sorted data.
double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        return 0.0;
    }
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double quantile_of(std::span<const double> v, double q) {
    std::vector<double> s(v.begin(), v.end());
    std::sort(s.begin(), s.end());
    return sorted_quantile(s, q);
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        return 0.0;
    }
    return sab / std::sqrt(saa * sbb);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Ratio with a 0 fallback for a vanishing denominator.
double safe_ratio(double num, double den, FeatureVector &fv, std::string_view what) {
    if (!std::isfinite(num) || !std::isfinite(den) || den == 0.0) {
        fv.flags.emplace_back(std::string(what) + ":degenerate");
        return 0.0;
    }
    return num / den;
}

// ---- y-distribution --------------------------------------------------------

void add_y_distribution(const DesignSample &s, FeatureVector &fv) {
    const auto &y = s.y_scaled;
    const double m = mean_of(y);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double v : y) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(y.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        fv.add("ela_distr.skewness", m3 / std::pow(m2, 1.5));
        fv.add("ela_distr.kurtosis", m4 / (m2 * m2) - 3.0);
    } else {
        fv.flags.emplace_back("ela_distr:constant");
        fv.add("ela_distr.skewness", 0.0);
        fv.add("ela_distr.kurtosis", 0.0);
    }
    fv.add("ela_distr.number_of_peaks", static_cast<double>(kde_peak_count(y)));
}

// ---- meta-model ------------------------------------------------------------

void add_meta_model(const DesignSample &s, FeatureVector &fv) {
    const int d = s.dim;
    const int n = s.n;
    std::vector<std::vector<double>> linear(d, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            linear[j][i] = s.x[static_cast<std::size_t>(i) * d + j];
        }
    }
    std::vector<std::vector<double>> squares(d, std::vector<double>(n));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i) {
            squares[j][i] = linear[j][i] * linear[j][i];
        }
    }
    std::vector<std::vector<double>> interactions;
    for (int a = 0; a < d; ++a) {
        for (int b = a + 1; b < d; ++b) {
            std::vector<double> col(n);
            for (int i = 0; i < n; ++i) {
                col[i] = linear[a][i] * linear[b][i];
            }
            interactions.push_back(std::move(col));
        }
    }
    const auto concat = [](std::initializer_list<const std::vector<std::vector<double>> *> parts) {
        std::vector<std::vector<double>> out;
        for (const auto *p : parts) {
            out.insert(out.end(), p->begin(), p->end());
        }
        return out;
    };

    const auto lin = least_squares_fit(linear, s.y_scaled);
    if (lin) {
        double cmin = std::numeric_limits<double>::infinity();
        double cmax = 0.0;
        for (int j = 1; j <= d; ++j) {
            cmin = std::min(cmin, std::abs(lin->coefficients[j]));
            cmax = std::max(cmax, std::abs(lin->coefficients[j]));
        }
        fv.add("ela_meta.lin_simple.adj_r2", lin->adjusted_r2);
        fv.add("ela_meta.lin_simple.intercept", lin->coefficients[0]);
        fv.add("ela_meta.lin_simple.coef.min", cmin);
        fv.add("ela_meta.lin_simple.coef.max", cmax);
        fv.add("ela_meta.lin_simple.coef.max_by_min", safe_ratio(cmax, cmin, fv, "lin_simple.coef"));
    } else {
        fv.flags.emplace_back("lin_simple:singular");
        for (const char *name : {"ela_meta.lin_simple.adj_r2", "ela_meta.lin_simple.intercept",
                                 "ela_meta.lin_simple.coef.min", "ela_meta.lin_simple.coef.max",
                                 "ela_meta.lin_simple.coef.max_by_min"}) {
            fv.add(name, 0.0);
        }
    }

    const auto lin_inter = least_squares_fit(concat({&linear, &interactions}), s.y_scaled);
    if (!lin_inter) {
        fv.flags.emplace_back("lin_w_interact:singular");
    }
    fv.add("ela_meta.lin_w_interact.adj_r2", lin_inter ? lin_inter->adjusted_r2 : 0.0);

    const auto quad = least_squares_fit(concat({&linear, &squares}), s.y_scaled);
    if (quad) {
        double qmin = std::numeric_limits<double>::infinity();
        double qmax = 0.0;
        for (int j = 0; j < d; ++j) {
            const double c = std::abs(quad->coefficients[1 + d + j]);
            qmin = std::min(qmin, c);
            qmax = std::max(qmax, c);
        }
        fv.add("ela_meta.quad_simple.adj_r2", quad->adjusted_r2);
        fv.add("ela_meta.quad_simple.cond", safe_ratio(qmax, qmin, fv, "quad_simple.cond"));
    } else {
        fv.flags.emplace_back("quad_simple:singular");
        fv.add("ela_meta.quad_simple.adj_r2", 0.0);
        fv.add("ela_meta.quad_simple.cond", 0.0);
    }

    const auto quad_inter = least_squares_fit(concat({&linear, &squares, &interactions}), s.y_scaled);
    if (!quad_inter) {
        fv.flags.emplace_back("quad_w_interact:singular");
    }
    fv.add("ela_meta.quad_w_interact.adj_r2", quad_inter ? quad_inter->adjusted_r2 : 0.0);
}

// ---- dispersion ------------------------------------------------------------

struct DistanceSummary {
    double mean = 0.0;
    double median = 0.0;
};

DistanceSummary pairwise_summary(const DesignSample &s, std::span<const int> idx) {
    std::vector<double> dists;
    dists.reserve(idx.size() * (idx.size() - 1) / 2);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            dists.push_back(distance(s.point(idx[a]), s.point(idx[b])));
        }
    }
    if (dists.empty()) {
        return {};
    }
    DistanceSummary out;
    out.mean = mean_of(dists);
    const std::size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
    const double upper = dists[mid];
    if (dists.size() % 2 == 1) {
        out.median = upper;
    } else {
        const double lower = *std::max_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid));
        out.median = 0.5 * (lower + upper);
    }
    return out;
}

void add_dispersion(const DesignSample &s, std::span<const int> order_by_y, FeatureVector &fv) {
    std::vector<int> all(s.n);
    std::iota(all.begin(), all.end(), 0);
    const auto full = pairwise_summary(s, all);
    for (const double q : {0.02, 0.05, 0.10, 0.25}) {
        const auto k = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(q * s.n)));
        const auto best = pairwise_summary(s, order_by_y.subspan(0, std::min<std::size_t>(k, s.n)));
        const std::string tag = "ela_disp." + std::to_string(static_cast<int>(std::lround(q * 100)));
        fv.add(tag + ".ratio_mean", safe_ratio(best.mean, full.mean, fv, "disp"));
        fv.add(tag + ".ratio_median", safe_ratio(best.median, full.median, fv, "disp"));
        fv.add(tag + ".diff_mean", best.mean - full.mean);
        fv.add(tag + ".diff_median", best.median - full.median);
    }
}

// ---- information content ---------------------------------------------------

/// Nearest-neighbour tour through all points from a seeded start.
std::vector<int> nearest_neighbour_tour(const DesignSample &s, std::uint64_t seed) {
    Rng rng(seed);
    const int n = s.n;
    std::vector<char> visited(n, 0);
    std::vector<int> tour;
    tour.reserve(n);
    int current = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    for (int step = 0; step < n; ++step) {
        tour.push_back(current);
        visited[current] = 1;
        int next = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (visited[j]) {
                continue;
            }
            const double dist = distance(s.point(current), s.point(j));
            if (dist < best) {
                best = dist;
                next = j;
            }
        }
        if (next < 0) {
            break;
        }
        current = next;
    }
    return tour;
}

void add_information_content(const DesignSample &s, FeatureVector &fv) {
    const auto tour = nearest_neighbour_tour(s, mix64(s.seed ^ 0x1cULL));
    std::vector<double> diffs(tour.size() - 1);
    for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
        diffs[i] = s.y_scaled[tour[i + 1]] - s.y_scaled[tour[i]];
    }

    const auto symbols_at = [&](double eps) {
        std::vector<int> sym(diffs.size());
        for (std::size_t i = 0; i < diffs.size(); ++i) {
            sym[i] = diffs[i] < -eps ? -1 : (diffs[i] > eps ? 1 : 0);
        }
        return sym;
    };
    const auto entropy = [&](const std::vector<int> &sym) {
        double counts[3][3] = {};
        const std::size_t pairs = sym.size() - 1;
        for (std::size_t i = 0; i < pairs; ++i) {
            counts[sym[i] + 1][sym[i + 1] + 1] += 1.0;
        }
        double h = 0.0;
        for (int p = 0; p < 3; ++p) {
            for (int q = 0; q < 3; ++q) {
                if (p == q || counts[p][q] == 0.0) {
                    continue;
                }
                const double prob = counts[p][q] / static_cast<double>(pairs);
                h -= prob * std::log(prob) / std::log(6.0);
            }
        }
        return h;
    };
    const auto partial_information = [&](const std::vector<int> &sym) {
        int last = 0;
        int mu = 0;
        for (const int v : sym) {
            if (v != 0 && v != last) {
                ++mu;
                last = v;
            }
        }
        return static_cast<double>(mu) / static_cast<double>(sym.size());
    };

    // log10(eps) grid from -5 to 15.
    constexpr int kSteps = 400;
    std::vector<double> log_eps(kSteps + 1);
    std::vector<double> h(kSteps + 1);
    std::vector<double> m(kSteps + 1);
    for (int k = 0; k <= kSteps; ++k) {
        log_eps[k] = -5.0 + 20.0 * k / static_cast<double>(kSteps);
        const auto sym = symbols_at(std::pow(10.0, log_eps[k]));
        h[k] = entropy(sym);
        m[k] = partial_information(sym);
    }
    const double m0 = partial_information(symbols_at(0.0));

    const auto hmax_it = std::max_element(h.begin(), h.end());
    const auto hmax_idx = static_cast<std::size_t>(hmax_it - h.begin());
    double eps_s = log_eps.back();
    for (int k = 0; k <= kSteps; ++k) {
        if (h[k] < 0.05) {
            eps_s = log_eps[k];
            break;
        }
    }
    double eps_ratio = log_eps.front();
    for (int k = kSteps; k >= 0; --k) {
        if (m[k] > 0.5 * m0) {
            eps_ratio = log_eps[k];
            break;
        }
    }
    fv.add("ic.h_max", *hmax_it);
    fv.add("ic.eps_s", eps_s);
    fv.add("ic.eps_max", log_eps[hmax_idx]);
    fv.add("ic.eps_ratio", eps_ratio);
    fv.add("ic.m0", m0);
}

// ---- nearest-better clustering --------------------------------------------

void add_nearest_better(const DesignSample &s, FeatureVector &fv) {
    const int n = s.n;
    const auto &y = s.y_scaled;
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    std::vector<double> nb(n, std::numeric_limits<double>::infinity());
    std::vector<int> nb_index(n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                continue;
            }
            const double dist = distance(s.point(i), s.point(j));
            nn[i] = std::min(nn[i], dist);
            if (y[j] < y[i] && dist < nb[i]) {
                nb[i] = dist;
                nb_index[i] = j;
            }
        }
    }
    std::vector<double> nn_sel;
    std::vector<double> nb_sel;
    std::vector<double> ratio;
    std::vector<double> indegree(n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (nb_index[i] < 0) {
            continue;
        }
        nn_sel.push_back(nn[i]);
        nb_sel.push_back(nb[i]);
        ratio.push_back(nn[i] / nb[i]);
        indegree[nb_index[i]] += 1.0;
    }
    if (nn_sel.size() < 2) {
        fv.flags.emplace_back("nbc:degenerate");
        for (const char *name : {"nbc.nn_nb.sd_ratio", "nbc.nn_nb.mean_ratio", "nbc.nn_nb.cor",
                                 "nbc.dist_ratio.coeff_var", "nbc.nb_fitness.cor"}) {
            fv.add(name, 0.0);
        }
        return;
    }
    fv.add("nbc.nn_nb.sd_ratio", safe_ratio(std_of(nn_sel), std_of(nb_sel), fv, "nbc.sd"));
    fv.add("nbc.nn_nb.mean_ratio", safe_ratio(mean_of(nn_sel), mean_of(nb_sel), fv, "nbc.mean"));
    fv.add("nbc.nn_nb.cor", pearson(nn_sel, nb_sel));
    fv.add("nbc.dist_ratio.coeff_var", safe_ratio(std_of(ratio), mean_of(ratio), fv, "nbc.ratio"));
    fv.add("nbc.nb_fitness.cor", pearson(indegree, y));
}

// ---- principal components -------------------------------------------------

/// (fraction of components needed for 90% variance, share of the first).
std::pair<double, double> pca_summary(const Eigen::MatrixXd &data, bool correlation) {
    const Eigen::RowVectorXd mean = data.colwise().mean();
    Eigen::MatrixXd centered = data.rowwise() - mean;
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.rows() - 1);
    if (correlation) {
        const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
        for (Eigen::Index i = 0; i < cov.rows(); ++i) {
            for (Eigen::Index j = 0; j < cov.cols(); ++j) {
                const double den = sd[i] * sd[j];
                cov(i, j) = den > 0.0 ? cov(i, j) / den : (i == j ? 1.0 : 0.0);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues().reverse().cwiseMax(0.0);
    const double total = ev.sum();
    if (!(total > 0.0)) {
        return {1.0, 1.0};
    }
    double acc = 0.0;
    Eigen::Index needed = ev.size();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        acc += ev[i];
        if (acc / total >= 0.9) {
            needed = i + 1;
            break;
        }
    }
    return {static_cast<double>(needed) / static_cast<double>(ev.size()), ev[0] / total};
}

void add_pca(const DesignSample &s, FeatureVector &fv) {
    Eigen::MatrixXd x(s.n, s.dim);
    Eigen::MatrixXd xy(s.n, s.dim + 1);
    for (int i = 0; i < s.n; ++i) {
        for (int j = 0; j < s.dim; ++j) {
            x(i, j) = s.x[static_cast<std::size_t>(i) * s.dim + j];
            xy(i, j) = x(i, j);
        }
        xy(i, s.dim) = s.y_scaled[i];
    }
    const auto cov_x = pca_summary(x, false);
    const auto cor_x = pca_summary(x, true);
    const auto cov_init = pca_summary(xy, false);
    const auto cor_init = pca_summary(xy, true);
    fv.add("pca.expl_var.cov_x", cov_x.first);
    fv.add("pca.expl_var.cor_x", cor_x.first);
    fv.add("pca.expl_var.cov_init", cov_init.first);
    fv.add("pca.expl_var.cor_init", cor_init.first);
    fv.add("pca.expl_var_PC1.cov_x", cov_x.second);
    fv.add("pca.expl_var_PC1.cor_x", cor_x.second);
    fv.add("pca.expl_var_PC1.cov_init", cov_init.second);
    fv.add("pca.expl_var_PC1.cor_init", cor_init.second);
}

} // namespace

std::string_view feature_set_name(FeatureSet set) {
    switch (set) {
    case FeatureSet::Ela: return "ela";
    case FeatureSet::NonInformative: return "noninf";
    case FeatureSet::Class: return "class";
    case FeatureSet::Scale: return "scale";
    }
    return "unknown";
}

FeatureSet parse_feature_set(std::string_view name) {
    if (name == "ela") return FeatureSet::Ela;
    if (name == "noninf" || name == "non-inf") return FeatureSet::NonInformative;
    if (name == "class") return FeatureSet::Class;
    if (name == "scale") return FeatureSet::Scale;
    throw std::invalid_argument("unknown feature set '" + std::string(name) + "'");
}

std::optional<double> FeatureVector::find(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return values[i];
        }
    }
    return std::nullopt;
}

double FeatureVector::at(std::string_view name) const {
    if (const auto v = find(name)) {
        return *v;
    }
    throw std::out_of_range("missing feature '" + std::string(name) + "'");
}

std::string_view transform_name(Transform t) {
    switch (t) {
    case Transform::Sin: return "sin";
    case Transform::Cos: return "cos";
    case Transform::Root6: return "root6";
    case Transform::Root3: return "root3";
    case Transform::Sqrt: return "sqrt";
    case Transform::Square: return "square";
    case Transform::Log1p: return "log1p";
    }
    return "unknown";
}

std::string_view aggregate_name(Aggregate a) {
    switch (a) {
    case Aggregate::Mean: return "mean";
    case Aggregate::Median: return "median";
    case Aggregate::Std: return "std";
    case Aggregate::Q5: return "q05";
    case Aggregate::Q25: return "q25";
    case Aggregate::Q75: return "q75";
    case Aggregate::Q95: return "q95";
    }
    return "unknown";
}

double apply_transform(Transform t, double v) {
    switch (t) {
    case Transform::Sin: return std::sin(v);
    case Transform::Cos: return std::cos(v);
    case Transform::Root6: return std::pow(v, 1.0 / 6.0);
    case Transform::Root3: return std::cbrt(v);
    case Transform::Sqrt: return std::sqrt(v);
    case Transform::Square: return v * v;
    case Transform::Log1p: return std::log1p(v);
    }
    return v;
}

double apply_aggregate(Aggregate a, std::span<const double> values) {
    switch (a) {
    case Aggregate::Mean: return mean_of(values);
    case Aggregate::Median: return quantile_of(values, 0.5);
    case Aggregate::Std: return std_of(values);
    case Aggregate::Q5: return quantile_of(values, 0.05);
    case Aggregate::Q25: return quantile_of(values, 0.25);
    case Aggregate::Q75: return quantile_of(values, 0.75);
    case Aggregate::Q95: return quantile_of(values, 0.95);
    }
    return 0.0;
}

GeneratorSpec noninf_spec(int m, std::uint64_t seed) {
    if (m < 1) {
        throw std::invalid_argument("noninf_spec needs m >= 1");
    }
    Rng rng(seed);
    GeneratorSpec spec;
    spec.seed = seed;
    spec.recipes.reserve(m);
    for (int j = 0; j < m; ++j) {
        FeatureRecipe r;
        r.scalar = kNoninfScalars[rng.below(std::size(kNoninfScalars))];
        r.transform = kNoninfTransforms[rng.below(std::size(kNoninfTransforms))];
        r.aggregate = kNoninfAggregates[rng.below(std::size(kNoninfAggregates))];
        spec.recipes.push_back(r);
    }
    return spec;
}

FeatureVector noninf_features(std::span<const double> y_scaled, const GeneratorSpec &spec) {
    FeatureVector fv;
    fv.set = FeatureSet::NonInformative;
    std::vector<double> buf(y_scaled.size());
    for (std::size_t j = 0; j < spec.recipes.size(); ++j) {
        const auto &r = spec.recipes[j];
        for (std::size_t i = 0; i < y_scaled.size(); ++i) {
            buf[i] = apply_transform(r.transform, r.scalar * y_scaled[i]);
        }
        fv.add("noninf_" + std::to_string(j), apply_aggregate(r.aggregate, buf));
    }
    return fv;
}

FeatureVector noninf_features(const DesignSample &sample, const GeneratorSpec &spec) {
    return noninf_features(sample.y_scaled, spec);
}

int kde_peak_count(std::span<const double> values) {
    const auto n = values.size();
    if (n < 2) {
        return 1;
    }
    const double sd = [&] {
        const double m = mean_of(values);
        double s = 0.0;
        for (const double v : values) {
            s += (v - m) * (v - m);
        }
        return std::sqrt(s / static_cast<double>(n - 1));
    }();
    const double iqr = quantile_of(values, 0.75) - quantile_of(values, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    if (!(spread > 0.0)) {
        spread = sd;
    }
    if (!(spread > 0.0)) {
        return 1;
    }
    const double bw = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it - 3.0 * bw;
    const double hi = *hi_it + 3.0 * bw;

    constexpr int kGrid = 512;
    std::vector<double> density(kGrid, 0.0);
    for (int g = 0; g < kGrid; ++g) {
        const double t = lo + (hi - lo) * g / static_cast<double>(kGrid - 1);
        double acc = 0.0;
        for (const double v : values) {
            const double u = (t - v) / bw;
            acc += std::exp(-0.5 * u * u);
        }
        density[g] = acc;
    }
    const double top = *std::max_element(density.begin(), density.end());
    int peaks = 0;
    for (int g = 0; g < kGrid; ++g) {
        const double left = g > 0 ? density[g - 1] : -1.0;
        // Plateaus count once, at their right end.
        const double right = g + 1 < kGrid ? density[g + 1] : -1.0;
        if (density[g] > left && density[g] >= right && density[g] > 0.1 * top) {
            int k = g + 1;
            while (k < kGrid && density[k] == density[g]) {
                ++k;
            }
            if (k >= kGrid || density[k] < density[g]) {
                ++peaks;
            }
        }
    }
    return std::max(peaks, 1);
}

std::optional<LinearFit> least_squares_fit(const std::vector<std::vector<double>> &columns,
                                           std::span<const double> y) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const auto p = static_cast<Eigen::Index>(columns.size());
    if (n <= p + 1) {
        return std::nullopt;
    }
    Eigen::MatrixXd a(n, p + 1);
    a.col(0).setOnes();
    for (Eigen::Index j = 0; j < p; ++j) {
        a.col(j + 1) = Eigen::Map<const Eigen::VectorXd>(columns[j].data(), n);
    }
    const Eigen::Map<const Eigen::VectorXd> b(y.data(), n);
    const double ybar = b.mean();
    const double ss_tot = (b.array() - ybar).square().sum();
    if (!(ss_tot > 0.0)) {
        return std::nullopt;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < p + 1) {
        return std::nullopt;
    }
    const Eigen::VectorXd coef = qr.solve(b);
    const double ss_res = (a * coef - b).squaredNorm();
    const double r2 = 1.0 - ss_res / ss_tot;
    LinearFit fit;
    fit.coefficients.assign(coef.data(), coef.data() + coef.size());
    fit.adjusted_r2 = 1.0 - (1.0 - r2) * static_cast<double>(n - 1) / static_cast<double>(n - p - 1);
    return fit;
}

FeatureVector ela_features(const DesignSample &sample) {
    if (sample.n < 10 * sample.dim) {
        throw std::invalid_argument("ELA features need n >= 10 * dim");
    }
    FeatureVector fv;
    fv.set = FeatureSet::Ela;
    std::vector<int> order(sample.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sample.y_scaled[a] < sample.y_scaled[b]; });

    add_y_distribution(sample, fv);
    add_meta_model(sample, fv);
    add_dispersion(sample, order, fv);
    add_information_content(sample, fv);
    add_nearest_better(sample, fv);
    add_pca(sample, fv);
    for (auto &v : fv.values) {
        if (!std::isfinite(v)) {
            fv.flags.emplace_back("non-finite value replaced by 0");
            v = 0.0;
        }
    }
    return fv;
}

FeatureVector class_feature(const ProblemInstance &instance) {
    FeatureVector fv;
    fv.set = FeatureSet::Class;
    fv.add("class", static_cast<double>(instance.class_id));
    return fv;
}

FeatureVector scale_feature(const DesignSample &sample) {
    FeatureVector fv;
    fv.set = FeatureSet::Scale;
    if (sample.y_raw.empty()) {
        fv.add("f_scale", 0.0);
        return fv;
    }
    const auto [lo, hi] = std::minmax_element(sample.y_raw.begin(), sample.y_raw.end());
    fv.add("f_scale", *hi - *lo);
    return fv;
}

std::uint64_t sample_seed(std::uint64_t master_seed, int class_id, int instance_id) {
    return derive_seed({master_seed, 0xfea7ULL, static_cast<std::uint64_t>(class_id),
                        static_cast<std::uint64_t>(instance_id)});
}

namespace {

InstanceFeatures extract_one(const ProblemInstance &inst, FeatureSet set, int samples_per_dim,
                             std::uint64_t master_seed, const GeneratorSpec &noninf) {
    InstanceFeatures out;
    out.class_id = inst.class_id;
    out.instance_id = inst.instance_id;
    if (set == FeatureSet::Class) {
        out.features = class_feature(inst);
        return out;
    }
    const auto sample = lhs_sample(inst, samples_per_dim * inst.dim,
                                   sample_seed(master_seed, inst.class_id, inst.instance_id));
    switch (set) {
    case FeatureSet::Ela: out.features = ela_features(sample); break;
    case FeatureSet::NonInformative: out.features = noninf_features(sample, noninf); break;
    case FeatureSet::Scale: out.features = scale_feature(sample); break;
    case FeatureSet::Class: break;
    }
    return out;
}

} // namespace

std::vector<InstanceFeatures> extract_suite_features(const std::vector<ProblemInstance> &suite, FeatureSet set,
                                                     int samples_per_dim, std::uint64_t master_seed,
                                                     const GeneratorSpec &noninf) {
    std::vector<InstanceFeatures> out(suite.size());
    const auto n = static_cast<std::ptrdiff_t>(suite.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        out[i] = extract_one(suite[i], set, samples_per_dim, master_seed, noninf);
    }
    return out;
}

std::vector<InstanceFeatures> extract_suite_features_serial(const std::vector<ProblemInstance> &suite,
                                                            FeatureSet set, int samples_per_dim,
                                                            std::uint64_t master_seed, const GeneratorSpec &noninf) {
    std::vector<InstanceFeatures> out;
    out.reserve(suite.size());
    for (const auto &inst : suite) {
        out.push_back(extract_one(inst, set, samples_per_dim, master_seed, noninf));
    }
    return out;
}

} // namespace asbench

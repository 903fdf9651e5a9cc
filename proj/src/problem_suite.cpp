#include "asbench/problem_suite.hpp"

#include "asbench/rng.hpp"
#include "asbench/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace asbench {

namespace {

using Scratch = std::array<double, kMaxDim>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::uint64_t kInstanceStream = 0x5eed'1a57ULL;

/// y = M v for a column-major dim x dim matrix.
void rotate(const Eigen::MatrixXd &m, const double *v, double *y, int d) {
    const double *data = m.data();
    for (int i = 0; i < d; ++i) {
        y[i] = 0.0;
    }
    for (int j = 0; j < d; ++j) {
        const double vj = v[j];
        const double *col = data + static_cast<std::ptrdiff_t>(j) * d;
        for (int i = 0; i < d; ++i) {
            y[i] += col[i] * vj;
        }
    }
}

double tosz(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    const double xhat = std::log(std::abs(x));
    const double c1 = x > 0.0 ? 10.0 : 5.5;
    const double c2 = x > 0.0 ? 7.9 : 3.1;
    const double s = x > 0.0 ? 1.0 : -1.0;
    return s * std::exp(xhat + 0.049 * (std::sin(c1 * xhat) + std::sin(c2 * xhat)));
}

void tosz(double *v, int d) {
    for (int i = 0; i < d; ++i) {
        v[i] = tosz(v[i]);
    }
}

void tasy(double *v, int d, double beta) {
    for (int i = 0; i < d; ++i) {
        if (v[i] > 0.0) {
            const double t = static_cast<double>(i) / static_cast<double>(d - 1);
            v[i] = std::pow(v[i], 1.0 + beta * t * std::sqrt(v[i]));
        }
    }
}

/// Diagonal of the conditioning matrix with overall condition `alpha`.
double lambda(double alpha, int i, int d) {
    return std::pow(alpha, 0.5 * static_cast<double>(i) / static_cast<double>(d - 1));
}

void condition(double *v, int d, double alpha) {
    for (int i = 0; i < d; ++i) {
        v[i] *= lambda(alpha, i, d);
    }
}

double fpen(std::span<const double> x) {
    double p = 0.0;
    for (const double xi : x) {
        const double e = std::abs(xi) - kDomainUpper;
        if (e > 0.0) {
            p += e * e;
        }
    }
    return p;
}

double rastrigin_sum(const double *z, int d) {
    double c = 0.0;
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        c += std::cos(kTwoPi * z[i]);
        s += z[i] * z[i];
    }
    return 10.0 * (static_cast<double>(d) - c) + s;
}

double schaffers(const double *z, int d) {
    double acc = 0.0;
    for (int i = 0; i + 1 < d; ++i) {
        const double s = std::sqrt(z[i] * z[i] + z[i + 1] * z[i + 1]);
        const double rs = std::sqrt(s);
        const double sn = std::sin(50.0 * std::pow(s, 0.2));
        acc += rs + rs * sn * sn;
    }
    acc /= static_cast<double>(d - 1);
    return acc * acc;
}

// Shifted so that the per-coordinate minimum of -z sin(sqrt|z|) on
// [-500, 500] is (up to rounding) zero at z = kSchwefelArgmin.
constexpr double kSchwefelArgmin = 420.96874629;

double schwefel_term(double z) {
    const double zc = std::clamp(z, -500.0, 500.0);
    static const double at_min = -kSchwefelArgmin * std::sin(std::sqrt(kSchwefelArgmin));
    return -zc * std::sin(std::sqrt(std::abs(zc))) - at_min;
}

double weierstrass_offset() {
    double c = std::cos(kTwoPi * 0.5);
    double wk = 1.0;
    double f0 = 0.0;
    for (int k = 0; k < 12; ++k) {
        f0 += wk * c;
        c = c * (4.0 * c * c - 3.0);
        wk *= 0.5;
    }
    return f0;
}

/// Base function g evaluated at the raw point x; g(x_opt) = 0, g >= 0.
double base_value(const ProblemInstance &p, std::span<const double> x) {
    const int d = p.dim;
    Scratch a{};
    Scratch b{};
    for (int i = 0; i < d; ++i) {
        a[i] = x[i] - p.x_opt[i];
    }
    const auto &rot = p.rotations;
    const double dd = static_cast<double>(d);

    switch (p.base_id) {
    case BaseFunction::Sphere: {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            s += a[i] * a[i];
        }
        return s;
    }
    case BaseFunction::EllipsoidSeparable: {
        tosz(a.data(), d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            s += std::pow(1e6, static_cast<double>(i) / (dd - 1.0)) * a[i] * a[i];
        }
        return s;
    }
    case BaseFunction::RastriginSeparable: {
        tosz(a.data(), d);
        tasy(a.data(), d, 0.2);
        condition(a.data(), d, 10.0);
        return rastrigin_sum(a.data(), d);
    }
    case BaseFunction::BucheRastrigin: {
        for (int i = 0; i < d; ++i) {
            const double z = tosz(a[i]);
            const double s = lambda(10.0, i, d);
            a[i] = (z > 0.0 && i % 2 == 0) ? 10.0 * s * z : s * z;
        }
        return rastrigin_sum(a.data(), d) + 100.0 * fpen(x);
    }
    case BaseFunction::LinearSlope: {
        // Linear up to x_opt, flat beyond it in the descent direction.
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double dir = p.x_opt[i] >= 0.0 ? 1.0 : -1.0;
            const double w = std::pow(10.0, static_cast<double>(i) / (dd - 1.0));
            s += w * std::max(0.0, -dir * a[i]);
        }
        return s;
    }
    case BaseFunction::AttractiveSector: {
        rotate(rot[0], a.data(), b.data(), d);
        condition(b.data(), d, 10.0);
        rotate(rot[1], b.data(), a.data(), d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            const double w = a[i] * p.x_opt[i] > 0.0 ? 100.0 : 1.0;
            s += (w * a[i]) * (w * a[i]);
        }
        return std::pow(tosz(s), 0.9);
    }
    case BaseFunction::StepEllipsoid: {
        rotate(rot[0], a.data(), b.data(), d);
        condition(b.data(), d, 10.0);
        const double first = std::abs(b[0]) / 1e4;
        for (int i = 0; i < d; ++i) {
            b[i] = std::abs(b[i]) > 0.5 ? std::floor(0.5 + b[i]) : std::floor(0.5 + 10.0 * b[i]) / 10.0;
        }
        rotate(rot[1], b.data(), a.data(), d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            s += std::pow(10.0, 2.0 * static_cast<double>(i) / (dd - 1.0)) * a[i] * a[i];
        }
        return 0.1 * std::max(first, s) + fpen(x);
    }
    case BaseFunction::Rosenbrock:
    case BaseFunction::RosenbrockRotated: {
        const double c = std::max(1.0, std::sqrt(dd) / 8.0);
        if (p.base_id == BaseFunction::RosenbrockRotated) {
            rotate(rot[0], a.data(), b.data(), d);
            a = b;
        }
        for (int i = 0; i < d; ++i) {
            a[i] = c * a[i] + 1.0;
        }
        double s = 0.0;
        for (int i = 0; i + 1 < d; ++i) {
            const double t = a[i] * a[i] - a[i + 1];
            s += 100.0 * t * t + (a[i] - 1.0) * (a[i] - 1.0);
        }
        return s;
    }
    case BaseFunction::Ellipsoid: {
        rotate(rot[0], a.data(), b.data(), d);
        tosz(b.data(), d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            s += std::pow(1e6, static_cast<double>(i) / (dd - 1.0)) * b[i] * b[i];
        }
        return s;
    }
    case BaseFunction::Discus: {
        rotate(rot[0], a.data(), b.data(), d);
        tosz(b.data(), d);
        double s = 1e6 * b[0] * b[0];
        for (int i = 1; i < d; ++i) {
            s += b[i] * b[i];
        }
        return s;
    }
    case BaseFunction::BentCigar: {
        rotate(rot[0], a.data(), b.data(), d);
        tasy(b.data(), d, 0.5);
        rotate(rot[0], b.data(), a.data(), d);
        double s = 0.0;
        for (int i = 1; i < d; ++i) {
            s += a[i] * a[i];
        }
        return a[0] * a[0] + 1e6 * s;
    }
    case BaseFunction::SharpRidge: {
        rotate(rot[0], a.data(), b.data(), d);
        condition(b.data(), d, 10.0);
        rotate(rot[1], b.data(), a.data(), d);
        double s = 0.0;
        for (int i = 1; i < d; ++i) {
            s += a[i] * a[i];
        }
        return a[0] * a[0] + 100.0 * std::sqrt(s);
    }
    case BaseFunction::DifferentPowers: {
        rotate(rot[0], a.data(), b.data(), d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            s += std::pow(std::abs(b[i]), 2.0 + 4.0 * static_cast<double>(i) / (dd - 1.0));
        }
        return std::sqrt(s);
    }
    case BaseFunction::Rastrigin: {
        rotate(rot[0], a.data(), b.data(), d);
        tosz(b.data(), d);
        tasy(b.data(), d, 0.2);
        rotate(rot[1], b.data(), a.data(), d);
        condition(a.data(), d, 10.0);
        rotate(rot[0], a.data(), b.data(), d);
        return rastrigin_sum(b.data(), d);
    }
    case BaseFunction::Weierstrass: {
        static const double f0 = weierstrass_offset();
        rotate(rot[0], a.data(), b.data(), d);
        tosz(b.data(), d);
        rotate(rot[1], b.data(), a.data(), d);
        condition(a.data(), d, 0.01);
        rotate(rot[0], a.data(), b.data(), d);
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            // cos(3t) = 4cos^3(t) - 3cos(t) walks the frequencies 3^k.
            double c = std::cos(kTwoPi * (b[i] + 0.5));
            double wk = 1.0;
            for (int k = 0; k < 12; ++k) {
                s += wk * c;
                c = c * (4.0 * c * c - 3.0);
                wk *= 0.5;
            }
        }
        const double t = s / dd - f0;
        return 10.0 * t * t * t + 10.0 / dd * fpen(x);
    }
    case BaseFunction::SchaffersF7:
    case BaseFunction::SchaffersF7IllConditioned: {
        const double alpha = p.base_id == BaseFunction::SchaffersF7 ? 10.0 : 1000.0;
        rotate(rot[0], a.data(), b.data(), d);
        tasy(b.data(), d, 0.5);
        rotate(rot[1], b.data(), a.data(), d);
        condition(a.data(), d, alpha);
        return schaffers(a.data(), d) + 10.0 * fpen(x);
    }
    case BaseFunction::GriewankRosenbrock: {
        const double c = std::max(1.0, std::sqrt(dd) / 8.0);
        rotate(rot[0], a.data(), b.data(), d);
        for (int i = 0; i < d; ++i) {
            b[i] = c * b[i] + 1.0;
        }
        double s = 0.0;
        for (int i = 0; i + 1 < d; ++i) {
            const double t = b[i] * b[i] - b[i + 1];
            const double si = 100.0 * t * t + (b[i] - 1.0) * (b[i] - 1.0);
            s += si / 4000.0 - std::cos(si);
        }
        return 10.0 / (dd - 1.0) * s + 10.0;
    }
    case BaseFunction::Schwefel: {
        double s = 0.0;
        double pen = 0.0;
        for (int i = 0; i < d; ++i) {
            const double z = kSchwefelArgmin + 100.0 * lambda(10.0, i, d) * a[i];
            s += std::max(0.0, schwefel_term(z));
            const double e = std::abs(z) / 100.0 - 5.0;
            if (e > 0.0) {
                pen += e * e;
            }
        }
        return s / (100.0 * dd) + 100.0 * pen;
    }
    case BaseFunction::Gallagher101:
    case BaseFunction::Gallagher21: {
        rotate(rot[0], x.data(), b.data(), d);
        const auto &pk = p.peaks;
        // max_j w_j exp(-q_j / 2D), compared in log space.
        double best_log = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pk.size(); ++j) {
            const double *loc = pk.locations.data() + j * static_cast<std::size_t>(d);
            const double *sc = pk.scales.data() + j * static_cast<std::size_t>(d);
            double q = 0.0;
            for (int i = 0; i < d; ++i) {
                const double diff = b[i] - loc[i];
                q += sc[i] * diff * diff;
            }
            best_log = std::max(best_log, pk.log_weights[j] - q / (2.0 * dd));
        }
        const double t = tosz(std::max(0.0, 10.0 - std::exp(best_log)));
        return t * t + fpen(x);
    }
    case BaseFunction::Katsuura: {
        rotate(rot[0], a.data(), b.data(), d);
        condition(b.data(), d, 100.0);
        rotate(rot[1], b.data(), a.data(), d);
        const double expo = 10.0 / std::pow(dd, 1.2);
        double prod = 1.0;
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            double t = a[i];
            double wj = 1.0;
            for (int j = 1; j <= 32; ++j) {
                t *= 2.0;
                wj *= 0.5;
                s += std::abs(t - std::floor(t + 0.5)) * wj;
            }
            prod *= std::pow(1.0 + static_cast<double>(i + 1) * s, expo);
        }
        return 10.0 / (dd * dd) * (prod - 1.0) + fpen(x);
    }
    case BaseFunction::LunacekBiRastrigin: {
        constexpr double mu0 = 2.5;
        constexpr double dpar = 1.0;
        const double s = 1.0 - 1.0 / (2.0 * std::sqrt(dd + 20.0) - 8.2);
        const double mu1 = -std::sqrt((mu0 * mu0 - dpar) / s);
        double t0 = 0.0;
        double t1 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double sign = p.x_opt[i] >= 0.0 ? 1.0 : -1.0;
            const double xh = mu0 + 2.0 * sign * a[i];
            t0 += (xh - mu0) * (xh - mu0);
            t1 += (xh - mu1) * (xh - mu1);
            a[i] = 2.0 * sign * a[i];
        }
        rotate(rot[0], a.data(), b.data(), d);
        condition(b.data(), d, 100.0);
        rotate(rot[1], b.data(), a.data(), d);
        double c = 0.0;
        for (int i = 0; i < d; ++i) {
            c += std::cos(kTwoPi * a[i]);
        }
        return std::min(t0, dpar * dd + s * t1) + 10.0 * (dd - c) + 1e4 * fpen(x);
    }
    }
    return 0.0;
}

int rotation_count(BaseFunction f) {
    switch (f) {
    case BaseFunction::Sphere:
    case BaseFunction::EllipsoidSeparable:
    case BaseFunction::RastriginSeparable:
    case BaseFunction::BucheRastrigin:
    case BaseFunction::LinearSlope:
    case BaseFunction::Rosenbrock:
    case BaseFunction::Schwefel:
        return 0;
    case BaseFunction::RosenbrockRotated:
    case BaseFunction::Ellipsoid:
    case BaseFunction::Discus:
    case BaseFunction::BentCigar:
    case BaseFunction::DifferentPowers:
    case BaseFunction::GriewankRosenbrock:
    case BaseFunction::Gallagher101:
    case BaseFunction::Gallagher21:
        return 1;
    default:
        return 2;
    }
}

PeakField make_peaks(int n_peaks, double optimum_alpha, const std::vector<double> &x_opt,
                     const Eigen::MatrixXd &rot, Rng &rng) {
    const int d = static_cast<int>(x_opt.size());
    PeakField field;
    field.weights.resize(n_peaks);
    field.log_weights.resize(n_peaks);
    field.locations.resize(static_cast<std::size_t>(n_peaks) * d);
    field.scales.resize(static_cast<std::size_t>(n_peaks) * d);

    std::vector<double> alphas(n_peaks - 1);
    for (int j = 0; j < n_peaks - 1; ++j) {
        alphas[j] = std::pow(1000.0, 2.0 * j / static_cast<double>(n_peaks - 2));
    }
    rng.shuffle(alphas.begin(), alphas.end());

    std::vector<double> raw(d);
    std::vector<int> perm(d);
    for (int j = 0; j < n_peaks; ++j) {
        const double alpha = j == 0 ? optimum_alpha : alphas[j - 1];
        field.weights[j] = j == 0 ? 10.0 : 1.1 + 8.0 * (j - 1) / static_cast<double>(n_peaks - 2);
        field.log_weights[j] = std::log(field.weights[j]);
        for (int i = 0; i < d; ++i) {
            raw[i] = j == 0 ? x_opt[i] : rng.uniform(-4.9, 4.9);
        }
        Eigen::Map<const Eigen::VectorXd> v(raw.data(), d);
        const Eigen::VectorXd rotated = rot * v;
        for (int i = 0; i < d; ++i) {
            perm[i] = i;
        }
        rng.shuffle(perm.begin(), perm.end());
        for (int i = 0; i < d; ++i) {
            field.locations[static_cast<std::size_t>(j) * d + i] = rotated[i];
            field.scales[static_cast<std::size_t>(j) * d + i] =
                lambda(alpha, perm[i], d) / std::pow(alpha, 0.25);
        }
    }
    return field;
}

} // namespace

std::string_view base_function_name(BaseFunction f) {
    switch (f) {
    case BaseFunction::Sphere: return "sphere";
    case BaseFunction::EllipsoidSeparable: return "ellipsoid_separable";
    case BaseFunction::RastriginSeparable: return "rastrigin_separable";
    case BaseFunction::BucheRastrigin: return "buche_rastrigin";
    case BaseFunction::LinearSlope: return "linear_slope";
    case BaseFunction::AttractiveSector: return "attractive_sector";
    case BaseFunction::StepEllipsoid: return "step_ellipsoid";
    case BaseFunction::Rosenbrock: return "rosenbrock";
    case BaseFunction::RosenbrockRotated: return "rosenbrock_rotated";
    case BaseFunction::Ellipsoid: return "ellipsoid";
    case BaseFunction::Discus: return "discus";
    case BaseFunction::BentCigar: return "bent_cigar";
    case BaseFunction::SharpRidge: return "sharp_ridge";
    case BaseFunction::DifferentPowers: return "different_powers";
    case BaseFunction::Rastrigin: return "rastrigin";
    case BaseFunction::Weierstrass: return "weierstrass";
    case BaseFunction::SchaffersF7: return "schaffers_f7";
    case BaseFunction::SchaffersF7IllConditioned: return "schaffers_f7_ill";
    case BaseFunction::GriewankRosenbrock: return "griewank_rosenbrock";
    case BaseFunction::Schwefel: return "schwefel";
    case BaseFunction::Gallagher101: return "gallagher_101";
    case BaseFunction::Gallagher21: return "gallagher_21";
    case BaseFunction::Katsuura: return "katsuura";
    case BaseFunction::LunacekBiRastrigin: return "lunacek_bi_rastrigin";
    }
    return "unknown";
}

bool operator==(const ProblemInstance &a, const ProblemInstance &b) {
    if (a.class_id != b.class_id || a.instance_id != b.instance_id || a.dim != b.dim ||
        a.base_id != b.base_id || a.x_opt != b.x_opt || a.f_opt != b.f_opt ||
        a.scale_factor != b.scale_factor || a.rotations.size() != b.rotations.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.rotations.size(); ++i) {
        if (a.rotations[i] != b.rotations[i]) {
            return false;
        }
    }
    return a.peaks.weights == b.peaks.weights && a.peaks.locations == b.peaks.locations &&
           a.peaks.scales == b.peaks.scales;
}

Eigen::MatrixXd random_rotation(int dim, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd g(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            g(i, j) = rng.normal();
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
    // Fix column signs so the factorization (and thus q) is unique.
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        if (r(j, j) < 0.0) {
            q.col(j) *= -1.0;
        }
    }
    return q;
}

ProblemInstance make_instance(int class_id, int instance_id, int dim) {
    if (class_id < 1 || class_id > kNumClasses) {
        throw UnknownClassError("unknown problem class " + std::to_string(class_id));
    }
    if (instance_id < 1) {
        throw std::invalid_argument("instance_id must be >= 1");
    }
    if (dim < 2 || dim > kMaxDim) {
        throw std::invalid_argument("dim must be in [2, " + std::to_string(kMaxDim) + "]");
    }

    const std::uint64_t seed = derive_seed({kInstanceStream, static_cast<std::uint64_t>(class_id),
                                            static_cast<std::uint64_t>(instance_id),
                                            static_cast<std::uint64_t>(dim)});
    Rng rng(seed);

    ProblemInstance p;
    p.class_id = class_id;
    p.instance_id = instance_id;
    p.dim = dim;
    p.base_id = static_cast<BaseFunction>(class_id);
    p.x_opt.resize(dim);
    for (auto &v : p.x_opt) {
        v = rng.uniform(-4.0, 4.0);
    }
    p.f_opt = rng.uniform(-100.0, 100.0);

    const int n_rot = rotation_count(p.base_id);
    for (int r = 0; r < n_rot; ++r) {
        p.rotations.push_back(random_rotation(dim, mix64(seed + 1 + static_cast<std::uint64_t>(r))));
    }
    if (p.base_id == BaseFunction::Gallagher101) {
        p.peaks = make_peaks(101, 1000.0, p.x_opt, p.rotations[0], rng);
    } else if (p.base_id == BaseFunction::Gallagher21) {
        p.peaks = make_peaks(21, 1000.0 * 1000.0, p.x_opt, p.rotations[0], rng);
    }
    return p;
}

double evaluate_precision(const ProblemInstance &instance, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(instance.dim)) {
        throw std::invalid_argument("dimension mismatch: expected " + std::to_string(instance.dim) +
                                    ", got " + std::to_string(x.size()));
    }
    // Rounding in a few bases can dip a hair below zero next to the optimum.
    return instance.scale_factor * std::max(0.0, base_value(instance, x));
}

double evaluate(const ProblemInstance &instance, std::span<const double> x) {
    return evaluate_precision(instance, x) + instance.f_opt;
}

ProblemInstance rescale(const ProblemInstance &instance, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("rescale factor must be a positive finite number");
    }
    ProblemInstance out = instance;
    out.scale_factor *= factor;
    out.f_opt *= factor;
    return out;
}

std::vector<ProblemInstance> list_suite(int dim, int instances_per_class) {
    if (instances_per_class < 1) {
        throw std::invalid_argument("instances_per_class must be >= 1");
    }
    std::vector<ProblemInstance> suite;
    suite.reserve(static_cast<std::size_t>(kNumClasses) * instances_per_class);
    for (int c = 1; c <= kNumClasses; ++c) {
        for (int i = 1; i <= instances_per_class; ++i) {
            suite.push_back(make_instance(c, i, dim));
        }
    }
    return suite;
}

double estimate_f_range(const ProblemInstance &instance, int n_points, std::uint64_t seed) {
    const auto design = lhs_design(n_points, instance.dim, seed);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < n_points; ++i) {
        const double f = evaluate_precision(
            instance, std::span<const double>(design.data() + static_cast<std::size_t>(i) * instance.dim,
                                              static_cast<std::size_t>(instance.dim)));
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    return hi - lo;
}

} // namespace asbench

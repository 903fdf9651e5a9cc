#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace asbench {

inline constexpr int kNumClasses = 24;
inline constexpr double kDomainLower = -5.0;
inline constexpr double kDomainUpper = 5.0;
/// Upper bound on the problem dimension; evaluation uses fixed-size scratch.
inline constexpr int kMaxDim = 40;

class UnknownClassError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base analytic functions, one per problem class, numbered like the
/// classic noiseless black-box suite.
enum class BaseFunction : int {
    Sphere = 1,
    EllipsoidSeparable,
    RastriginSeparable,
    BucheRastrigin,
    LinearSlope,
    AttractiveSector,
    StepEllipsoid,
    Rosenbrock,
    RosenbrockRotated,
    Ellipsoid,
    Discus,
    BentCigar,
    SharpRidge,
    DifferentPowers,
    Rastrigin,
    Weierstrass,
    SchaffersF7,
    SchaffersF7IllConditioned,
    GriewankRosenbrock,
    Schwefel,
    Gallagher101,
    Gallagher21,
    Katsuura,
    LunacekBiRastrigin,
};

std::string_view base_function_name(BaseFunction f);

/// Random peak landscape used by the Gallagher classes. Peak locations are
/// stored already rotated.
struct PeakField {
    std::vector<double> weights;
    std::vector<double> log_weights;
    /// peaks x dim, row-major, in rotated coordinates.
    std::vector<double> locations;
    /// peaks x dim, row-major; diagonal of each peak's conditioning matrix.
    std::vector<double> scales;

    std::size_t size() const { return weights.size(); }
};

/// One objective function: a base function moved to a seeded optimum,
/// rotated, and offset. Immutable after construction.
struct ProblemInstance {
    int class_id = 0;
    int instance_id = 0;
    int dim = 0;
    BaseFunction base_id = BaseFunction::Sphere;
    std::vector<double> x_opt;
    double f_opt = 0.0;
    /// Zero, one (R) or two (R, Q) orthogonal dim x dim matrices.
    std::vector<Eigen::MatrixXd> rotations;
    double scale_factor = 1.0;
    PeakField peaks;

    friend bool operator==(const ProblemInstance &a, const ProblemInstance &b);
};

/// Builds instance `instance_id` of class `class_id`. Deterministic in its
/// arguments. Throws UnknownClassError for class ids outside 1..24.
ProblemInstance make_instance(int class_id, int instance_id, int dim);

/// f(x) = scale_factor * g(transform(x)) + f_opt.
double evaluate(const ProblemInstance &instance, std::span<const double> x);

/// f(x) - f_opt computed without adding and subtracting the offset, so tiny
/// precisions near the optimum are not lost to cancellation.
double evaluate_precision(const ProblemInstance &instance, std::span<const double> x);

/// Copy of `instance` with the objective multiplied by `factor` (> 0).
/// x_opt is unchanged; f_opt is multiplied by `factor` as well.
ProblemInstance rescale(const ProblemInstance &instance, double factor);

/// 24 * instances_per_class instances in (class_id, instance_id) order.
std::vector<ProblemInstance> list_suite(int dim, int instances_per_class);

/// Max minus min of f over a Latin hypercube sample of the domain.
double estimate_f_range(const ProblemInstance &instance, int n_points, std::uint64_t seed);

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
Eigen::MatrixXd random_rotation(int dim, std::uint64_t seed);

} // namespace asbench

#include "asbench/portfolio.hpp"

#include "asbench/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace asbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRange = kDomainUpper - kDomainLower;

double clamp_domain(double v) { return std::clamp(v, kDomainLower, kDomainUpper); }

/// Counts evaluations and tracks the best value seen. The optimizers see
/// f - f_opt, which orders points exactly like f.
class Objective {
public:
    Objective(const ProblemInstance &instance, std::vector<double> *trace)
        : instance_(instance), trace_(trace) {}

    double operator()(std::span<const double> x) {
        const double v = evaluate_precision(instance_, x);
        ++used_;
        best_ = std::min(best_, v);
        if (trace_ != nullptr) {
            trace_->push_back(best_);
        }
        return v;
    }

    int used() const { return used_; }
    double best() const { return best_; }

private:
    const ProblemInstance &instance_;
    std::vector<double> *trace_;
    int used_ = 0;
    double best_ = kInf;
};

/// Indices sorted by ascending fitness; ties keep index order.
std::vector<int> argsort(const std::vector<double> &fitness) {
    std::vector<int> order(fitness.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fitness[a] < fitness[b]; });
    return order;
}

using Population = std::vector<std::vector<double>>;

Population uniform_population(int size, int dim, Rng &rng) {
    Population pop(size, std::vector<double>(dim));
    for (auto &ind : pop) {
        for (auto &v : ind) {
            v = rng.uniform(kDomainLower, kDomainUpper);
        }
    }
    return pop;
}

// ---- GA --------------------------------------------------------------------

constexpr int kGaPop = 100;
constexpr double kSbxEta = 15.0;
constexpr double kSbxProb = 0.9;
constexpr double kPmEta = 20.0;

void sbx(std::vector<double> &c1, std::vector<double> &c2, Rng &rng) {
    const double xl = kDomainLower;
    const double xu = kDomainUpper;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (rng.uniform() > 0.5) {
            continue;
        }
        if (std::abs(c1[i] - c2[i]) <= 1e-14) {
            continue;
        }
        const double y1 = std::min(c1[i], c2[i]);
        const double y2 = std::max(c1[i], c2[i]);
        const double u = rng.uniform();
        const auto betaq = [&](double beta) {
            const double alpha = 2.0 - std::pow(beta, -(kSbxEta + 1.0));
            if (u <= 1.0 / alpha) {
                return std::pow(u * alpha, 1.0 / (kSbxEta + 1.0));
            }
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (kSbxEta + 1.0));
        };
        const double bq1 = betaq(1.0 + 2.0 * (y1 - xl) / (y2 - y1));
        const double bq2 = betaq(1.0 + 2.0 * (xu - y2) / (y2 - y1));
        double v1 = clamp_domain(0.5 * ((y1 + y2) - bq1 * (y2 - y1)));
        double v2 = clamp_domain(0.5 * ((y1 + y2) + bq2 * (y2 - y1)));
        if (rng.uniform() < 0.5) {
            std::swap(v1, v2);
        }
        c1[i] = v1;
        c2[i] = v2;
    }
}

void polynomial_mutation(std::vector<double> &x, Rng &rng) {
    const double prob = 1.0 / static_cast<double>(x.size());
    const double mut_pow = 1.0 / (kPmEta + 1.0);
    for (auto &v : x) {
        if (rng.uniform() >= prob) {
            continue;
        }
        const double d1 = (v - kDomainLower) / kRange;
        const double d2 = (kDomainUpper - v) / kRange;
        const double u = rng.uniform();
        double dq = 0.0;
        if (u < 0.5) {
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, kPmEta + 1.0);
            dq = std::pow(val, mut_pow) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, kPmEta + 1.0);
            dq = 1.0 - std::pow(val, mut_pow);
        }
        v = clamp_domain(v + dq * kRange);
    }
}

void run_ga(Objective &f, int dim, int generations, Rng &rng) {
    Population pop = uniform_population(kGaPop, dim, rng);
    std::vector<double> fit(kGaPop);
    for (int i = 0; i < kGaPop; ++i) {
        fit[i] = f(pop[i]);
    }
    const auto tournament = [&]() {
        const auto a = static_cast<int>(rng.below(kGaPop));
        const auto b = static_cast<int>(rng.below(kGaPop));
        return fit[b] < fit[a] ? b : a;
    };
    for (int g = 1; g < generations; ++g) {
        Population merged = pop;
        std::vector<double> merged_fit = fit;
        for (int k = 0; k < kGaPop / 2; ++k) {
            std::vector<double> c1 = pop[tournament()];
            std::vector<double> c2 = pop[tournament()];
            if (rng.uniform() < kSbxProb) {
                sbx(c1, c2, rng);
            }
            polynomial_mutation(c1, rng);
            polynomial_mutation(c2, rng);
            merged_fit.push_back(f(c1));
            merged.push_back(std::move(c1));
            merged_fit.push_back(f(c2));
            merged.push_back(std::move(c2));
        }
        const auto order = argsort(merged_fit);
        for (int i = 0; i < kGaPop; ++i) {
            pop[i] = merged[order[i]];
            fit[i] = merged_fit[order[i]];
        }
    }
}

// ---- DE --------------------------------------------------------------------

constexpr int kDePop = 100;
constexpr double kDeF = 0.5;
constexpr double kDeCr = 0.3;

void run_de(Objective &f, int dim, int generations, Rng &rng) {
    Population pop = uniform_population(kDePop, dim, rng);
    std::vector<double> fit(kDePop);
    for (int i = 0; i < kDePop; ++i) {
        fit[i] = f(pop[i]);
    }
    Population trials(kDePop, std::vector<double>(dim));
    std::vector<double> trial_fit(kDePop);
    for (int g = 1; g < generations; ++g) {
        for (int i = 0; i < kDePop; ++i) {
            int r1 = 0;
            int r2 = 0;
            int r3 = 0;
            do {
                r1 = static_cast<int>(rng.below(kDePop));
            } while (r1 == i);
            do {
                r2 = static_cast<int>(rng.below(kDePop));
            } while (r2 == i || r2 == r1);
            do {
                r3 = static_cast<int>(rng.below(kDePop));
            } while (r3 == i || r3 == r1 || r3 == r2);
            const auto jrand = static_cast<int>(rng.below(static_cast<std::uint64_t>(dim)));
            for (int j = 0; j < dim; ++j) {
                const bool take = rng.uniform() < kDeCr || j == jrand;
                trials[i][j] = take ? clamp_domain(pop[r1][j] + kDeF * (pop[r2][j] - pop[r3][j])) : pop[i][j];
            }
            trial_fit[i] = f(trials[i]);
        }
        for (int i = 0; i < kDePop; ++i) {
            if (trial_fit[i] <= fit[i]) {
                pop[i] = trials[i];
                fit[i] = trial_fit[i];
            }
        }
    }
}

// ---- PSO -------------------------------------------------------------------

constexpr int kPsoSwarm = 25;
constexpr double kPsoC1 = 2.0;
constexpr double kPsoC2 = 2.0;
constexpr double kPsoVmax = 0.2 * kRange;

void run_pso(Objective &f, int dim, int generations, Rng &rng) {
    Population x = uniform_population(kPsoSwarm, dim, rng);
    Population v(kPsoSwarm, std::vector<double>(dim));
    for (auto &vi : v) {
        for (auto &c : vi) {
            c = rng.uniform(-kPsoVmax, kPsoVmax);
        }
    }
    Population pbest = x;
    std::vector<double> pfit(kPsoSwarm);
    int gbest = 0;
    for (int i = 0; i < kPsoSwarm; ++i) {
        pfit[i] = f(x[i]);
        if (pfit[i] < pfit[gbest]) {
            gbest = i;
        }
    }
    std::vector<double> gpos = pbest[gbest];
    double gfit = pfit[gbest];
    for (int g = 1; g < generations; ++g) {
        const double t = generations > 1 ? static_cast<double>(g - 1) / static_cast<double>(generations - 1) : 0.0;
        const double w = 0.9 - 0.5 * t;
        for (int i = 0; i < kPsoSwarm; ++i) {
            for (int j = 0; j < dim; ++j) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                double vel = w * v[i][j] + kPsoC1 * r1 * (pbest[i][j] - x[i][j]) + kPsoC2 * r2 * (gpos[j] - x[i][j]);
                vel = std::clamp(vel, -kPsoVmax, kPsoVmax);
                v[i][j] = vel;
                x[i][j] = clamp_domain(x[i][j] + vel);
            }
        }
        for (int i = 0; i < kPsoSwarm; ++i) {
            const double fi = f(x[i]);
            if (fi < pfit[i]) {
                pfit[i] = fi;
                pbest[i] = x[i];
            }
            if (fi < gfit) {
                gfit = fi;
                gpos = x[i];
            }
        }
    }
}

// ---- (mu, lambda)-ES ------------------------------------------------------

constexpr int kEsMu = 20;
constexpr int kEsLambda = 140;
constexpr double kEsSigma0 = 0.1 * kRange;

void run_es(Objective &f, int dim, int generations, Rng &rng) {
    const double tau = 1.0 / std::sqrt(2.0 * dim);
    Population off = uniform_population(kEsLambda, dim, rng);
    std::vector<double> off_sigma(kEsLambda, kEsSigma0);
    std::vector<double> off_fit(kEsLambda);
    for (int i = 0; i < kEsLambda; ++i) {
        off_fit[i] = f(off[i]);
    }
    Population parents(kEsMu);
    std::vector<double> parent_sigma(kEsMu);
    for (int g = 1; g < generations; ++g) {
        const auto order = argsort(off_fit);
        for (int k = 0; k < kEsMu; ++k) {
            parents[k] = off[order[k]];
            parent_sigma[k] = off_sigma[order[k]];
        }
        for (int i = 0; i < kEsLambda; ++i) {
            const auto p = static_cast<int>(rng.below(kEsMu));
            const double sigma = parent_sigma[p] * std::exp(tau * rng.normal());
            for (int j = 0; j < dim; ++j) {
                off[i][j] = clamp_domain(parents[p][j] + sigma * rng.normal());
            }
            off_sigma[i] = sigma;
            off_fit[i] = f(off[i]);
        }
    }
}

// ---- CMA-ES ----------------------------------------------------------------

constexpr double kCmaSigma0 = 2.0;

void run_cmaes(Objective &f, int dim, int generations, Rng &rng) {
    using Eigen::MatrixXd;
    using Eigen::VectorXd;
    const int n = dim;
    const int lambda = population_size(AlgorithmId::CMAES, dim);
    const int mu = lambda / 2;
    VectorXd w(mu);
    for (int i = 0; i < mu; ++i) {
        w[i] = std::log(mu + 0.5) - std::log(i + 1.0);
    }
    w /= w.sum();
    const double mueff = 1.0 / w.squaredNorm();
    const double dn = n;
    const double cs = (mueff + 2.0) / (dn + mueff + 5.0);
    const double ds = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (dn + 1.0)) - 1.0) + cs;
    const double cc = (4.0 + mueff / dn) / (dn + 4.0 + 2.0 * mueff / dn);
    const double c1 = 2.0 / ((dn + 1.3) * (dn + 1.3) + mueff);
    const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((dn + 2.0) * (dn + 2.0) + mueff));
    const double chin = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

    VectorXd mean(n);
    for (int i = 0; i < n; ++i) {
        mean[i] = rng.uniform(-4.0, 4.0);
    }
    double sigma = kCmaSigma0;
    MatrixXd c = MatrixXd::Identity(n, n);
    VectorXd ps = VectorXd::Zero(n);
    VectorXd pc = VectorXd::Zero(n);

    MatrixXd ys(n, lambda);
    std::vector<double> fit(lambda);
    std::vector<double> xbuf(n);
    for (int g = 0; g < generations; ++g) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(c);
        MatrixXd b = es.eigenvectors();
        VectorXd dvals = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt();
        if (es.info() != Eigen::Success || !b.allFinite() || !dvals.allFinite()) {
            c = MatrixXd::Identity(n, n);
            b = MatrixXd::Identity(n, n);
            dvals = VectorXd::Ones(n);
        }
        for (int k = 0; k < lambda; ++k) {
            VectorXd z(n);
            for (int i = 0; i < n; ++i) {
                z[i] = rng.normal();
            }
            VectorXd y = b * dvals.cwiseProduct(z);
            bool clamped = false;
            for (int i = 0; i < n; ++i) {
                const double xi = mean[i] + sigma * y[i];
                xbuf[i] = clamp_domain(xi);
                clamped = clamped || xbuf[i] != xi;
            }
            if (clamped) {
                for (int i = 0; i < n; ++i) {
                    y[i] = (xbuf[i] - mean[i]) / sigma;
                }
            }
            ys.col(k) = y;
            fit[k] = f(xbuf);
        }
        const auto order = argsort(fit);
        VectorXd yw = VectorXd::Zero(n);
        for (int i = 0; i < mu; ++i) {
            yw += w[i] * ys.col(order[i]);
        }
        for (int i = 0; i < n; ++i) {
            mean[i] = clamp_domain(mean[i] + sigma * yw[i]);
        }
        const VectorXd cinv_yw = b * (b.transpose() * yw).cwiseQuotient(dvals);
        ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * cinv_yw;
        const double ps_norm = ps.norm();
        const double denom = std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * (g + 1)));
        const bool hsig = ps_norm / denom < (1.4 + 2.0 / (dn + 1.0)) * chin;
        pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * yw;
        MatrixXd rank_mu = MatrixXd::Zero(n, n);
        for (int i = 0; i < mu; ++i) {
            const auto yi = ys.col(order[i]);
            rank_mu.noalias() += w[i] * yi * yi.transpose();
        }
        c = (1.0 - c1 - cmu) * c + c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * c) + cmu * rank_mu;
        c = 0.5 * (c + c.transpose());
        sigma *= std::exp((cs / ds) * (ps_norm / chin - 1.0));
        if (!std::isfinite(sigma) || sigma < 1e-300) {
            sigma = 1e-300;
        }
        sigma = std::min(sigma, 10.0 * kRange);
        if (!c.allFinite()) {
            c = MatrixXd::Identity(n, n);
        }
    }
}

RunRecord execute(AlgorithmId algorithm, const ProblemInstance &instance, int budget, std::uint64_t seed,
                  std::vector<double> *trace) {
    const int pop = population_size(algorithm, instance.dim);
    if (budget < pop) {
        throw std::invalid_argument("budget " + std::to_string(budget) + " is smaller than the population size " +
                                    std::to_string(pop) + " of " + std::string(algorithm_name(algorithm)));
    }
    const int generations = budget / pop;
    Objective f(instance, trace);
    Rng rng(seed);
    switch (algorithm) {
    case AlgorithmId::GA: run_ga(f, instance.dim, generations, rng); break;
    case AlgorithmId::DE: run_de(f, instance.dim, generations, rng); break;
    case AlgorithmId::PSO: run_pso(f, instance.dim, generations, rng); break;
    case AlgorithmId::ES: run_es(f, instance.dim, generations, rng); break;
    case AlgorithmId::CMAES: run_cmaes(f, instance.dim, generations, rng); break;
    }
    RunRecord r;
    r.class_id = instance.class_id;
    r.instance_id = instance.instance_id;
    r.algorithm = algorithm;
    r.seed = seed;
    r.precision = f.best();
    r.best_f = f.best() + instance.f_opt;
    r.evals_used = f.used();
    r.scale_factor = instance.scale_factor;
    return r;
}

} // namespace

std::string_view algorithm_name(AlgorithmId a) {
    switch (a) {
    case AlgorithmId::GA: return "GA";
    case AlgorithmId::DE: return "DE";
    case AlgorithmId::PSO: return "PSO";
    case AlgorithmId::ES: return "ES";
    case AlgorithmId::CMAES: return "CMAES";
    }
    return "unknown";
}

AlgorithmId parse_algorithm(std::string_view name) {
    for (const auto a : kPortfolio) {
        if (algorithm_name(a) == name) {
            return a;
        }
    }
    if (name == "CMA-ES") {
        return AlgorithmId::CMAES;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

int population_size(AlgorithmId a, int dim) {
    switch (a) {
    case AlgorithmId::GA: return kGaPop;
    case AlgorithmId::DE: return kDePop;
    case AlgorithmId::PSO: return kPsoSwarm;
    case AlgorithmId::ES: return kEsLambda;
    case AlgorithmId::CMAES: return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dim))));
    }
    return 1;
}

RunRecord run(AlgorithmId algorithm, const ProblemInstance &instance, int budget, std::uint64_t seed) {
    return execute(algorithm, instance, budget, seed, nullptr);
}

std::vector<double> run_trace(AlgorithmId algorithm, const ProblemInstance &instance, int budget,
                              std::uint64_t seed) {
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(budget));
    execute(algorithm, instance, budget, seed, &trace);
    return trace;
}

RunTable::RunTable(std::vector<RunRecord> records, int repetitions)
    : records_(std::move(records)), repetitions_(repetitions) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto &r = records_[i];
        index_[{r.class_id, r.instance_id, algorithm_index(r.algorithm)}].push_back(i);
    }
    for (auto &[key, idx] : index_) {
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return records_[a].repetition < records_[b].repetition; });
    }
}

std::vector<RunRecord> RunTable::lookup(int class_id, int instance_id, AlgorithmId algorithm) const {
    const auto it = index_.find({class_id, instance_id, algorithm_index(algorithm)});
    if (it == index_.end()) {
        throw std::out_of_range("no runs for class " + std::to_string(class_id) + " instance " +
                                std::to_string(instance_id) + " algorithm " + std::string(algorithm_name(algorithm)));
    }
    std::vector<RunRecord> out;
    out.reserve(it->second.size());
    for (const auto i : it->second) {
        out.push_back(records_[i]);
    }
    return out;
}

std::vector<std::pair<int, int>> RunTable::instance_keys() const {
    std::vector<std::pair<int, int>> keys;
    for (const auto &[key, idx] : index_) {
        const std::pair<int, int> k{std::get<0>(key), std::get<1>(key)};
        if (keys.empty() || keys.back() != k) {
            keys.push_back(k);
        }
    }
    return keys;
}

bool RunTable::complete() const {
    if (repetitions_ < 1) {
        return false;
    }
    for (const auto &[c, i] : instance_keys()) {
        for (const auto a : kPortfolio) {
            const auto it = index_.find({c, i, algorithm_index(a)});
            if (it == index_.end() || it->second.size() != static_cast<std::size_t>(repetitions_)) {
                return false;
            }
            for (int r = 0; r < repetitions_; ++r) {
                if (records_[it->second[r]].repetition != r) {
                    return false;
                }
            }
        }
    }
    return true;
}

std::uint64_t run_seed(std::uint64_t master_seed, int class_id, int instance_id, AlgorithmId algorithm,
                       int repetition) {
    return derive_seed({master_seed, static_cast<std::uint64_t>(class_id), static_cast<std::uint64_t>(instance_id),
                        static_cast<std::uint64_t>(algorithm_index(algorithm)),
                        static_cast<std::uint64_t>(repetition)});
}

namespace {

void check_portfolio_args(const std::vector<ProblemInstance> &suite, int budget, int repetitions) {
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be >= 1");
    }
    for (const auto &inst : suite) {
        for (const auto a : kPortfolio) {
            if (budget < population_size(a, inst.dim)) {
                throw std::invalid_argument("budget smaller than the population size of " +
                                            std::string(algorithm_name(a)));
            }
        }
    }
}

RunRecord portfolio_cell(const std::vector<ProblemInstance> &suite, int budget, int repetitions,
                         std::uint64_t master_seed, std::size_t idx) {
    const auto per_instance = static_cast<std::size_t>(kPortfolioSize) * repetitions;
    const auto &inst = suite[idx / per_instance];
    const auto rest = idx % per_instance;
    const auto algorithm = kPortfolio[rest / repetitions];
    const int rep = static_cast<int>(rest % repetitions);
    auto rec = run(algorithm, inst, budget, run_seed(master_seed, inst.class_id, inst.instance_id, algorithm, rep));
    rec.repetition = rep;
    return rec;
}

} // namespace

RunTable run_portfolio(const std::vector<ProblemInstance> &suite, int budget, int repetitions,
                       std::uint64_t master_seed) {
    check_portfolio_args(suite, budget, repetitions);
    const std::size_t total = suite.size() * kPortfolioSize * static_cast<std::size_t>(repetitions);
    std::vector<RunRecord> records(total);
    const auto n = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        records[i] = portfolio_cell(suite, budget, repetitions, master_seed, static_cast<std::size_t>(i));
    }
    return RunTable(std::move(records), repetitions);
}

RunTable run_portfolio_serial(const std::vector<ProblemInstance> &suite, int budget, int repetitions,
                              std::uint64_t master_seed) {
    check_portfolio_args(suite, budget, repetitions);
    const std::size_t total = suite.size() * kPortfolioSize * static_cast<std::size_t>(repetitions);
    std::vector<RunRecord> records;
    records.reserve(total);
    for (std::size_t i = 0; i < total; ++i) {
        records.push_back(portfolio_cell(suite, budget, repetitions, master_seed, i));
    }
    return RunTable(std::move(records), repetitions);
}

} // namespace asbench

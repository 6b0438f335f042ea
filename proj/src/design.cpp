#include "eit/design.hpp"

#include "eit/errors.hpp"
#include "eit/parallel.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace eit {
namespace {

using Point = std::array<double, 4>;  // unit-cube coordinates of a design

constexpr double kGapFloor = kMinElectrodeGap * (1.0 + 1e-9);

// Unit cube -> (phi1, gaps). The last three coordinates are mapped by
// stick-breaking onto the simplex of four gaps that each exceed the floor,
// so uniform points in the cube give uniform gap vectors.
ElectrodeConfig config_from_point(const Point& z) {
    const double free_length = kTwoPi - 4.0 * kGapFloor;
    const double s1 = 1.0 - std::cbrt(1.0 - z[1]);
    const double s2 = (1.0 - s1) * (1.0 - std::sqrt(1.0 - z[2]));
    const double s3 = (1.0 - s1 - s2) * z[3];
    ElectrodeConfig cfg;
    double phi = kTwoPi * z[0];
    cfg.phi[0] = wrap(phi, kTwoPi);
    for (std::size_t i = 1; i < kNumElectrodes; ++i) {
        const double s = i == 1 ? s1 : i == 2 ? s2 : s3;
        phi += kGapFloor + free_length * s;
        cfg.phi[i] = wrap(phi, kTwoPi);
    }
    return cfg.sorted();
}

bool in_cube(const Point& z) {
    return std::all_of(z.begin() + 1, z.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

Point periodic_first(Point z) {
    z[0] = wrap(z[0], 1.0);
    return z;
}

class CriterionEvaluator {
public:
    CriterionEvaluator(const EllipseParams& t, double lambda, const RegularizationSpec& reg, Criterion c)
        : t_(t), lambda_(lambda), reg_(reg), criterion_(c) {}

    double operator()(const ElectrodeConfig& cfg) const {
        const Jacobian j = evaluate_unchecked(t_, cfg).jacobian;
        InformationMatrix m = j.transpose() * j;
        for (std::size_t i = 0; i < kNumParams; ++i) m(i, i) += lambda_ * reg_.weights[i] * reg_.weights[i];
        if (criterion_ == Criterion::DOptimal) return determinant(m);
        return Eigen::SelfAdjointEigenSolver<InformationMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
    }

private:
    EllipseParams t_;
    double lambda_;
    RegularizationSpec reg_;
    Criterion criterion_;
};

// Latin hypercube in [0, 1]^4.
std::vector<Point> latin_hypercube(int n, std::mt19937_64& rng) {
    std::vector<Point> pts(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < 4; ++d) {
        std::vector<int> strata(n);
        std::iota(strata.begin(), strata.end(), 0);
        std::shuffle(strata.begin(), strata.end(), rng);
        for (int i = 0; i < n; ++i) pts[i][d] = (strata[i] + unit(rng)) / n;
    }
    return pts;
}

// Compass search in cube coordinates; appends every evaluation to `trace`.
void pattern_search(Point z, int budget, double step, double min_step, const CriterionEvaluator& eval,
                    std::vector<DesignEvaluation>& trace) {
    if (budget <= 0) return;
    ElectrodeConfig cfg = config_from_point(z);
    double best = eval(cfg);
    trace.push_back({cfg, best});
    int used = 1;
    while (used < budget && step >= min_step) {
        bool improved = false;
        for (std::size_t d = 0; d < 4 && used < budget; ++d) {
            for (double sign : {1.0, -1.0}) {
                if (used >= budget) break;
                Point trial = z;
                trial[d] += sign * step;
                trial = periodic_first(trial);
                if (!in_cube(trial)) continue;
                const ElectrodeConfig c = config_from_point(trial);
                const double v = eval(c);
                ++used;
                trace.push_back({c, v});
                if (v > best) {
                    best = v;
                    z = trial;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
}

// Gaussian-process regression with a squared-exponential kernel; the first
// coordinate is periodic.
class GaussianProcess {
public:
    GaussianProcess(const std::vector<Point>& x, const std::vector<double>& y) : x_(x) {
        const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
        double var = 0.0;
        for (double v : y) var += (v - mean) * (v - mean);
        scale_ = std::sqrt(var / y.size());
        if (!(scale_ > 0.0)) scale_ = 1.0;
        mean_ = mean;
        y_.resize(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) y_(i) = (y[i] - mean) / scale_;

        double best_ll = -std::numeric_limits<double>::infinity();
        for (double ell : {0.05, 0.1, 0.2, 0.4}) {
            Fit f = fit(ell);
            if (f.log_likelihood > best_ll) {
                best_ll = f.log_likelihood;
                fit_ = std::move(f);
            }
        }
    }

    // Posterior mean and standard deviation in original units.
    std::pair<double, double> predict(const Point& z) const {
        Eigen::VectorXd k(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) k(i) = kernel(z, x_[i], fit_.lengthscale);
        const double mu = k.dot(fit_.alpha);
        const Eigen::VectorXd v = fit_.chol.matrixL().solve(k);
        const double var = std::max(1.0 - v.squaredNorm(), 1e-12);
        return {mean_ + scale_ * mu, scale_ * std::sqrt(var)};
    }

private:
    struct Fit {
        double lengthscale = 0.2;
        double log_likelihood = -std::numeric_limits<double>::infinity();
        Eigen::LLT<Eigen::MatrixXd> chol;
        Eigen::VectorXd alpha;
    };

    static double kernel(const Point& a, const Point& b, double ell) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            double d = std::abs(a[i] - b[i]);
            if (i == 0) d = std::min(d, 1.0 - d);
            d2 += d * d;
        }
        return std::exp(-0.5 * d2 / (ell * ell));
    }

    Fit fit(double ell) const {
        const auto n = static_cast<Eigen::Index>(x_.size());
        Eigen::MatrixXd k(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) k(i, j) = k(j, i) = kernel(x_[i], x_[j], ell);
        k.diagonal().array() += 1e-6;
        Fit f;
        f.lengthscale = ell;
        f.chol.compute(k);
        if (f.chol.info() != Eigen::Success) return f;
        f.alpha = f.chol.solve(y_);
        const double log_det = 2.0 * f.chol.matrixLLT().diagonal().array().log().sum();
        f.log_likelihood = -0.5 * y_.dot(f.alpha) - 0.5 * log_det;
        return f;
    }

    std::vector<Point> x_;
    Eigen::VectorXd y_;
    double mean_ = 0.0;
    double scale_ = 1.0;
    Fit fit_;
};

double expected_improvement(double mu, double sigma, double best) {
    const double z = (mu - best) / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi);
    return (mu - best) * cdf + sigma * pdf;
}

// Surrogate search on log criterion values.
void bayesian_search(int budget, const DesignOptions& options, std::mt19937_64& rng, const CriterionEvaluator& eval,
                     std::vector<DesignEvaluation>& trace) {
    auto log_value = [](double v) { return std::log(std::max(v, 1e-300)); };
    std::vector<Point> xs;
    std::vector<double> ys;
    auto record = [&](const Point& z) {
        const ElectrodeConfig c = config_from_point(z);
        const double v = eval(c);
        trace.push_back({c, v});
        xs.push_back(z);
        ys.push_back(log_value(v));
    };

    const int initial = std::min(budget, std::max(options.bo_initial_points, 2));
    for (const Point& z : latin_hypercube(initial, rng)) record(z);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 0.02);
    while (static_cast<int>(xs.size()) < budget) {
        const GaussianProcess gp(xs, ys);
        const auto best_it = std::max_element(ys.begin(), ys.end());
        const double best = *best_it;
        const Point incumbent = xs[best_it - ys.begin()];

        Point chosen = incumbent;
        double chosen_ei = -1.0;
        for (int k = 0; k < options.bo_candidates; ++k) {
            Point z;
            if (k % 4 == 3) {
                for (std::size_t d = 0; d < 4; ++d) z[d] = std::clamp(incumbent[d] + jitter(rng), 0.0, 1.0);
                z = periodic_first(z);
            } else {
                for (double& v : z) v = unit(rng);
            }
            const auto [mu, sigma] = gp.predict(z);
            const double ei = expected_improvement(mu, sigma, best);
            if (ei > chosen_ei) {
                chosen_ei = ei;
                chosen = z;
            }
        }
        record(chosen);
    }
}

} // namespace

const char* to_string(Criterion c) { return c == Criterion::DOptimal ? "D" : "E"; }

InformationMatrix information_matrix(const ElectrodeConfig& cfg, const EllipseParams& t_star, double lambda,
                                     const RegularizationSpec& reg) {
    if (!(lambda >= 0.0)) throw ConfigError("penalty weight lambda must be >= 0");
    const Jacobian j = jacobian(t_star, cfg);
    InformationMatrix m = j.transpose() * j;
    for (std::size_t i = 0; i < kNumParams; ++i) m(i, i) += lambda * reg.weights[i] * reg.weights[i];
    return m;
}

double determinant(const InformationMatrix& m) {
    const Eigen::LDLT<InformationMatrix> ldlt(m);
    return ldlt.vectorD().prod();
}

double d_criterion(const ElectrodeConfig& cfg, const EllipseParams& t_star, double lambda,
                   const RegularizationSpec& reg) {
    return determinant(information_matrix(cfg, t_star, lambda, reg));
}

double e_criterion(const ElectrodeConfig& cfg, const EllipseParams& t_star, double lambda,
                   const RegularizationSpec& reg) {
    const InformationMatrix m = information_matrix(cfg, t_star, lambda, reg);
    return Eigen::SelfAdjointEigenSolver<InformationMatrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

DesignResult optimize_design(const EllipseParams& t_star, double lambda, const RegularizationSpec& reg,
                             std::uint64_t seed, int budget, const DesignOptions& options) {
    validate(t_star);
    if (!(lambda >= 0.0)) throw ConfigError("penalty weight lambda must be >= 0");
    if (budget < 1) throw ConfigError("design budget must be >= 1");

    const CriterionEvaluator eval(t_star, lambda, reg, options.criterion);
    DesignResult result;
    result.criterion = options.criterion;
    result.seed = seed;

    const ElectrodeConfig uniform = ElectrodeConfig::uniform();
    result.trace.push_back({uniform, eval(uniform)});

    std::mt19937_64 rng(seed);
    const int remaining = budget - 1;
    if (remaining > 0 && options.strategy == SearchStrategy::BayesianOptimization) {
        bayesian_search(remaining, options, rng, eval, result.trace);
    } else if (remaining > 0) {
        const int starts = std::min(options.num_starts, remaining);
        const std::vector<Point> seeds = latin_hypercube(starts, rng);
        std::vector<std::vector<DesignEvaluation>> traces(starts);
        parallel_for(static_cast<std::size_t>(starts), [&](std::size_t i) {
            const int share = remaining / starts + (static_cast<int>(i) < remaining % starts ? 1 : 0);
            pattern_search(seeds[i], share, options.initial_step, options.min_step, eval, traces[i]);
        });
        for (auto& t : traces) result.trace.insert(result.trace.end(), t.begin(), t.end());
    }

    const DesignEvaluation* best = &result.trace.front();
    for (const DesignEvaluation& e : result.trace)
        if (e.value > best->value) best = &e;
    result.phi_opt = best->phi;
    result.objective_value = best->value;
    return result;
}

} // namespace eit

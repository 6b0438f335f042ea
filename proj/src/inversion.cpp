#include "eit/inversion.hpp"

#include "eit/bfgs.hpp"
#include "eit/errors.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace eit {
namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

// Optimization coordinates u = (b1, b2, log A, log r, xi).
EllipseParams from_unconstrained(const Vec5& u) {
    return {u(0), u(1), std::exp(u(2)), std::exp(u(3)), u(4)};
}

Vec5 to_unconstrained(const EllipseParams& t) {
    Vec5 u;
    u << t.center_x, t.center_y, std::log(t.area), std::log(t.aspect_ratio), t.orientation;
    return u;
}

DataVector as_data(const MeasurementVector& g) {
    return Eigen::Map<const DataVector>(g.values.data());
}

void check_lambda(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("penalty weight lambda must be >= 0");
}

class LeastSquaresProblem {
public:
    LeastSquaresProblem(const MeasurementVector& g, const ElectrodeConfig& cfg, double lambda,
                        const RegularizationSpec& reg)
        : data_(as_data(g)), cfg_(cfg), lambda_(lambda) {
        for (std::size_t i = 0; i < kNumParams; ++i) {
            weight_sq_(i) = reg.weights[i] * reg.weights[i];
            prior_(i) = reg.prior[i];
        }
    }

    struct Value {
        double objective;
        double residual_norm;
        Vec5 grad_t;
    };

    Value evaluate(const EllipseParams& t) const {
        const ForwardEvaluation ev = evaluate_unchecked(t, cfg_);
        const DataVector residual = ev.values - data_;
        const Vec5 offset = params(t) - prior_;
        Value v;
        v.residual_norm = residual.norm();
        v.objective = residual.squaredNorm() + lambda_ * offset.dot(weight_sq_.cwiseProduct(offset));
        v.grad_t = 2.0 * ev.jacobian.transpose() * residual + 2.0 * lambda_ * weight_sq_.cwiseProduct(offset);
        return v;
    }

    std::optional<double> operator()(const Vec5& u, Vec5& grad_u) const {
        const EllipseParams t = from_unconstrained(u);
        if (!is_admissible(t)) return std::nullopt;
        const Value v = evaluate(t);
        if (!std::isfinite(v.objective)) return std::nullopt;
        grad_u = v.grad_t.cwiseProduct(chain(t));
        return v.objective;
    }

    // Gauss-Newton curvature in u coordinates with a small ridge.
    Mat5 curvature(const Vec5& u) const {
        const EllipseParams t = from_unconstrained(u);
        if (!is_admissible(t)) return Mat5::Identity();
        const Vec5 d = chain(t);
        const Jacobian ju = evaluate_unchecked(t, cfg_).jacobian * d.asDiagonal();
        Mat5 b = 2.0 * (ju.transpose() * ju);
        b.diagonal() += 2.0 * lambda_ * weight_sq_.cwiseProduct(d).cwiseProduct(d);
        const double ridge = 1e-10 * b.diagonal().maxCoeff() + std::numeric_limits<double>::min();
        b.diagonal().array() += ridge;
        return b;
    }

private:
    static Vec5 params(const EllipseParams& t) { return Eigen::Map<const Vec5>(t.to_array().data()); }

    // dt/du for the log-reparametrized entries.
    static Vec5 chain(const EllipseParams& t) {
        Vec5 d;
        d << 1.0, 1.0, t.area, t.aspect_ratio, 1.0;
        return d;
    }

    DataVector data_;
    ElectrodeConfig cfg_;
    double lambda_;
    Vec5 weight_sq_;
    Vec5 prior_;
};

// Objectives equal up to rounding count as ties, which a converged run wins.
bool improves(double value, bool converged, double best_value, bool best_converged) {
    const double tie = 1e-12 * std::abs(best_value);
    if (value < best_value - tie) return true;
    return value <= best_value + tie && converged && !best_converged;
}

} // namespace

double objective(const EllipseParams& t, const MeasurementVector& g, const ElectrodeConfig& cfg, double lambda,
                 const RegularizationSpec& reg) {
    check_lambda(lambda);
    validate(t);
    validate(cfg);
    return LeastSquaresProblem(g, cfg, lambda, reg).evaluate(t).objective;
}

ParamVector objective_gradient(const EllipseParams& t, const MeasurementVector& g, const ElectrodeConfig& cfg,
                               double lambda, const RegularizationSpec& reg) {
    check_lambda(lambda);
    validate(t);
    validate(cfg);
    const Vec5 grad = LeastSquaresProblem(g, cfg, lambda, reg).evaluate(t).grad_t;
    ParamVector out;
    for (std::size_t i = 0; i < kNumParams; ++i) out[i] = grad(i);
    return out;
}

EllipseParams prior_centered_start() { return {0.0, 0.0, 0.01, 1.0, 0.0}; }

std::vector<EllipseParams> default_starts(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double offset = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    std::vector<EllipseParams> starts{prior_centered_start()};
    constexpr int kAngles = 8;
    for (double radius : {0.2, 0.4, 0.6}) {
        for (int k = 0; k < kAngles; ++k) {
            const double angle = kTwoPi * (k + offset) / kAngles;
            EllipseParams t = prior_centered_start();
            t.center_x = radius * std::cos(angle);
            t.center_y = radius * std::sin(angle);
            starts.push_back(t);
        }
    }
    return starts;
}

InversionResult minimize(const MeasurementVector& g, const ElectrodeConfig& cfg, double lambda,
                         const RegularizationSpec& reg, const MinimizeOptions& options) {
    check_lambda(lambda);
    validate(cfg);

    std::vector<EllipseParams> starts = options.starts.empty() ? default_starts(options.seed) : options.starts;
    starts.insert(starts.end(), options.extra_starts.begin(), options.extra_starts.end());

    const LeastSquaresProblem problem(g, cfg, lambda, reg);
    optim::BfgsOptions<5> bfgs_options;
    bfgs_options.max_iterations = options.max_iterations;
    bfgs_options.gradient_tolerance = options.gradient_tolerance;
    const optim::Bfgs<5> solver(std::cref(problem), bfgs_options,
                                [&problem](const Vec5& u) { return problem.curvature(u); });

    InversionResult best;
    best.objective_value = std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (const EllipseParams& start : starts) {
        if (!is_admissible(start)) continue;
        const auto res = solver.minimize(to_unconstrained(start));
        ++best.starts_used;
        if (!std::isfinite(res.value)) continue;
        if (have_best && !improves(res.value, res.converged, best.objective_value, best.converged)) continue;
        have_best = true;
        const EllipseParams t = from_unconstrained(res.x);
        best.t_raw = t;
        best.t_star = canonicalize(t);
        best.objective_value = res.value;
        best.residual_norm = problem.evaluate(t).residual_norm;
        best.gradient_norm = res.gradient_norm;
        best.iterations = res.iterations;
        best.converged = res.converged;
    }
    if (!have_best) throw DomainError("no admissible starting point for the inversion");
    best.lambda = lambda;
    return best;
}

MorozovResult morozov_lambda(const MeasurementVector& g, const ElectrodeConfig& cfg, double epsilon,
                             const RegularizationSpec& reg, const MorozovOptions& options) {
    if (!(epsilon > 0.0)) throw ConfigError("discrepancy principle needs a positive noise level epsilon");
    const double g_norm = g.norm();
    if (!(g_norm > 0.0)) throw ConfigError("discrepancy principle needs nonzero data");

    MorozovResult out;
    out.target_residual = epsilon * g_norm;
    const double target = out.target_residual;
    const double tol = options.rel_tolerance * target;

    auto solve = [&](double lambda, std::vector<EllipseParams> warm) {
        MinimizeOptions mo = options.minimize;
        mo.extra_starts.insert(mo.extra_starts.end(), warm.begin(), warm.end());
        InversionResult res = minimize(g, cfg, lambda, reg, mo);
        out.trace.push_back({lambda, res.residual_norm});
        return res;
    };
    double lo = options.lambda_min, hi = options.lambda_max;
    InversionResult res_lo = solve(lo, {});
    if (res_lo.residual_norm > target + tol) {
        std::ostringstream os;
        os << "Morozov bracket failed at the lower end: residual " << res_lo.residual_norm << " at lambda = " << lo
           << " already exceeds the target " << target;
        throw NumericalError(os.str());
    }
    InversionResult res_hi = solve(hi, {res_lo.t_raw});
    if (res_hi.residual_norm < target - tol) {
        std::ostringstream os;
        os << "Morozov bracket failed at the upper end: residual " << res_hi.residual_norm << " at lambda = " << hi
           << " is still below the target " << target;
        throw NumericalError(os.str());
    }

    // Root of residual(lambda) = aim. When an end of the bracket already sits
    // inside the tolerance band on the far side of the target, aim for the
    // band edge instead so the crossing still exists.
    double aim = target;
    if (res_lo.residual_norm > target) aim = target + tol;
    if (res_hi.residual_norm < target) aim = target - tol;

    for (int i = 0; i < options.max_bisections && hi > lo * options.bracket_ratio; ++i) {
        const double mid = std::sqrt(lo * hi);
        InversionResult res = solve(mid, {res_lo.t_raw, res_hi.t_raw});
        if (res.residual_norm < aim) {
            lo = mid;
            res_lo = std::move(res);
        } else {
            hi = mid;
            res_hi = std::move(res);
        }
    }

    const double miss_lo = std::abs(res_lo.residual_norm - target);
    const double miss_hi = std::abs(res_hi.residual_norm - target);
    if (std::min(miss_lo, miss_hi) > tol) {
        std::ostringstream os;
        os << "Morozov bisection closed on lambda in [" << lo << ", " << hi << "] without meeting the target residual "
           << target << " (residuals " << res_lo.residual_norm << ", " << res_hi.residual_norm << ")";
        throw NumericalError(os.str());
    }
    const bool take_hi = miss_hi <= miss_lo;
    out.lambda = take_hi ? hi : lo;
    out.inversion = take_hi ? std::move(res_hi) : std::move(res_lo);
    return out;
}

MeasurementVector synthesize_data(const EllipseParams& t0, const ElectrodeConfig& cfg, double epsilon,
                                  std::uint64_t seed) {
    if (!(epsilon >= 0.0)) throw ConfigError("noise level epsilon must be >= 0");
    MeasurementVector g = forward_map(t0, cfg);
    g.epsilon = epsilon;
    if (epsilon == 0.0) return g;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::array<double, kNumMeasurements> noise;
    double norm_sq = 0.0;
    for (double& n : noise) {
        n = normal(rng);
        norm_sq += n * n;
    }
    const double scale = epsilon * g.norm() / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < kNumMeasurements; ++i) g.values[i] += scale * noise[i];
    return g;
}

} // namespace eit

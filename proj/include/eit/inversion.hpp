#pragma once

// Regularized least-squares recovery of the ellipse parameters,
//
//   min_t ||F(t, phi) - g||^2 + lambda ||R (t - t_prior)||^2,
//
// with R diagonal, and selection of lambda by the discrepancy principle.

#include "eit/forward_map.hpp"
#include "eit/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eit {

/// Diagonal of R and the prior t_prior, both in ParamIndex order. The
/// default only penalizes the aspect ratio and orientation, towards r = 1
/// and xi = 0.
struct RegularizationSpec {
    ParamVector weights{0.0, 0.0, 0.0, 1.0, 1.0};
    ParamVector prior{0.0, 0.0, 0.0, 1.0, 0.0};
};

struct InversionResult {
    EllipseParams t_star;  ///< canonical form (r >= 1, xi in [0, pi))
    EllipseParams t_raw;   ///< as returned by the optimizer
    double lambda = 0.0;
    double residual_norm = 0.0;
    double objective_value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int starts_used = 0;
};

/// ||F(t) - g||^2 + lambda ||R (t - t_prior)||^2.
[[nodiscard]] double objective(const EllipseParams& t, const MeasurementVector& g, const ElectrodeConfig& cfg,
                               double lambda, const RegularizationSpec& reg = {});

/// Gradient of `objective` with respect to t, 2 J'(F - g) + 2 lambda R'R (t - t_prior).
[[nodiscard]] ParamVector objective_gradient(const EllipseParams& t, const MeasurementVector& g,
                                             const ElectrodeConfig& cfg, double lambda,
                                             const RegularizationSpec& reg = {});

struct MinimizeOptions {
    int max_iterations = 500;
    double gradient_tolerance = 1e-9;
    /// Explicit starting points. Empty selects the default multistart grid.
    std::vector<EllipseParams> starts;
    /// Added to whichever start set is in use (warm starts).
    std::vector<EllipseParams> extra_starts;
    /// Seeds the angular offset of the default grid.
    std::uint64_t seed = 0;
};

/// Default multistart: A = 0.01, r = 1, xi = 0 at the origin and at
/// 8 angles on each of the radii 0.2, 0.4, 0.6.
[[nodiscard]] std::vector<EllipseParams> default_starts(std::uint64_t seed);

/// Single start at the prior: center at the origin, A = 0.01, r = 1, xi = 0.
[[nodiscard]] EllipseParams prior_centered_start();

/// BFGS from every start over (b1, b2, log A, log r, xi); the lowest final
/// objective wins, earlier starts winning ties.
[[nodiscard]] InversionResult minimize(const MeasurementVector& g, const ElectrodeConfig& cfg, double lambda,
                                       const RegularizationSpec& reg = {}, const MinimizeOptions& options = {});

struct BisectionStep {
    double lambda;
    double residual_norm;
};

struct MorozovOptions {
    double lambda_min = 1e-12;
    double lambda_max = 1e2;
    int max_bisections = 60;
    /// Accept when |residual - target| <= rel_tolerance * target.
    double rel_tolerance = 0.05;
    /// Bisection stops once lambda_hi / lambda_lo falls below this ratio.
    double bracket_ratio = 1.01;
    MinimizeOptions minimize;
};

struct MorozovResult {
    double lambda = 0.0;
    double target_residual = 0.0;
    InversionResult inversion;
    /// Every solve, in evaluation order (bracket ends first).
    std::vector<BisectionStep> trace;
};

/// Bisection on log lambda for ||F(t*) - g|| = epsilon ||g||, run until the
/// bracket closes; the closer end within tolerance is returned. Throws
/// NumericalError when the target is not bracketed by [lambda_min, lambda_max]
/// or the residual jumps across the tolerance band.
[[nodiscard]] MorozovResult morozov_lambda(const MeasurementVector& g, const ElectrodeConfig& cfg, double epsilon,
                                           const RegularizationSpec& reg = {}, const MorozovOptions& options = {});

/// g = F(t0) + n, with n a standard normal direction drawn from `seed` and
/// scaled to ||n|| = epsilon ||F(t0)|| exactly.
[[nodiscard]] MeasurementVector synthesize_data(const EllipseParams& t0, const ElectrodeConfig& cfg, double epsilon,
                                                std::uint64_t seed);

} // namespace eit

#pragma once

// Linearized EIT forward map for a small elliptical inclusion.
//
// With driving and measuring electrodes at the same pair of boundary points,
// the perturbational voltage is the integral over the inclusion of
// P = |grad U0|^2, where U0 is the background potential of a unit current
// dipole. P is Taylor expanded to second order about the inclusion center
// and integrated against the ellipse, giving
//
//   V = A P + (A^2 r / 2pi) u'Hu + (A^2 / (2pi r)) v'Hv,
//
// with H the Hessian of P at the center, u = (cos xi, sin xi) and
// v = (-sin xi, cos xi). All data are per unit conductivity contrast.

#include "eit/geometry.hpp"

#include <Eigen/Core>

#include <array>

namespace eit {

using DataVector = Eigen::Matrix<double, kNumMeasurements, 1>;
using Jacobian = Eigen::Matrix<double, kNumMeasurements, kNumParams>;

/// U0(x, y) = log(|p - e+|^2 / |p - e-|^2) for electrodes e+ = (cos phi+, sin phi+)
/// and e- = (cos phi-, sin phi-). Throws DomainError outside the closed disk or
/// on an electrode.
[[nodiscard]] double background_potential(double x, double y, double phi_plus, double phi_minus);

/// P and its partial derivatives up to third order at a point.
struct KernelJet {
    double value = 0.0;
    std::array<double, 2> grad{};  ///< Px, Py
    std::array<double, 3> hess{};  ///< Pxx, Pxy, Pyy
    std::array<double, 4> third{}; ///< Pxxx, Pxxy, Pxyy, Pyyy
};

/// P = grad U0 . grad U0 with derivatives, evaluated in closed form.
[[nodiscard]] KernelJet kernel_and_derivatives(double x, double y, double phi_plus, double phi_minus);

/// Voltage difference between two electrodes driven by a unit current
/// between the same two electrodes.
[[nodiscard]] double linearized_voltage(const EllipseParams& t, double phi_plus, double phi_minus);

/// The six measurements in kPairs order; epsilon is 0.
[[nodiscard]] MeasurementVector forward_map(const EllipseParams& t, const ElectrodeConfig& cfg);

/// dF/dt with columns in ParamIndex order.
[[nodiscard]] Jacobian jacobian(const EllipseParams& t, const ElectrodeConfig& cfg);

/// Forward values and Jacobian from one pass over the kernel jets.
struct ForwardEvaluation {
    DataVector values;
    Jacobian jacobian;
};

/// Unchecked combined evaluation used by the optimizers. Callers guarantee
/// is_admissible(t) and a valid electrode configuration.
[[nodiscard]] ForwardEvaluation evaluate_unchecked(const EllipseParams& t, const ElectrodeConfig& cfg);

} // namespace eit

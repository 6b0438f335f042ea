#pragma once

// Brute-force reference for the linearized measurement: numerical
// quadrature of grad U0 . grad W over the exact elliptical inclusion, with
// no Taylor expansion. Shares nothing with the forward map beyond the
// definition of the background potential.

#include "eit/geometry.hpp"
#include "eit/kernels/gradient_product.hpp"

#include <vector>

namespace eit::oracle {

enum class QuadratureScheme {
    /// Affine map to the unit disk; Gauss-Legendre in radius, trapezoid in angle.
    PolarGaussTrapezoid,
};

struct QuadratureSpec {
    QuadratureScheme scheme = QuadratureScheme::PolarGaussTrapezoid;
    int points_per_axis = 64;
    double target_rel_tol = 1e-8;
};

/// Throws ConfigError unless points_per_axis >= 8 and target_rel_tol is in (0, 1e-3].
void validate(const QuadratureSpec& spec);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

[[nodiscard]] GaussRule gauss_legendre(int n);

/// Integral of grad U0 . grad U0 over the ellipse for electrodes at phi+
/// and phi-. Resolution doubles from spec.points_per_axis until two successive
/// results agree to spec.target_rel_tol; throws NumericalError otherwise.
[[nodiscard]] double quadrature_voltage(const EllipseParams& t, double phi_plus, double phi_minus,
                                        const QuadratureSpec& spec = {},
                                        kernels::SimdLevel level = kernels::detect_simd_level());

/// Single fixed-resolution evaluation with n radial and n angular nodes.
[[nodiscard]] double ellipse_quadrature(const EllipseParams& t, const kernels::Dipole& drive,
                                        const kernels::Dipole& measure, int n, kernels::SimdLevel level);

} // namespace eit::oracle

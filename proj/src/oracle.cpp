#include "eit/oracle.hpp"

#include "eit/errors.hpp"

#include <cmath>
#include <sstream>

namespace eit::oracle {
namespace {

constexpr int kMaxPointsPerAxis = 2048;

} // namespace

void validate(const QuadratureSpec& spec) {
    if (spec.points_per_axis < 8) throw ConfigError("quadrature points_per_axis must be >= 8");
    if (!(spec.target_rel_tol > 0.0 && spec.target_rel_tol <= 1e-3))
        throw ConfigError("quadrature target_rel_tol must lie in (0, 1e-3]");
}

GaussRule gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from Chebyshev-like initial guesses; roots are
    // symmetric so only half are computed.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

double ellipse_quadrature(const EllipseParams& t, const kernels::Dipole& drive, const kernels::Dipole& measure,
                          int n, kernels::SimdLevel level) {
    const double a1 = t.semi_axis_major();
    const double a2 = t.semi_axis_minor();
    const double c = std::cos(t.orientation), s = std::sin(t.orientation);
    const GaussRule rule = gauss_legendre(n);

    const std::size_t count = static_cast<std::size_t>(n) * n;
    std::vector<double> xs(count), ys(count), ws(count);
    const double dtheta = kTwoPi / n;
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        const double rho = 0.5 * (rule.nodes[i] + 1.0);
        // dA = a1 a2 rho drho dtheta; the factor 1/2 maps [-1, 1] to [0, 1]
        const double w_radial = 0.5 * rule.weights[i] * rho * a1 * a2 * dtheta;
        for (int j = 0; j < n; ++j, ++k) {
            const double theta = (j + 0.5) * dtheta;
            const double major = a1 * rho * std::cos(theta);
            const double minor = a2 * rho * std::sin(theta);
            xs[k] = t.center_x + major * c - minor * s;
            ys[k] = t.center_y + major * s + minor * c;
            ws[k] = w_radial;
        }
    }
    return kernels::weighted_gradient_product(xs, ys, ws, drive, measure, level);
}

double quadrature_voltage(const EllipseParams& t, double phi_plus, double phi_minus, const QuadratureSpec& spec,
                          kernels::SimdLevel level) {
    validate(spec);
    validate(t);
    if (periodic_distance(phi_plus, phi_minus, kTwoPi) < 1e-12)
        throw DomainError("source and sink electrodes coincide");

    const auto dipole = kernels::Dipole::from_angles(phi_plus, phi_minus);
    int n = spec.points_per_axis;
    double previous = ellipse_quadrature(t, dipole, dipole, n, level);
    while (2 * n <= kMaxPointsPerAxis) {
        n *= 2;
        const double current = ellipse_quadrature(t, dipole, dipole, n, level);
        if (std::abs(current - previous) <= spec.target_rel_tol * std::abs(current)) return current;
        previous = current;
    }
    std::ostringstream os;
    os << "quadrature did not reach relative tolerance " << spec.target_rel_tol << " with " << kMaxPointsPerAxis
       << " points per axis";
    throw NumericalError(os.str());
}

} // namespace eit::oracle

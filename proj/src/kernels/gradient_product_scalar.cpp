#include "eit/kernels/gradient_product.hpp"

namespace eit::kernels::scalar {
namespace {

// grad log(|p - a+|^2 / |p - a-|^2) = 2 (p - a+)/|p - a+|^2 - 2 (p - a-)/|p - a-|^2
inline void dipole_gradient(double x, double y, const Dipole& d, double& gx, double& gy) {
    const double xp = x - d.plus_x, yp = y - d.plus_y;
    const double xm = x - d.minus_x, ym = y - d.minus_y;
    const double sp = 2.0 / (xp * xp + yp * yp);
    const double sm = 2.0 / (xm * xm + ym * ym);
    gx = xp * sp - xm * sm;
    gy = yp * sp - ym * sm;
}

inline double point_value(double x, double y, const Dipole& drive, const Dipole& measure) {
    double ux, uy, wx, wy;
    dipole_gradient(x, y, drive, ux, uy);
    dipole_gradient(x, y, measure, wx, wy);
    return ux * wx + uy * wy;
}

} // namespace

void gradient_product(const double* x, const double* y, std::size_t n, const Dipole& drive, const Dipole& measure,
                      double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = point_value(x[i], y[i], drive, measure);
}

double weighted_gradient_product(const double* x, const double* y, const double* w, std::size_t n,
                                 const Dipole& drive, const Dipole& measure) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += w[i] * point_value(x[i], y[i], drive, measure);
    return sum;
}

} // namespace eit::kernels::scalar

#include "eit/forward_map.hpp"

#include "eit/errors.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace eit {
namespace {

using Complex = std::complex<double>;

constexpr double kElectrodeExclusion = 1e-12;

void check_point(double x, double y, double phi_plus, double phi_minus) {
    if (!(x * x + y * y <= 1.0)) {
        std::ostringstream os;
        os << "point (" << x << ", " << y << ") lies outside the closed unit disk";
        throw DomainError(os.str());
    }
    if (periodic_distance(phi_plus, phi_minus, kTwoPi) < kElectrodeExclusion)
        throw DomainError("source and sink electrodes coincide");
    for (double phi : {phi_plus, phi_minus}) {
        if (std::hypot(x - std::cos(phi), y - std::sin(phi)) < kElectrodeExclusion) {
            std::ostringstream os;
            os << "point (" << x << ", " << y << ") coincides with the electrode at angle " << phi;
            throw DomainError(os.str());
        }
    }
}

// U0 is the real part of H(z) = 2 log(z - e+) - 2 log(z - e-), so grad U0
// corresponds to the conjugate of G = H' and P = |G|^2. Every partial
// derivative of P follows from G and its complex derivatives:
//   d^j_x d^k_y G = i^k G^(j+k),
//   G^(n)(z) = 2 (-1)^n n! [(z - e+)^-(n+1) - (z - e-)^-(n+1)].
KernelJet jet_from_points(Complex z, Complex e_plus, Complex e_minus) {
    const Complex ip = 1.0 / (z - e_plus);
    const Complex im = 1.0 / (z - e_minus);

    std::array<Complex, 4> g;  // G, G', G'', G'''
    Complex pp = ip, pm = im;
    double coeff = 2.0;
    for (int n = 0; n < 4; ++n) {
        g[n] = coeff * (pp - pm);
        pp *= ip;
        pm *= im;
        coeff *= -(n + 1);
    }

    static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

    // d^a_x d^b_y (G conj(G)) by the Leibniz rule.
    auto partial = [&](int a, int b) {
        Complex sum = 0.0;
        for (int j = 0; j <= a; ++j)
            for (int k = 0; k <= b; ++k) {
                const Complex left = ipow[k] * g[j + k];
                const Complex right = std::conj(ipow[b - k] * g[a - j + b - k]);
                sum += binom[a][j] * binom[b][k] * left * right;
            }
        return sum.real();
    };

    KernelJet jet;
    jet.value = std::norm(g[0]);
    jet.grad = {partial(1, 0), partial(0, 1)};
    jet.hess = {partial(2, 0), partial(1, 1), partial(0, 2)};
    jet.third = {partial(3, 0), partial(2, 1), partial(1, 2), partial(0, 3)};
    return jet;
}

Complex on_circle(double phi) { return std::polar(1.0, phi); }

struct PairResponse {
    double value;
    std::array<double, kNumParams> grad;
};

// Quadratic form w' S w for S = [[sxx, sxy], [sxy, syy]].
inline double quad_form(double sxx, double sxy, double syy, double wx, double wy) {
    return sxx * wx * wx + 2.0 * sxy * wx * wy + syy * wy * wy;
}

PairResponse pair_response(const EllipseParams& t, Complex e_plus, Complex e_minus) {
    const KernelJet jet = jet_from_points({t.center_x, t.center_y}, e_plus, e_minus);

    const double area = t.area;
    const double r = t.aspect_ratio;
    const double c = std::cos(t.orientation);
    const double s = std::sin(t.orientation);
    const double scale = area * area / (2.0 * kPi);

    const auto [pxx, pxy, pyy] = jet.hess;
    const auto [pxxx, pxxy, pxyy, pyyy] = jet.third;

    // u = (c, s) is the major-axis direction, v = (-s, c) the minor one.
    const double q_major = quad_form(pxx, pxy, pyy, c, s);
    const double q_minor = quad_form(pxx, pxy, pyy, -s, c);
    const double shape = r * q_major + q_minor / r;

    PairResponse out;
    out.value = area * jet.value + scale * shape;

    const double dx_shape = r * quad_form(pxxx, pxxy, pxyy, c, s) + quad_form(pxxx, pxxy, pxyy, -s, c) / r;
    const double dy_shape = r * quad_form(pxxy, pxyy, pyyy, c, s) + quad_form(pxxy, pxyy, pyyy, -s, c) / r;
    const double cross = -pxx * c * s + pxy * (c * c - s * s) + pyy * c * s;  // u'Hv

    out.grad[kCenterX] = area * jet.grad[0] + scale * dx_shape;
    out.grad[kCenterY] = area * jet.grad[1] + scale * dy_shape;
    out.grad[kArea] = jet.value + area / kPi * shape;
    out.grad[kAspect] = scale * (q_major - q_minor / (r * r));
    out.grad[kOrientation] = scale * 2.0 * (r - 1.0 / r) * cross;
    return out;
}

void check_pair(double phi_plus, double phi_minus) {
    if (!std::isfinite(phi_plus) || !std::isfinite(phi_minus))
        throw DomainError("electrode angles must be finite");
    if (periodic_distance(phi_plus, phi_minus, kTwoPi) < kElectrodeExclusion)
        throw DomainError("source and sink electrodes coincide");
}

} // namespace

double background_potential(double x, double y, double phi_plus, double phi_minus) {
    check_point(x, y, phi_plus, phi_minus);
    const double dxp = x - std::cos(phi_plus), dyp = y - std::sin(phi_plus);
    const double dxm = x - std::cos(phi_minus), dym = y - std::sin(phi_minus);
    return std::log((dxp * dxp + dyp * dyp) / (dxm * dxm + dym * dym));
}

KernelJet kernel_and_derivatives(double x, double y, double phi_plus, double phi_minus) {
    check_point(x, y, phi_plus, phi_minus);
    return jet_from_points({x, y}, on_circle(phi_plus), on_circle(phi_minus));
}

double linearized_voltage(const EllipseParams& t, double phi_plus, double phi_minus) {
    validate(t);
    check_pair(phi_plus, phi_minus);
    return pair_response(t, on_circle(phi_plus), on_circle(phi_minus)).value;
}

ForwardEvaluation evaluate_unchecked(const EllipseParams& t, const ElectrodeConfig& cfg) {
    std::array<Complex, kNumElectrodes> e;
    for (std::size_t i = 0; i < kNumElectrodes; ++i) e[i] = on_circle(cfg.phi[i]);

    ForwardEvaluation out;
    for (std::size_t m = 0; m < kNumMeasurements; ++m) {
        const auto [i, j] = kPairs[m];
        const PairResponse resp = pair_response(t, e[i], e[j]);
        out.values(m) = resp.value;
        for (std::size_t k = 0; k < kNumParams; ++k) out.jacobian(m, k) = resp.grad[k];
    }
    return out;
}

MeasurementVector forward_map(const EllipseParams& t, const ElectrodeConfig& cfg) {
    validate(t);
    validate(cfg);
    const ForwardEvaluation ev = evaluate_unchecked(t, cfg);
    MeasurementVector mv;
    for (std::size_t m = 0; m < kNumMeasurements; ++m) mv.values[m] = ev.values(m);
    return mv;
}

Jacobian jacobian(const EllipseParams& t, const ElectrodeConfig& cfg) {
    validate(t);
    validate(cfg);
    return evaluate_unchecked(t, cfg).jacobian;
}

} // namespace eit

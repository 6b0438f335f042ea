#include "eit/errors.hpp"
#include "eit/forward_map.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace eit;

namespace {

// Computed by tools/reference_values.py (sympy, 30 digits).
constexpr double kU0Reference = -1.56184414766334377801302142256;
constexpr double kP0Reference = 15.6419240778997106939839431589;
constexpr std::array<double, 6> kUniformReference = {
    0.4460128510305129535280022, 0.6068127258076131101714410, 0.7117187891108056486427661,
    0.06016356903384523549851588, 0.2918642266212470859942073, 0.1129434293608062803912638,
};

Jacobian fd_jacobian(const EllipseParams& t, const ElectrodeConfig& cfg) {
    Jacobian j;
    const ParamVector base = t.to_array();
    for (std::size_t k = 0; k < kNumParams; ++k) {
        const double h = 1e-6 * std::max(1.0, std::abs(base[k]));
        ParamVector p = base, m = base;
        p[k] += h;
        m[k] -= h;
        const MeasurementVector fp = forward_map(EllipseParams::from_array(p), cfg);
        const MeasurementVector fm = forward_map(EllipseParams::from_array(m), cfg);
        for (std::size_t i = 0; i < kNumMeasurements; ++i) j(i, k) = (fp.values[i] - fm.values[i]) / (2.0 * h);
    }
    return j;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(BackgroundPotential, VanishesAtOrigin) {
    EXPECT_EQ(background_potential(0.0, 0.0, 0.3, 2.0), 0.0);
    EXPECT_NEAR(background_potential(0.0, 0.0, 1.0, 5.0), 0.0, 1e-15);
}

TEST(BackgroundPotential, SwapNegates) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.6, 0.6), a(0.0, kTwoPi);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng), p = a(rng), m = a(rng);
        EXPECT_NEAR(background_potential(x, y, p, m), -background_potential(x, y, m, p), 1e-15);
    }
}

TEST(BackgroundPotential, HighPrecisionReference) {
    EXPECT_LT(rel(background_potential(0.452, -0.165, 0.0, kPi / 2), kU0Reference), 1e-14);
}

TEST(BackgroundPotential, DomainErrors) {
    EXPECT_THROW((void)background_potential(1.0, 0.0, 0.0, 1.0), DomainError);  // on an electrode
    EXPECT_THROW((void)background_potential(0.8, 0.8, 0.0, 1.0), DomainError);  // outside the disk
    EXPECT_THROW((void)background_potential(0.1, 0.1, 1.0, 1.0), DomainError);  // coincident electrodes
    EXPECT_THROW((void)kernel_and_derivatives(0.0, 1.0, 0.0, kPi / 2), DomainError);
}

TEST(Kernel, ValueMatchesReferenceAndIsNonNegative) {
    EXPECT_LT(rel(kernel_and_derivatives(0.452, -0.165, 0.0, kPi / 2).value, kP0Reference), 1e-14);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.9, 0.9), a(0.0, kTwoPi);
    for (int i = 0; i < 500; ++i) {
        const double x = u(rng), y = u(rng);
        if (x * x + y * y > 0.81) continue;
        EXPECT_GE(kernel_and_derivatives(x, y, a(rng), a(rng)).value, 0.0);
    }
}

TEST(Kernel, Reciprocity) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-0.6, 0.6), a(0.0, kTwoPi);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng), p = a(rng), m = a(rng);
        const KernelJet j1 = kernel_and_derivatives(x, y, p, m);
        const KernelJet j2 = kernel_and_derivatives(x, y, m, p);
        EXPECT_EQ(j1.value, j2.value);
        for (int k = 0; k < 3; ++k) EXPECT_EQ(j1.hess[k], j2.hess[k]);
    }
}

TEST(Kernel, DerivativesMatchFiniteDifferences) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.85, 0.85), a(0.0, kTwoPi);
    const double h = 1e-6;
    int checked = 0;
    while (checked < 100) {
        const double x = u(rng), y = u(rng);
        if (x * x + y * y > 0.85 * 0.85) continue;
        const double p = a(rng), m = a(rng);
        if (periodic_distance(p, m, kTwoPi) < kMinElectrodeGap) continue;
        ++checked;
        const KernelJet j = kernel_and_derivatives(x, y, p, m);
        const KernelJet xp = kernel_and_derivatives(x + h, y, p, m), xm = kernel_and_derivatives(x - h, y, p, m);
        const KernelJet yp = kernel_and_derivatives(x, y + h, p, m), ym = kernel_and_derivatives(x, y - h, p, m);

        const double gx = (xp.value - xm.value) / (2 * h), gy = (yp.value - ym.value) / (2 * h);
        const double gnorm = std::hypot(j.grad[0], j.grad[1]);
        EXPECT_LT(std::hypot(gx - j.grad[0], gy - j.grad[1]) / gnorm, 1e-6) << x << ' ' << y;

        // Second and third derivatives: one central difference of the next lower order.
        const double hxx = (xp.grad[0] - xm.grad[0]) / (2 * h);
        const double hxy = (yp.grad[0] - ym.grad[0]) / (2 * h);
        const double hyy = (yp.grad[1] - ym.grad[1]) / (2 * h);
        const double hnorm = std::sqrt(j.hess[0] * j.hess[0] + 2 * j.hess[1] * j.hess[1] + j.hess[2] * j.hess[2]);
        const double herr = std::sqrt((hxx - j.hess[0]) * (hxx - j.hess[0]) + 2 * (hxy - j.hess[1]) * (hxy - j.hess[1]) +
                                      (hyy - j.hess[2]) * (hyy - j.hess[2]));
        EXPECT_LT(herr / hnorm, 1e-6);

        const std::array<double, 4> t_fd = {(xp.hess[0] - xm.hess[0]) / (2 * h), (yp.hess[0] - ym.hess[0]) / (2 * h),
                                            (yp.hess[1] - ym.hess[1]) / (2 * h), (yp.hess[2] - ym.hess[2]) / (2 * h)};
        double terr = 0.0, tnorm = 0.0;
        for (int k = 0; k < 4; ++k) {
            terr += (t_fd[k] - j.third[k]) * (t_fd[k] - j.third[k]);
            tnorm += j.third[k] * j.third[k];
        }
        EXPECT_LT(std::sqrt(terr / tnorm), 1e-6);
    }
}

TEST(LinearizedVoltage, HighPrecisionReference) {
    const ElectrodeConfig cfg = ElectrodeConfig::uniform();
    const MeasurementVector f = forward_map(reference_ellipse(), cfg);
    for (std::size_t i = 0; i < kNumMeasurements; ++i) EXPECT_LT(rel(f.values[i], kUniformReference[i]), 1e-13) << i;
    EXPECT_EQ(linearized_voltage(reference_ellipse(), 0.0, kPi / 2), f.values[0]);
    EXPECT_EQ(f.epsilon, 0.0);
}

TEST(LinearizedVoltage, SmallAreaLimit) {
    EllipseParams t = reference_ellipse();
    const double p = kernel_and_derivatives(t.center_x, t.center_y, 0.0, kPi / 2).value;
    double prev = std::numeric_limits<double>::infinity();
    for (double a : {1e-3, 1e-5, 1e-7}) {
        t.area = a;
        const double err = std::abs(linearized_voltage(t, 0.0, kPi / 2) / a - p);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev / p, 1e-6);
}

TEST(LinearizedVoltage, RejectsInadmissibleEllipse) {
    EllipseParams t = reference_ellipse();
    t.area = 0.5;
    EXPECT_THROW((void)linearized_voltage(t, 0.0, 1.0), DomainError);
    EXPECT_THROW((void)forward_map(reference_ellipse(), ElectrodeConfig{{0.0, 0.01, 2.0, 4.0}}), DomainError);
}

TEST(ForwardMap, AxisSwapEquivalence) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 1000; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        EXPECT_LE(fixtures::max_abs_diff(forward_map(t, cfg), forward_map(swap_axes(t), cfg)), 1e-12);
    }
}

TEST(ForwardMap, OrientationPeriodicity) {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 1000; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        EllipseParams s = t;
        s.orientation += kPi;
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        EXPECT_LE(fixtures::max_abs_diff(forward_map(t, cfg), forward_map(s, cfg)), 1e-12);
    }
}

TEST(ForwardMap, RotationalCovariance) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> a(0.0, kTwoPi);
    for (int i = 0; i < 1000; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        const double w = a(rng);
        EllipseParams s = t;
        s.center_x = std::cos(w) * t.center_x - std::sin(w) * t.center_y;
        s.center_y = std::sin(w) * t.center_x + std::cos(w) * t.center_y;
        s.orientation = t.orientation + w;
        EXPECT_LE(fixtures::max_abs_diff(forward_map(t, cfg), forward_map(s, cfg.rotated(w))), 1e-12);
    }
}

TEST(ForwardMap, ReciprocityOfEachPair) {
    std::mt19937_64 rng(24);
    for (int i = 0; i < 1000; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        for (const auto& [a, b] : kPairs)
            EXPECT_LE(std::abs(linearized_voltage(t, cfg.phi[a], cfg.phi[b]) - linearized_voltage(t, cfg.phi[b], cfg.phi[a])),
                      1e-12);
    }
}

TEST(ForwardMap, ElectrodePermutationKeepsMultiset) {
    std::mt19937_64 rng(25);
    for (int i = 0; i < 1000; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        ElectrodeConfig perm = cfg;
        std::shuffle(perm.phi.begin(), perm.phi.end(), rng);
        auto sorted_abs = [](MeasurementVector m) {
            for (double& v : m.values) v = std::abs(v);
            std::sort(m.values.begin(), m.values.end());
            return m;
        };
        EXPECT_LE(fixtures::max_abs_diff(sorted_abs(forward_map(t, cfg)), sorted_abs(forward_map(t, perm))), 1e-12);
    }
}

TEST(ForwardMap, VanishesWithArea) {
    EllipseParams t = reference_ellipse();
    t.area = 1e-14;
    for (double v : forward_map(t, ElectrodeConfig::uniform()).values) EXPECT_LT(std::abs(v), 1e-12);
}

TEST(Jacobian, MatchesFiniteDifferences) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const EllipseParams t = fixtures::random_ellipse(rng);
        const ElectrodeConfig cfg = fixtures::random_electrodes(rng);
        const Jacobian j = jacobian(t, cfg);
        EXPECT_LT((j - fd_jacobian(t, cfg)).norm() / j.norm(), 1e-5);
    }
}

TEST(Jacobian, AgreesWithCombinedEvaluation) {
    const ElectrodeConfig cfg = ElectrodeConfig::uniform();
    const ForwardEvaluation e = evaluate_unchecked(reference_ellipse(), cfg);
    EXPECT_EQ((e.jacobian - jacobian(reference_ellipse(), cfg)).norm(), 0.0);
    const MeasurementVector f = forward_map(reference_ellipse(), cfg);
    for (std::size_t i = 0; i < kNumMeasurements; ++i) EXPECT_EQ(e.values(i), f.values[i]);
}

TEST(Jacobian, AreaColumnTendsToKernel) {
    EllipseParams t = reference_ellipse();
    t.area = 1e-9;
    const ElectrodeConfig cfg = ElectrodeConfig::uniform();
    const Jacobian j = jacobian(t, cfg);
    for (std::size_t i = 0; i < kNumMeasurements; ++i) {
        const auto [a, b] = kPairs[i];
        const double p = kernel_and_derivatives(t.center_x, t.center_y, cfg.phi[a], cfg.phi[b]).value;
        EXPECT_LT(rel(j(i, kArea), p), 1e-6);
    }
}

TEST(Jacobian, ShapeColumnsScaleWithAreaSquared) {
    EllipseParams t = reference_ellipse();
    const ElectrodeConfig cfg = ElectrodeConfig::uniform();
    for (std::size_t col : {std::size_t(kAspect), std::size_t(kOrientation)}) {
        std::vector<double> logs, norms;
        for (double a : {1e-2, 1e-3, 1e-4}) {
            t.area = a;
            logs.push_back(std::log(a));
            norms.push_back(std::log(jacobian(t, cfg).col(col).norm()));
        }
        const double slope = (norms.back() - norms.front()) / (logs.back() - logs.front());
        EXPECT_NEAR(slope, 2.0, 0.1) << col;
    }
}

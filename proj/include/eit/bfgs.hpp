#pragma once

// Dense BFGS on a fixed-size unconstrained problem with Armijo backtracking.
//
// The objective may refuse a point (return std::nullopt), which the line
// search treats as an infinite value. Callers can supply a curvature model
// used as the initial Hessian and after every reset.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace eit::optim {

template <int N>
struct BfgsOptions {
    int max_iterations = 500;
    /// Converged when ||grad|| <= gradient_tolerance * (1 + |f|).
    double gradient_tolerance = 1e-9;
    double armijo = 1e-4;
    int max_backtracks = 60;
    /// Near the optimum, decreases in f drop below its rounding level; a step
    /// is then also accepted under the approximate Wolfe conditions with
    /// f(x + a d) <= f(x) + approx_wolfe_slack * |f(x)|.
    double approx_wolfe_slack = 1e-12;
};

template <int N>
struct BfgsResult {
    Eigen::Matrix<double, N, 1> x;
    double value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

template <int N>
class Bfgs {
public:
    using Vector = Eigen::Matrix<double, N, 1>;
    using Matrix = Eigen::Matrix<double, N, N>;
    /// Returns f(x) and writes grad f(x), or nullopt outside the domain.
    using Objective = std::function<std::optional<double>(const Vector&, Vector&)>;
    /// Symmetric positive definite approximation of the Hessian at x.
    using CurvatureModel = std::function<Matrix(const Vector&)>;

    Bfgs(Objective f, BfgsOptions<N> options, CurvatureModel curvature = {})
        : f_(std::move(f)), options_(options), curvature_(std::move(curvature)) {}

    BfgsResult<N> minimize(const Vector& x0) const {
        BfgsResult<N> res;
        res.x = x0;
        Vector grad;
        const auto f0 = f_(x0, grad);
        if (!f0) {
            res.value = std::numeric_limits<double>::infinity();
            return res;
        }
        double fx = *f0;
        Matrix inv_hessian = initial_inverse(res.x);
        bool just_reset = true;

        for (int iter = 0; iter < options_.max_iterations; ++iter) {
            res.value = fx;
            res.gradient_norm = grad.norm();
            if (res.gradient_norm <= options_.gradient_tolerance * (1.0 + std::abs(fx))) {
                res.converged = true;
                return res;
            }

            Vector dir = -inv_hessian * grad;
            double slope = grad.dot(dir);
            if (!(slope < 0.0)) {
                inv_hessian = initial_inverse(res.x);
                dir = -inv_hessian * grad;
                slope = grad.dot(dir);
                just_reset = true;
                if (!(slope < 0.0)) {
                    dir = -grad;
                    slope = -grad.squaredNorm();
                }
            }

            double step = 1.0;
            Vector x_new, g_new;
            std::optional<double> f_new;
            bool accepted = false;
            for (int k = 0; k < options_.max_backtracks; ++k, step *= 0.5) {
                x_new = res.x + step * dir;
                f_new = f_(x_new, g_new);
                if (!f_new) continue;
                if (*f_new <= fx + options_.armijo * step * slope || approx_wolfe(fx, slope, *f_new, g_new.dot(dir))) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                if (just_reset) break;  // no progress even along the model direction
                inv_hessian = initial_inverse(res.x);
                just_reset = true;
                continue;
            }

            const Vector s = x_new - res.x;
            const Vector y = g_new - grad;
            const double sy = s.dot(y);
            if (sy > 1e-14 * s.norm() * y.norm()) {
                const double rho = 1.0 / sy;
                const Matrix left = Matrix::Identity() - rho * s * y.transpose();
                inv_hessian = left * inv_hessian * left.transpose() + rho * s * s.transpose();
            }
            res.x = x_new;
            fx = *f_new;
            grad = g_new;
            just_reset = false;
            ++res.iterations;
        }
        res.value = fx;
        res.gradient_norm = grad.norm();
        res.converged = res.gradient_norm <= options_.gradient_tolerance * (1.0 + std::abs(fx));
        return res;
    }

private:
    // Hager-Zhang: (2 delta - 1) phi'(0) >= phi'(a) >= sigma phi'(0), delta = 0.1, sigma = 0.9.
    bool approx_wolfe(double f0, double slope0, double f_new, double slope_new) const {
        return f_new <= f0 + options_.approx_wolfe_slack * std::abs(f0) && slope_new >= 0.9 * slope0 &&
               slope_new <= -0.8 * slope0;
    }

    Matrix initial_inverse(const Vector& x) const {
        if (!curvature_) return Matrix::Identity();
        const Matrix b = curvature_(x);
        Eigen::LDLT<Matrix> ldlt(b);
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return Matrix::Identity();
        return ldlt.solve(Matrix::Identity());
    }

    Objective f_;
    BfgsOptions<N> options_;
    CurvatureModel curvature_;
};

} // namespace eit::optim

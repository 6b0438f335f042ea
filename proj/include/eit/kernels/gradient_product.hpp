#pragma once

// Batched evaluation of grad U0 . grad W for two current dipoles on the unit
// circle. This is the integrand of the exact linearized measurement and the
// inner loop of the quadrature oracle.
//
// Two implementations: a scalar reference and an AVX2 variant. The AVX2
// pointwise kernel uses the same operation sequence as the scalar one and is
// bit-identical to it; the weighted sum differs only in summation order.

#include <cstddef>
#include <span>

namespace eit::kernels {

enum class SimdLevel { Scalar, Avx2 };

[[nodiscard]] const char* to_string(SimdLevel level);

/// Best level supported by the running CPU and the build. Setting the
/// environment variable EIT_SIMD=scalar forces the reference path.
[[nodiscard]] SimdLevel detect_simd_level();

/// True if `level` can run on this machine.
[[nodiscard]] bool is_supported(SimdLevel level);

/// Source (+) and sink (-) positions of a unit current dipole.
struct Dipole {
    double plus_x, plus_y;
    double minus_x, minus_y;

    [[nodiscard]] static Dipole from_angles(double phi_plus, double phi_minus);
};

/// out[i] = grad U(x[i], y[i]) . grad W(x[i], y[i]), where U and W are the
/// log-ratio potentials of `drive` and `measure`. All spans have equal size.
void gradient_product(std::span<const double> x, std::span<const double> y, const Dipole& drive,
                      const Dipole& measure, std::span<double> out, SimdLevel level);

/// sum_i w[i] * grad U(x[i], y[i]) . grad W(x[i], y[i]).
[[nodiscard]] double weighted_gradient_product(std::span<const double> x, std::span<const double> y,
                                               std::span<const double> w, const Dipole& drive,
                                               const Dipole& measure, SimdLevel level);

namespace scalar {
void gradient_product(const double* x, const double* y, std::size_t n, const Dipole& drive, const Dipole& measure,
                      double* out);
double weighted_gradient_product(const double* x, const double* y, const double* w, std::size_t n,
                                 const Dipole& drive, const Dipole& measure);
} // namespace scalar

namespace avx2 {
/// False when the build has no AVX2 translation unit.
bool compiled();
void gradient_product(const double* x, const double* y, std::size_t n, const Dipole& drive, const Dipole& measure,
                      double* out);
double weighted_gradient_product(const double* x, const double* y, const double* w, std::size_t n,
                                 const Dipole& drive, const Dipole& measure);
} // namespace avx2

} // namespace eit::kernels

#include "eit/kernels/gradient_product.hpp"

#include <cassert>
#include <cmath>
#include <cstdlib>
#include <string_view>

namespace eit::kernels {

const char* to_string(SimdLevel level) {
    switch (level) {
    case SimdLevel::Scalar: return "scalar";
    case SimdLevel::Avx2: return "avx2";
    }
    return "unknown";
}

bool is_supported(SimdLevel level) {
    switch (level) {
    case SimdLevel::Scalar: return true;
    case SimdLevel::Avx2:
#if defined(__x86_64__) || defined(__i386__)
        return avx2::compiled() && __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

SimdLevel detect_simd_level() {
    if (const char* env = std::getenv("EIT_SIMD"); env && std::string_view(env) == "scalar")
        return SimdLevel::Scalar;
    return is_supported(SimdLevel::Avx2) ? SimdLevel::Avx2 : SimdLevel::Scalar;
}

Dipole Dipole::from_angles(double phi_plus, double phi_minus) {
    return {std::cos(phi_plus), std::sin(phi_plus), std::cos(phi_minus), std::sin(phi_minus)};
}

void gradient_product(std::span<const double> x, std::span<const double> y, const Dipole& drive,
                      const Dipole& measure, std::span<double> out, SimdLevel level) {
    assert(x.size() == y.size() && x.size() == out.size());
    if (level == SimdLevel::Avx2 && is_supported(level))
        avx2::gradient_product(x.data(), y.data(), x.size(), drive, measure, out.data());
    else
        scalar::gradient_product(x.data(), y.data(), x.size(), drive, measure, out.data());
}

double weighted_gradient_product(std::span<const double> x, std::span<const double> y, std::span<const double> w,
                                 const Dipole& drive, const Dipole& measure, SimdLevel level) {
    assert(x.size() == y.size() && x.size() == w.size());
    if (level == SimdLevel::Avx2 && is_supported(level))
        return avx2::weighted_gradient_product(x.data(), y.data(), w.data(), x.size(), drive, measure);
    return scalar::weighted_gradient_product(x.data(), y.data(), w.data(), x.size(), drive, measure);
}

} // namespace eit::kernels

// Compiled with -mavx2 only when EIT_ENABLE_AVX2 is set; entry points are
// reached through the runtime dispatcher after a CPU check.

#include "eit/kernels/gradient_product.hpp"

#if defined(EIT_HAVE_AVX2_TU)

#include <immintrin.h>

namespace eit::kernels::avx2 {
namespace {

struct DipoleLanes {
    __m256d plus_x, plus_y, minus_x, minus_y;
    explicit DipoleLanes(const Dipole& d)
        : plus_x(_mm256_set1_pd(d.plus_x)), plus_y(_mm256_set1_pd(d.plus_y)), minus_x(_mm256_set1_pd(d.minus_x)),
          minus_y(_mm256_set1_pd(d.minus_y)) {}
};

// Same operation order as the scalar kernel, no FMA contraction.
inline void dipole_gradient(__m256d x, __m256d y, const DipoleLanes& d, __m256d& gx, __m256d& gy) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d xp = _mm256_sub_pd(x, d.plus_x), yp = _mm256_sub_pd(y, d.plus_y);
    const __m256d xm = _mm256_sub_pd(x, d.minus_x), ym = _mm256_sub_pd(y, d.minus_y);
    const __m256d sp = _mm256_div_pd(two, _mm256_add_pd(_mm256_mul_pd(xp, xp), _mm256_mul_pd(yp, yp)));
    const __m256d sm = _mm256_div_pd(two, _mm256_add_pd(_mm256_mul_pd(xm, xm), _mm256_mul_pd(ym, ym)));
    gx = _mm256_sub_pd(_mm256_mul_pd(xp, sp), _mm256_mul_pd(xm, sm));
    gy = _mm256_sub_pd(_mm256_mul_pd(yp, sp), _mm256_mul_pd(ym, sm));
}

inline __m256d point_value(__m256d x, __m256d y, const DipoleLanes& drive, const DipoleLanes& measure) {
    __m256d ux, uy, wx, wy;
    dipole_gradient(x, y, drive, ux, uy);
    dipole_gradient(x, y, measure, wx, wy);
    return _mm256_add_pd(_mm256_mul_pd(ux, wx), _mm256_mul_pd(uy, wy));
}

} // namespace

bool compiled() { return true; }

void gradient_product(const double* x, const double* y, std::size_t n, const Dipole& drive, const Dipole& measure,
                      double* out) {
    const DipoleLanes dl(drive), ml(measure);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = point_value(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), dl, ml);
        _mm256_storeu_pd(out + i, v);
    }
    scalar::gradient_product(x + i, y + i, n - i, drive, measure, out + i);
}

double weighted_gradient_product(const double* x, const double* y, const double* w, std::size_t n,
                                 const Dipole& drive, const Dipole& measure) {
    const DipoleLanes dl(drive), ml(measure);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = point_value(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), dl, ml);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(w + i), v));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    const double tail = scalar::weighted_gradient_product(x + i, y + i, w + i, n - i, drive, measure);
    return ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3])) + tail;
}

} // namespace eit::kernels::avx2

#else

namespace eit::kernels::avx2 {

bool compiled() { return false; }

void gradient_product(const double* x, const double* y, std::size_t n, const Dipole& drive, const Dipole& measure,
                      double* out) {
    scalar::gradient_product(x, y, n, drive, measure, out);
}

double weighted_gradient_product(const double* x, const double* y, const double* w, std::size_t n,
                                 const Dipole& drive, const Dipole& measure) {
    return scalar::weighted_gradient_product(x, y, w, n, drive, measure);
}

} // namespace eit::kernels::avx2

#endif

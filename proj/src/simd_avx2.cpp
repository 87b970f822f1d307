// AVX2+FMA variants of the arithmetic kernels. This translation unit is
// compiled with -mavx2 -mfma; entry points are taken only after a
// runtime cpuid check, so the rest of the binary stays generic.

#include "diracbands/simd.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace diracbands::simd {

namespace {

void daxpy_avx2(std::size_t n, double a, const double* x, double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void daxpy_prod_avx2(std::size_t n, double a, const double* x1, const double* x2,
                     double* y) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(x1 + i), _mm256_loadu_pd(x2 + i));
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(va, prod, vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x1[i] * x2[i];
}

// Two interleaved complex doubles per ymm register. With ar/ai
// broadcast, a*x = fmaddsub(ar, x, ai * swap(x)).
inline __m256d cmul_broadcast(__m256d var, __m256d vai, __m256d x) {
    const __m256d xs = _mm256_permute_pd(x, 0x5);
    return _mm256_fmaddsub_pd(var, x, _mm256_mul_pd(vai, xs));
}

void zaxpy_avx2(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const __m256d var = _mm256_set1_pd(a.real());
    const __m256d vai = _mm256_set1_pd(a.imag());
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_broadcast(var, vai, xv)));
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void zaxpy_conj_avx2(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const __m256d var = _mm256_set1_pd(a.real());
    const __m256d vai = _mm256_set1_pd(a.imag());
    const __m256d conj_mask = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    auto* yd = reinterpret_cast<double*>(y);
    const auto* xd = reinterpret_cast<const double*>(x);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        xv = _mm256_xor_pd(xv, conj_mask);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_broadcast(var, vai, xv)));
    }
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = -x[i].imag();
        y[i] += Complex(a.real() * xr - a.imag() * xi, a.real() * xi + a.imag() * xr);
    }
}

Complex zdotu_avx2(std::size_t n, const Complex* x, const Complex* y) {
    // Per complex the lanes of x*y are (xr*yr, xi*yi); with the odd lanes
    // negated their sum is the real part. The swapped product gives
    // (xr*yi, xi*yr) whose plain sum is the imaginary part.
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    const __m256d sign = _mm256_set_pd(-1.0, 1.0, -1.0, 1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        const __m256d ys = _mm256_permute_pd(yv, 0x5);
        acc_re = _mm256_fmadd_pd(xv, _mm256_mul_pd(yv, sign), acc_re);
        acc_im = _mm256_fmadd_pd(xv, ys, acc_im);
    }
    double re_lanes[4], im_lanes[4];
    _mm256_storeu_pd(re_lanes, acc_re);
    _mm256_storeu_pd(im_lanes, acc_im);
    double sr = re_lanes[0] + re_lanes[1] + re_lanes[2] + re_lanes[3];
    double si = im_lanes[0] + im_lanes[1] + im_lanes[2] + im_lanes[3];
    for (; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        sr += xr * yr - xi * yi;
        si += xr * yi + xi * yr;
    }
    return {sr, si};
}

void dist2_scaled_avx2(std::size_t n, const double* dx, const double* dy, double ex,
                       double ey, double scale, double* z) {
    const __m256d vex = _mm256_set1_pd(ex);
    const __m256d vey = _mm256_set1_pd(ey);
    const __m256d vs = _mm256_set1_pd(scale);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ux = _mm256_sub_pd(_mm256_loadu_pd(dx + i), vex);
        const __m256d uy = _mm256_sub_pd(_mm256_loadu_pd(dy + i), vey);
        const __m256d d2 = _mm256_fmadd_pd(ux, ux, _mm256_mul_pd(uy, uy));
        _mm256_storeu_pd(z + i, _mm256_mul_pd(vs, d2));
    }
    for (; i < n; ++i) {
        const double ux = dx[i] - ex, uy = dy[i] - ey;
        z[i] = scale * (ux * ux + uy * uy);
    }
}

void expint_step_avx2(std::size_t n, double invn, const double* emx, const double* x,
                      double* E) {
    const __m256d vinv = _mm256_set1_pd(invn);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ve = _mm256_loadu_pd(E + i);
        const __m256d num = _mm256_fnmadd_pd(_mm256_loadu_pd(x + i), ve,
                                             _mm256_loadu_pd(emx + i));
        _mm256_storeu_pd(E + i, _mm256_mul_pd(num, vinv));
    }
    for (; i < n; ++i) E[i] = (emx[i] - x[i] * E[i]) * invn;
}

constexpr Kernels kAvx2 = {
    "avx2",       daxpy_avx2,        daxpy_prod_avx2,   zaxpy_avx2,
    zaxpy_conj_avx2, zdotu_avx2,     dist2_scaled_avx2, expint_step_avx2,
};

}  // namespace

const Kernels* avx2_kernels() {
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2;
    return nullptr;
}

}  // namespace diracbands::simd

#endif  // __x86_64__

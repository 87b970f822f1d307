// NEON variants for aarch64. float64x2_t holds one complex double.

#include "diracbands/simd.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace diracbands::simd {

namespace {

void daxpy_neon(std::size_t n, double a, const double* x, double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void daxpy_prod_neon(std::size_t n, double a, const double* x1, const double* x2,
                     double* y) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t prod = vmulq_f64(vld1q_f64(x1 + i), vld1q_f64(x2 + i));
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, prod));
    }
    for (; i < n; ++i) y[i] += a * x1[i] * x2[i];
}

// (ar + i ai)(xr + i xi): re/im via lane swap and a sign flip on lane 0.
inline float64x2_t cmul(double ar, double ai, float64x2_t x) {
    const float64x2_t xs = vextq_f64(x, x, 1);          // (xi, xr)
    float64x2_t t = vmulq_n_f64(xs, ai);                // (ai*xi, ai*xr)
    t = vsetq_lane_f64(-vgetq_lane_f64(t, 0), t, 0);    // (-ai*xi, ai*xr)
    return vfmaq_n_f64(t, x, ar);                       // (ar*xr - ai*xi, ar*xi + ai*xr)
}

void zaxpy_neon(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        const float64x2_t yv = vld1q_f64(yd + 2 * i);
        vst1q_f64(yd + 2 * i, vaddq_f64(yv, cmul(a.real(), a.imag(), xv)));
    }
}

void zaxpy_conj_neon(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const auto* xd = reinterpret_cast<const double*>(x);
    auto* yd = reinterpret_cast<double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
        float64x2_t xv = vld1q_f64(xd + 2 * i);
        xv = vsetq_lane_f64(-vgetq_lane_f64(xv, 1), xv, 1);
        const float64x2_t yv = vld1q_f64(yd + 2 * i);
        vst1q_f64(yd + 2 * i, vaddq_f64(yv, cmul(a.real(), a.imag(), xv)));
    }
}

Complex zdotu_neon(std::size_t n, const Complex* x, const Complex* y) {
    float64x2_t acc = vdupq_n_f64(0.0);
    const auto* xd = reinterpret_cast<const double*>(x);
    const auto* yd = reinterpret_cast<const double*>(y);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t xv = vld1q_f64(xd + 2 * i);
        const float64x2_t yv = vld1q_f64(yd + 2 * i);
        acc = vaddq_f64(acc, cmul(vgetq_lane_f64(xv, 0), vgetq_lane_f64(xv, 1), yv));
    }
    return {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
}

void dist2_scaled_neon(std::size_t n, const double* dx, const double* dy, double ex,
                       double ey, double scale, double* z) {
    const float64x2_t vex = vdupq_n_f64(ex);
    const float64x2_t vey = vdupq_n_f64(ey);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t ux = vsubq_f64(vld1q_f64(dx + i), vex);
        const float64x2_t uy = vsubq_f64(vld1q_f64(dy + i), vey);
        const float64x2_t d2 = vfmaq_f64(vmulq_f64(uy, uy), ux, ux);
        vst1q_f64(z + i, vmulq_n_f64(d2, scale));
    }
    for (; i < n; ++i) {
        const double ux = dx[i] - ex, uy = dy[i] - ey;
        z[i] = scale * (ux * ux + uy * uy);
    }
}

void expint_step_neon(std::size_t n, double invn, const double* emx, const double* x,
                      double* E) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t num =
            vfmsq_f64(vld1q_f64(emx + i), vld1q_f64(x + i), vld1q_f64(E + i));
        vst1q_f64(E + i, vmulq_n_f64(num, invn));
    }
    for (; i < n; ++i) E[i] = (emx[i] - x[i] * E[i]) * invn;
}

constexpr Kernels kNeon = {
    "neon",       daxpy_neon,        daxpy_prod_neon,   zaxpy_neon,
    zaxpy_conj_neon, zdotu_neon,     dist2_scaled_neon, expint_step_neon,
};

}  // namespace

const Kernels* neon_kernels() { return &kNeon; }

}  // namespace diracbands::simd

#endif  // __aarch64__

#include "diracbands/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace diracbands::simd {

#if defined(__x86_64__)
const Kernels* avx2_kernels();  // defined in simd_avx2.cpp
#elif defined(__aarch64__)
const Kernels* neon_kernels();  // defined in simd_neon.cpp
#endif

namespace {

void daxpy_scalar(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void daxpy_prod_scalar(std::size_t n, double a, const double* x1, const double* x2,
                       double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x1[i] * x2[i];
}

void zaxpy_scalar(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] += Complex(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

void zaxpy_conj_scalar(std::size_t n, Complex a, const Complex* x, Complex* y) {
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = -x[i].imag();
        y[i] += Complex(ar * xr - ai * xi, ar * xi + ai * xr);
    }
}

Complex zdotu_scalar(std::size_t n, const Complex* x, const Complex* y) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        sr += xr * yr - xi * yi;
        si += xr * yi + xi * yr;
    }
    return {sr, si};
}

void dist2_scaled_scalar(std::size_t n, const double* dx, const double* dy, double ex,
                         double ey, double scale, double* z) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ux = dx[i] - ex;
        const double uy = dy[i] - ey;
        z[i] = scale * (ux * ux + uy * uy);
    }
}

void expint_step_scalar(std::size_t n, double invn, const double* emx, const double* x,
                        double* E) {
    for (std::size_t i = 0; i < n; ++i) E[i] = (emx[i] - x[i] * E[i]) * invn;
}

constexpr Kernels kScalar = {
    "scalar",     daxpy_scalar,        daxpy_prod_scalar,  zaxpy_scalar,
    zaxpy_conj_scalar, zdotu_scalar,   dist2_scaled_scalar, expint_step_scalar,
};

const Kernels* select() {
    const char* force = std::getenv("DIRACBANDS_SIMD");
#if defined(__x86_64__)
    const Kernels* wide = avx2_kernels();
#elif defined(__aarch64__)
    const Kernels* wide = neon_kernels();
#else
    const Kernels* wide = nullptr;
#endif
    if (force) {
        if (std::strcmp(force, "scalar") == 0) return &kScalar;
        if (wide && std::strcmp(force, wide->name) == 0) return wide;
        return &kScalar;
    }
    return wide ? wide : &kScalar;
}

}  // namespace

const Kernels& scalar_kernels() { return kScalar; }

const Kernels& active() {
    static const Kernels* selected = select();
    return *selected;
}

}  // namespace diracbands::simd

#pragma once

#include <complex>
#include <cstddef>

namespace diracbands::simd {

using Complex = std::complex<double>;

/// Data-parallel primitives behind the lattice-sum and assembly inner
/// loops. Scalar reference implementations always exist; wider variants
/// are selected at runtime and must agree with the scalar ones to
/// rounding (equivalence-tested).
struct Kernels {
    const char* name;

    /// y[i] += a * x[i] (real)
    void (*daxpy)(std::size_t n, double a, const double* x, double* y);

    /// y[i] += a * x1[i] * x2[i]
    void (*daxpy_prod)(std::size_t n, double a, const double* x1, const double* x2,
                       double* y);

    /// y[i] += a * x[i] (complex, interleaved)
    void (*zaxpy)(std::size_t n, Complex a, const Complex* x, Complex* y);

    /// y[i] += a * conj(x[i])
    void (*zaxpy_conj)(std::size_t n, Complex a, const Complex* x, Complex* y);

    /// sum_i x[i] * y[i] (unconjugated)
    Complex (*zdotu)(std::size_t n, const Complex* x, const Complex* y);

    /// z[i] = scale * ((dx[i] - ex)^2 + (dy[i] - ey)^2)
    void (*dist2_scaled)(std::size_t n, const double* dx, const double* dy, double ex,
                         double ey, double scale, double* z);

    /// E[i] = (emx[i] - x[i] * E[i]) * invn  — one upward recurrence step
    /// of the exponential-integral chain, in place.
    void (*expint_step)(std::size_t n, double invn, const double* emx, const double* x,
                        double* E);
};

const Kernels& scalar_kernels();

/// Kernels selected for this process: AVX2+FMA or NEON when available,
/// scalar otherwise. DIRACBANDS_SIMD=scalar|avx2|neon overrides.
const Kernels& active();

}  // namespace diracbands::simd

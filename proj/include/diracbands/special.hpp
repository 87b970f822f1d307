#pragma once

#include <complex>
#include <vector>

namespace diracbands {

using Complex = std::complex<double>;

inline constexpr double kEulerGamma = 0.5772156649015328606;

/// gamma0 = E0 - ln 2 - i pi / 2, the constant in the small-argument
/// expansion of the free-space kernel.
Complex h0_gamma0();

/// Coefficients of the small-argument expansion of H0:
/// b1[p-1] = (-1)^p / (2^{2p} (p!)^2), b2[p-1] = (gamma0 - H_p) b1[p-1].
struct H0SeriesCoeffs {
    Complex gamma0;
    std::vector<double> b1;
    std::vector<Complex> b2;
    int order = 0;
};

H0SeriesCoeffs h0_series_coeffs(int order);

/// Free-space kernel -(i/4) H0^(1)(omega |x|), evaluated through J0/Y0.
Complex h0_free(double omega, double r);

/// Small-argument series for the same kernel, truncated at coeffs.order.
/// Valid for 0 < omega*r < 1.5.
Complex h0_series(double omega, double r, const H0SeriesCoeffs& coeffs);

/// Radial derivative d/dr of h0_free: (i omega / 4) H1^(1)(omega r).
Complex h0_free_radial_derivative(double omega, double r);

/// Exponential integral E1(x) for real x > 0.
double expint_e1(double x);

/// E_n(x) for n = 1..nmax (1-based: out[n-1] = E_n(x)), via upward
/// recurrence E_{n+1} = (e^{-x} - x E_n) / n.
void expint_chain(double x, int nmax, double* out);

}  // namespace diracbands

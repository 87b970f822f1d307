#include "diracbands/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace diracbands {

namespace {
constexpr double kPi = std::numbers::pi;
}

Complex h0_gamma0() {
    return Complex(kEulerGamma - std::log(2.0), -kPi / 2.0);
}

H0SeriesCoeffs h0_series_coeffs(int order) {
    if (order < 1) throw std::invalid_argument("h0_series_coeffs: order >= 1 required");
    H0SeriesCoeffs c;
    c.gamma0 = h0_gamma0();
    c.order = order;
    c.b1.resize(order);
    c.b2.resize(order);
    double b = 1.0;       // (-1)^p / (2^{2p} (p!)^2)
    double harmonic = 0.0;
    for (int p = 1; p <= order; ++p) {
        b *= -1.0 / (4.0 * double(p) * double(p));
        harmonic += 1.0 / double(p);
        c.b1[p - 1] = b;
        c.b2[p - 1] = (c.gamma0 - harmonic) * b;
    }
    return c;
}

Complex h0_free(double omega, double r) {
    if (!(r > 0.0)) throw std::domain_error("h0_free: r must be positive");
    const double u = omega * r;
    const double j0 = std::cyl_bessel_j(0.0, u);
    const double y0 = std::cyl_neumann(0.0, u);
    // -(i/4)(J0 + i Y0)
    return Complex(0.25 * y0, -0.25 * j0);
}

Complex h0_series(double omega, double r, const H0SeriesCoeffs& coeffs) {
    if (!(r > 0.0)) throw std::domain_error("h0_series: r must be positive");
    const double u = omega * r;
    if (!(u > 0.0) || u >= 1.5) throw std::domain_error("h0_series: need 0 < omega*r < 1.5");
    const double lnu = std::log(u);
    Complex sum = std::log(r) + std::log(omega) + coeffs.gamma0;
    double u2p = 1.0;
    for (int p = 1; p <= coeffs.order; ++p) {
        u2p *= u * u;
        sum += (coeffs.b1[p - 1] * lnu + coeffs.b2[p - 1]) * u2p;
    }
    return sum / (2.0 * kPi);
}

Complex h0_free_radial_derivative(double omega, double r) {
    if (!(r > 0.0)) throw std::domain_error("h0_free_radial_derivative: r must be positive");
    const double u = omega * r;
    const double j1 = std::cyl_bessel_j(1.0, u);
    const double y1 = std::cyl_neumann(1.0, u);
    // d/dr [-(i/4) H0^(1)(omega r)] = (i omega/4) H1^(1)(omega r)
    return Complex(-0.25 * omega * y1, 0.25 * omega * j1);
}

namespace {

double e1_series(double x) {
    // ascending series, x <= 1
    double sum = -kEulerGamma - std::log(x);
    double term = 1.0;
    for (int n = 1; n <= 60; ++n) {
        term *= -x / double(n);
        const double add = -term / double(n);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

double e1_continued_fraction(double x) {
    // modified Lentz on E1(x) = e^{-x} / (x + 1/(1 + 1/(x + 2/(1 + 2/(x + ...)))))
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i <= 200; ++i) {
        const double an = -double(i) * double(i);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x);
}

}  // namespace

double expint_e1(double x) {
    if (!(x > 0.0)) throw std::domain_error("expint_e1: x must be positive");
    if (x > 700.0) return 0.0;
    return x <= 1.0 ? e1_series(x) : e1_continued_fraction(x);
}

void expint_chain(double x, int nmax, double* out) {
    if (nmax < 1) return;
    out[0] = expint_e1(x);
    const double emx = std::exp(-x);
    for (int n = 1; n < nmax; ++n) out[n] = (emx - x * out[n - 1]) / double(n);
}

}  // namespace diracbands

// Independent reference computations used as test oracles. Everything
// here deliberately avoids the production code paths it is used to
// check: quadrature instead of closed forms, brute-force enumeration
// instead of ring walks, ascending series instead of library calls.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "diracbands/greens.hpp"
#include "diracbands/operator.hpp"

namespace oracles {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kEuler = 0.5772156649015328606;

// ---------------------------------------------------------------- quadrature

inline Complex simpson_rec(const std::function<Complex(double)>& f, double a, double b,
                           Complex fa, Complex fm, Complex fb, Complex whole, double tol,
                           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const Complex flm = f(lm), frm = f(rm);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex total = left + right;
    if (depth <= 0 || std::abs(total - whole) < 15.0 * tol) {
        return total + (total - whole) / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline Complex adaptive_simpson(const std::function<Complex(double)>& f, double a,
                                double b, double tol, int depth = 48) {
    const Complex fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Fourier moment of the periodic log chord:
//   Int_0^{2pi} ln(2 |sin(t/2)|) e^{-int} dt
// handled with analytic endpoint splitting of the ln t singularity.
inline Complex log_chord_fourier(int n, double tol = 1e-13) {
    const double delta = 0.05;
    auto fmid = [n](double t) {
        return Complex(std::log(2.0 * std::sin(0.5 * t))) *
               Complex(std::cos(n * t), -std::sin(n * t));
    };
    Complex total = adaptive_simpson(fmid, delta, kTwoPi - delta, tol);

    // near t = 0: ln(2 sin(t/2)) = ln t + g(t), g smooth with g(0) = 0
    auto reg0 = [n](double t) {
        const double g = (t == 0.0) ? 0.0 : std::log(2.0 * std::sin(0.5 * t) / t);
        return Complex(g) * Complex(std::cos(n * t), -std::sin(n * t));
    };
    total += adaptive_simpson(reg0, 0.0, delta, tol);
    // Int_0^d ln t e^{-int} dt by parts: [ (t ln t - t) e^{-int} ] + in Int (t ln t - t) e^{-int}
    auto parts0 = [n](double t) {
        const double v = (t == 0.0) ? 0.0 : t * std::log(t) - t;
        return Complex(v) * Complex(std::cos(n * t), -std::sin(n * t));
    };
    const Complex e0{std::cos(n * delta), -std::sin(n * delta)};
    total += Complex(delta * std::log(delta) - delta) * e0 +
             Complex(0.0, double(n)) * adaptive_simpson(parts0, 0.0, delta, tol);

    // near t = 2pi, substitute t = 2pi - s
    auto regp = [n](double s) {
        const double g = (s == 0.0) ? 0.0 : std::log(2.0 * std::sin(0.5 * s) / s);
        return Complex(g) * Complex(std::cos(n * s), std::sin(n * s));
    };
    total += adaptive_simpson(regp, 0.0, delta, tol);
    auto partsp = [n](double s) {
        const double v = (s == 0.0) ? 0.0 : s * std::log(s) - s;
        return Complex(v) * Complex(std::cos(n * s), std::sin(n * s));
    };
    const Complex ep{std::cos(n * delta), std::sin(n * delta)};
    total += Complex(delta * std::log(delta) - delta) * ep -
             Complex(0.0, double(n)) * adaptive_simpson(partsp, 0.0, delta, tol);
    return total;
}

// Periodic integrands with weak t^2 ln t endpoint behaviour: integrate the
// middle plainly and the two endpoint pieces under t = s^3, which turns the
// residual log singularity into s^8 ln s.
inline Complex integrate_weak_endpoints(const std::function<Complex(double)>& f,
                                        double tol) {
    const double delta = 0.3;
    Complex total = adaptive_simpson(f, delta, kTwoPi - delta, tol);
    const double sd = std::cbrt(delta);
    auto left = [&](double s) { return f(s * s * s) * Complex(3.0 * s * s); };
    auto right = [&](double s) { return f(kTwoPi - s * s * s) * Complex(3.0 * s * s); };
    total += adaptive_simpson(left, 0.0, sd, tol);
    total += adaptive_simpson(right, 0.0, sd, tol);
    return total;
}

// Adaptive-quadrature oracle for the Fourier diagonal of the free-space
// single-layer kernel: the log part goes through log_chord_fourier, the
// remainder through endpoint-desingularized adaptive Simpson.
inline Complex h0_diag_quadrature(double omega, double eps, int n, double tol = 1e-13) {
    auto smooth = [&](double t) {
        const double chord = 2.0 * std::abs(std::sin(0.5 * t));
        Complex val;
        if (chord < 1e-14) {
            val = (std::log(eps) + std::log(omega) + diracbands::h0_gamma0()) / kTwoPi;
        } else {
            val = diracbands::h0_free(omega, eps * chord) -
                  Complex(std::log(chord)) / kTwoPi;
        }
        return val * Complex(std::cos(n * t), -std::sin(n * t));
    };
    return integrate_weak_endpoints(smooth, tol) + log_chord_fourier(n) / kTwoPi;
}

// Same for the double-layer kernel (continuous; endpoint weak singularity).
inline Complex dl_h0_diag_quadrature(double omega, double eps, int n,
                                     double tol = 1e-13) {
    auto f = [&](double t) {
        const double chord = 2.0 * std::abs(std::sin(0.5 * t));
        Complex val;
        if (chord < 1e-12) {
            val = 1.0 / (4.0 * kPi * eps);  // Laplace double-layer constant
        } else {
            val = (1.0 - std::cos(t)) / chord *
                  diracbands::h0_free_radial_derivative(omega, eps * chord);
        }
        return val * Complex(std::cos(n * t), -std::sin(n * t));
    };
    return integrate_weak_endpoints(f, tol);
}

// ------------------------------------------------------------ special series

inline double bessel_j0_series(double x) {
    double sum = 0.0, term = 1.0;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) term *= -0.25 * x * x / (double(k) * double(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// Y0 = (2/pi) [ (ln(x/2)+gamma) J0 + sum_{k>=1} (-1)^{k+1} H_k (x/2)^{2k}/(k!)^2 ]
inline double bessel_y0_series(double x) {
    double acc = 0.0, t = 1.0, hk = 0.0;
    for (int k = 1; k < 40; ++k) {
        t *= 0.25 * x * x / (double(k) * double(k));
        hk += 1.0 / double(k);
        acc += ((k % 2) ? 1.0 : -1.0) * hk * t;
        if (t < 1e-18) break;
    }
    return 2.0 / kPi * ((std::log(0.5 * x) + kEuler) * bessel_j0_series(x) + acc);
}

// -------------------------------------------------------- lattice enumeration

// Brute-force |kappa + l1 k1 + l2 k2| values, deduplicated.
inline std::vector<double> brute_force_singular(double a, double kx, double ky,
                                                double omega_max, int L = 10) {
    const double u = kTwoPi / a;
    const double k1x = u / std::sqrt(3.0), k1y = u;
    const double k2x = u / std::sqrt(3.0), k2y = -u;
    std::vector<double> vals;
    for (int l1 = -L; l1 <= L; ++l1)
        for (int l2 = -L; l2 <= L; ++l2) {
            const double qx = kx + l1 * k1x + l2 * k2x;
            const double qy = ky + l1 * k1y + l2 * k2y;
            const double w = std::hypot(qx, qy);
            if (w <= omega_max) vals.push_back(w);
        }
    std::sort(vals.begin(), vals.end());
    std::vector<double> out;
    for (double w : vals)
        if (out.empty() || w - out.back() > 1e-9 * std::max(w, u)) out.push_back(w);
    return out;
}

// ------------------------------------------------------- reference assembly

// Direct assembly: sample the smooth kernel G - H0 pointwise with
// ewald_green and take the plain double DFT. Slow but organizationally
// independent of the production table/rank-one path.
inline Eigen::MatrixXcd assemble_reference(diracbands::BoundaryCondition bc,
                                           const diracbands::LatticeSpec& spec,
                                           diracbands::BlochVector kappa, double omega,
                                           int N, int Q) {
    using namespace diracbands;
    const double eps = spec.epsilon;
    EwaldParams params;
    std::vector<std::vector<Complex>> K(Q, std::vector<Complex>(Q));
    for (int j = 0; j < Q; ++j) {
        const double tj = kTwoPi * j / Q;
        const Vec2 rj{std::cos(tj), std::sin(tj)};
        for (int k = 0; k < Q; ++k) {
            const double tk = kTwoPi * k / Q;
            const Vec2 rk{std::cos(tk), std::sin(tk)};
            const Vec2 d{eps * (rj.x - rk.x), eps * (rj.y - rk.y)};
            if (bc == BoundaryCondition::Dirichlet) {
                if (j == k) {
                    K[j][k] = green_minus_h0_at_zero(spec, kappa, omega, params);
                } else {
                    const GreensValue g = ewald_green(spec, kappa, omega, d, params);
                    K[j][k] = g.value - h0_free(omega, norm(d));
                }
            } else {
                if (j == k) {
                    K[j][k] = 0.0;  // -nu . grad of the even smooth part vanishes
                } else {
                    const GreensValue g = ewald_green(spec, kappa, omega, d, params);
                    const Complex h0r = h0_free_radial_derivative(omega, norm(d));
                    const Complex gx = g.grad_x[0] - h0r * d.x / norm(d);
                    const Complex gy = g.grad_x[1] - h0r * d.y / norm(d);
                    K[j][k] = -(rk.x * gx + rk.y * gy);
                }
            }
        }
    }
    // the even smooth Neumann kernel needs its true diagonal: -r(t).v0 with
    // v0 the gradient of (G - H0) at 0; obtain it by central differences
    if (bc == diracbands::BoundaryCondition::Neumann) {
        const double h = 1e-6 * spec.a;
        auto gm = [&](diracbands::Vec2 x) {
            const diracbands::GreensValue g = ewald_green(spec, kappa, omega, x, params);
            return g.value - diracbands::h0_free(omega, diracbands::norm(x));
        };
        const Complex vx = (gm({h, 0}) - gm({-h, 0})) / (2.0 * h);
        const Complex vy = (gm({0, h}) - gm({0, -h})) / (2.0 * h);
        for (int j = 0; j < Q; ++j) {
            const double tj = kTwoPi * j / Q;
            K[j][j] = -(std::cos(tj) * vx + std::sin(tj) * vy);
        }
    }

    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * N + 1, 2 * N + 1);
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            Complex sum{};
            for (int j = 0; j < Q; ++j)
                for (int k = 0; k < Q; ++k) {
                    const double ph = (-m * j + n * k) * kTwoPi / Q;
                    sum += K[j][k] * Complex(std::cos(ph), std::sin(ph));
                }
            A(m + N, n + N) = sum * kTwoPi / (double(Q) * double(Q));
        }
    using diracbands::dl_h0_diagonal;
    using diracbands::h0_diagonal;
    for (int n = -N; n <= N; ++n) {
        if (bc == diracbands::BoundaryCondition::Dirichlet) {
            A(n + N, n + N) += h0_diagonal(omega, eps, n);
        } else {
            A(n + N, n + N) = 0.5 + eps * (A(n + N, n + N) + dl_h0_diagonal(omega, eps, n));
        }
    }
    if (bc == diracbands::BoundaryCondition::Neumann) {
        // off-diagonal entries also need the eps scaling applied once
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n)
                if (m != n) A(m + N, n + N) *= eps;
    }
    return A;
}

// --------------------------------------------------------------- FD helpers

inline Complex central_diff(const std::function<Complex(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline Complex second_diff(const std::function<Complex(double)>& f, double x, double h) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

inline std::mt19937& rng() {
    static std::mt19937 gen(20240817u);
    return gen;
}

inline double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    return dist(rng());
}

}  // namespace oracles

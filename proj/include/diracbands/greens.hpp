#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "diracbands/lattice.hpp"
#include "diracbands/special.hpp"

namespace diracbands {

/// Parameters of the Ewald split. The spectral sum carries a Gaussian
/// factor exp((w^2-|k+q|^2)/(4 eta^2)); the spatial sum is a series in
/// exponential integrals E_{p+1}(eta^2 |x-e|^2).
struct EwaldParams {
    double eta = 0.0;          // splitting parameter; 0 selects sqrt(pi/|Y|)
    int spectral_radius = 24;  // cap on reciprocal-lattice rings
    int spatial_radius = 16;   // cap on direct-lattice rings
    int series_order = 64;     // cap on the spatial series truncation P
    double target_tol = 1e-12;
};

struct GreensValue {
    Complex value;
    Complex grad_x[2];
    double est_error = 0.0;
};

struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularFrequency : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct OnSourcePoint : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double ewald_default_eta(const LatticeSpec& spec);

/// Quasi-periodic Green's function G(kappa, omega; x) and its gradient.
GreensValue ewald_green(const LatticeSpec& spec, BlochVector kappa, double omega, Vec2 x,
                        const EwaldParams& params = {});

/// (1/|Y|) sum over shell members of e^{i(kappa+q).x} / (w^2 - |kappa+q|^2).
Complex resonant_sum(const LatticeSpec& spec, BlochVector kappa, double omega, Vec2 x,
                     const ResonantShell& shell);

struct ResonantGradients {
    Complex d_k1, d_k2, d_omega;
};

/// Exact partials of resonant_sum with respect to the two components of
/// kappa and to omega.
ResonantGradients resonant_gradients(const LatticeSpec& spec, BlochVector kappa_star,
                                     double omega, Vec2 x, const ResonantShell& shell);

/// G - H0 - G_shell; finite as x -> 0 (analytic limit below 1e-8 a).
Complex smooth_remainder(const LatticeSpec& spec, BlochVector kappa_star, double omega,
                         Vec2 x, const ResonantShell& shell,
                         const EwaldParams& params = {});

/// Analytic limit of G(kappa, omega; x) - H0(omega; x) as x -> 0.
Complex green_minus_h0_at_zero(const LatticeSpec& spec, BlochVector kappa, double omega,
                               const EwaldParams& params = {});

// --- shared Ewald machinery (used by the boundary-operator assembly) ---

/// Number of terms of the spatial series needed at this omega/eta/tol,
/// capped at `cap`.
int ewald_series_length(double omega, double eta, double tol, int cap);

/// Spatial-series coefficients c_p = (omega/(2 eta))^{2p} / p!, p = 0..P.
std::vector<double> ewald_series_coeffs(double omega, double eta, int P);

/// All k = kappa + q whose Gaussian-damped spectral weight can exceed
/// `tol` for any frequency up to omega_max.
std::vector<Vec2> spectral_modes(const LatticeSpec& spec, BlochVector kappa,
                                 double omega_max, double eta, double tol);

/// All nonzero lattice sites e whose spatial-series contribution can
/// exceed `tol` for field points within `reach` of the origin.
std::vector<Vec2> spatial_sites(const LatticeSpec& spec, double eta, double tol,
                                double reach);

inline double spectral_weight(double omega, double k2, double eta, double cell_area) {
    const double d = omega * omega - k2;
    return std::exp(d / (4.0 * eta * eta)) / (d * cell_area);
}

}  // namespace diracbands

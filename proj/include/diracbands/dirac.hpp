#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "diracbands/spectral.hpp"

namespace diracbands {

/// Band groups hosting a K-point crossing: bands 1/2 near the first
/// singular frequency, 4/5 near the second, 10/11 near the third.
enum class BandGroup { Band1, Band45, Band1011 };

BandGroup band_group_from_pair(int lo, int hi);

struct AsymptoticCoefficients {
    double alpha = 0.0;             // (2 pi / (3|Y|)) (2 pi / a)^2
    double kappa_star_norm = 0.0;   // |K| = (2/3)(2 pi / a)
    double cell_area = 0.0;
    Complex gamma0;
    std::function<Complex(double)> beta1;  // (ln w + gamma0)/2pi + Gtilde(K, w; 0)
};

AsymptoticCoefficients asymptotic_coefficients(const LatticeSpec& spec,
                                               const EwaldParams& params = {});

/// Closed-form leading-order eigenvalues near the group's singular
/// frequency, unnormalized. Labels: "omega1*", "omega1**", "omega2*",
/// "omega3*".
std::vector<std::pair<std::string, double>> asymptotic_eigenvalues(
    const LatticeSpec& spec, BoundaryCondition bc, BandGroup group);

/// Cone slope d omega / d|delta kappa| of the two branches at the Dirac
/// point (dimensionless in normalized display units).
double theory_slopes(const LatticeSpec& spec, BandGroup group, double omega_star);

struct DiracReport {
    BoundaryCondition bc;
    std::pair<int, int> band_pair;
    double omega_star_numeric = 0.0;     // normalized by a/(2 pi)
    double omega_star_asymptotic = 0.0;  // normalized
    int multiplicity = 0;
    double slope_fit_plus = 0.0;
    double slope_fit_minus = 0.0;
    double slope_theory = 0.0;
    double fit_residual = 0.0;       // rms, normalized frequency units
    int directions_tested = 0;
    double isotropy_spread = 0.0;    // max-min fitted |slope| across directions
    double quadratic_ratio = 0.0;    // max |c| r_max / |s| over directions
    double vertex_gap = 0.0;         // |w0+ - w0-| of the fitted branches at r=0
};

/// Locate the degenerate pair root at the K vertex for the given group
/// via the mod-3 Schur characteristic equation of class j.
double pair_root_at_k(const BoundaryOperator& op, BandGroup group, int j = 1);

/// Probe the two branches around the Dirac point and fit
/// w_pm(r) = w* +- s r + c r^2 per direction.
DiracReport cone_fit(BoundaryCondition bc, const LatticeSpec& spec,
                     std::pair<int, int> band_pair, FourierTruncation trunc,
                     const std::vector<double>& radii_normalized, int directions,
                     const EwaldParams& params = {});

struct Table1Row {
    double epsilon;
    double numeric;     // normalized
    double asymptotic;  // normalized
    double error;       // |numeric - asymptotic|
};

std::vector<Table1Row> table1_compare(double a, const std::vector<double>& eps_list,
                                      FourierTruncation trunc,
                                      const EwaldParams& params = {});

struct EigenfunctionReport {
    double dominant_fraction_j1 = 0.0;   // |c_{+1}|^2 / ||c||^2 of the j=+1 vector
    double dominant_fraction_jm1 = 0.0;  // |c_{-1}|^2 / ||c||^2 of the j=-1 vector
    double conjugation_residual = 0.0;   // ||A c'|| / ||c'|| for the mapped vector
    bool classes_found = false;
};

EigenfunctionReport eigenfunction_check(const BoundaryOperator& op,
                                        const CharacteristicRoot& root);

}  // namespace diracbands

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "diracbands/operator.hpp"

namespace diracbands {

struct SweepConfig {
    double omega_lo = 0.0;
    double omega_hi = 0.0;
    int coarse_per_unit = 160;       // grid points per unit normalized frequency
    double singular_exclusion = 1e-5;  // normalized radius excluded around each omega_bar
    double zone_halfwidth = 0.08;    // normalized; grid refined x10 near singular freqs
    double root_tol = 1e-10;         // normalized omega resolution
    double sv_threshold_rel = 1e-6;  // acceptance: sigma_min < rel * ||A||_2
};

struct DensityCoefficients {
    Eigen::VectorXcd c;  // indexed -N..N (offset by N)
    std::optional<int> residue_class;
};

struct CharacteristicRoot {
    double omega = 0.0;
    int multiplicity = 0;
    double residual = 0.0;  // sigma_min at the root
    std::vector<DensityCoefficients> nullspace;
};

/// Characteristic values in the window: determinant sign changes and
/// sigma_min minima located on an adaptive grid, refined to root_tol.
/// At the K/K' vertex detection runs per mod-3 subsystem so that the
/// degenerate pair is resolved.
std::vector<CharacteristicRoot> characteristic_sweep(const BoundaryOperator& op,
                                                     const SweepConfig& config);

std::vector<CharacteristicRoot> characteristic_sweep(BoundaryCondition bc,
                                                     const LatticeSpec& spec,
                                                     BlochVector kappa,
                                                     const SweepConfig& config,
                                                     FourierTruncation trunc,
                                                     const EwaldParams& params = {});

/// Scalar characteristic function of the residue class j at kappa = K:
/// f_j = a_{jj} - <Ahat_j^{-1} ahat_j, ahat_j>.
Complex schur_characteristic_full(const BoundaryOperator& op, int j, double omega);

/// Real value of f_j; for the Dirichlet operator the imaginary residue is
/// checked against 1e-10 |f_j|.
double schur_characteristic(const BoundaryOperator& op, int j, double omega);

/// Safeguarded bracketing (bisection/secant) for a continuous function
/// with a sign change on [lo, hi].
double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol);

/// Right-singular vectors with sigma below the absolute threshold,
/// orthonormal; residue classes tagged at the K/K' vertex.
std::vector<DensityCoefficients> nullspace(const OperatorMatrix& A, double threshold);

/// ||W^{-1/2} Ahat_j^{-1} W^{-1/2}||_2 with W = diag((1+n^2)^{1/2}) over
/// the j-subsystem with the center row/column removed.
double weighted_inverse_norm(const OperatorMatrix& A, int j);

/// Real part of the sign of det A (the determinant is real for both
/// boundary conditions up to rounding). Exposed for tests.
double det_sign(const Eigen::MatrixXcd& A);

}  // namespace diracbands

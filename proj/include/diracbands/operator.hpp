#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "diracbands/greens.hpp"
#include "diracbands/lattice.hpp"

namespace diracbands {

enum class BoundaryCondition { Dirichlet, Neumann };

struct FourierTruncation {
    int N = 12;            // retained modes -N..N
    int quad_points = 256; // uniform angular samples, >= 4N+4
};

/// Truncated Fourier-basis matrix of the boundary operator at one
/// (bc, kappa, omega). Entries are indexed by (m, n) in [-N..N]^2.
struct OperatorMatrix {
    BoundaryCondition bc;
    BlochVector kappa;
    double omega = 0.0;
    FourierTruncation trunc;
    Eigen::MatrixXcd entries;

    Complex at(int m, int n) const { return entries(m + trunc.N, n + trunc.N); }
    double norm_max() const { return entries.cwiseAbs().maxCoeff(); }
};

struct QuadratureUnresolved : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fourier-diagonal entry of the free-space single-layer kernel
/// H0(omega; eps(x-y)) on the unit circle: log part plus the convergent
/// power-series correction. Requires 0 < omega*epsilon < 1.5.
Complex h0_diagonal(double omega, double epsilon, int n, int order = 24);

/// Fourier-diagonal entry of the free-space double-layer kernel
/// -nu(y).grad H0(omega; eps(x-y)) on the unit circle (the 1/(4 pi eps)
/// constant plus a convergent series).
Complex dl_h0_diagonal(double omega, double epsilon, int n, int order = 24);

/// Per-(bc, kappa) assembly tables. Building the tables performs the
/// expensive lattice sums on the angular grid once; matrix(omega) then
/// costs a few rank-one updates, scaled table sums and one row of
/// free-space kernel samples.
class BoundaryOperator {
  public:
    BoundaryOperator(BoundaryCondition bc, const LatticeSpec& spec, BlochVector kappa,
                     FourierTruncation trunc, double omega_max,
                     const EwaldParams& params = {});
    ~BoundaryOperator();
    BoundaryOperator(BoundaryOperator&&) noexcept;
    BoundaryOperator& operator=(BoundaryOperator&&) noexcept;

    OperatorMatrix matrix(double omega) const;

    BoundaryCondition bc() const;
    const LatticeSpec& spec() const;
    BlochVector kappa() const;
    FourierTruncation truncation() const;
    double omega_max() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot assembly.
OperatorMatrix assemble(BoundaryCondition bc, const LatticeSpec& spec, BlochVector kappa,
                        double omega, FourierTruncation trunc,
                        const EwaldParams& params = {});

/// Indices {n in [-N..N] : (n - j) mod 3 == 0}, ascending.
std::vector<int> subsystem_indices(int N, int j);

/// Submatrix of A over the residue class j; valid only at kappa = K or K'.
Eigen::MatrixXcd subsystem_extract(const OperatorMatrix& A, int j);

struct SymmetryReport {
    std::optional<double> hermitian_violation;  // Dirichlet only
    double index_symmetry_violation = 0.0;      // (-1)^{m-n} pairing
    double mod3_violation = 0.0;                // relative to ||A||_max
    double norm_max = 0.0;
};

SymmetryReport symmetry_report(const OperatorMatrix& A);

}  // namespace diracbands

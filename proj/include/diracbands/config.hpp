#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "diracbands/greens.hpp"
#include "diracbands/operator.hpp"

namespace diracbands {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value configuration with [section] headers; every field has
/// a default so an empty file is valid.
struct RunConfig {
    // [lattice]
    double a = 1.0;
    double epsilon = 0.05;
    // [problem]
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    int n_bands = 12;
    double omega_max = 2.0;  // normalized by a/(2 pi)
    // [truncation]
    int n = 12;
    int quad_points = 256;
    // [ewald]
    EwaldParams ewald;
    // [sweep]
    int coarse_per_unit = 160;
    double singular_exclusion = 1e-5;
    double zone_halfwidth = 0.08;
    double root_tol = 1e-10;
    double sv_threshold = 1e-6;
    // [path]
    std::vector<std::string> path = {"M", "Gamma", "K", "M"};
    int samples_per_segment = 24;
    // [dirac]
    int band_lo = 1, band_hi = 2;
    std::vector<double> radii = {1e-3, 2e-3, 4e-3, 8e-3};
    int directions = 6;
    // [output]
    std::string format = "csv";
    std::string out_path;
    // runtime
    int jobs = 0;  // 0 = all cores
    bool raw = false;

    void validate() const;
};

RunConfig parse_config_file(const std::string& file);
RunConfig parse_config_text(const std::string& text);

/// Resolve a path token: a named symmetry point (Gamma, M, K, Kprime) or
/// an explicit "kx,ky" pair in normalized units (kappa * a / 2 pi).
BlochVector resolve_path_point(const LatticeSpec& spec, const std::string& token);

}  // namespace diracbands

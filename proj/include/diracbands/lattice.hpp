#pragma once

#include <utility>
#include <vector>

#include "diracbands/geometry.hpp"

namespace diracbands {

/// Bloch wave vector. Callers may reduce to the Brillouin zone but
/// reduction is not enforced.
struct BlochVector {
    Vec2 k;
};

/// Honeycomb lattice with one circular impenetrable obstacle of radius
/// `epsilon` centered in each fundamental cell.
struct LatticeSpec {
    double a = 1.0;        // lattice constant
    double epsilon = 0.0;  // obstacle radius
    Vec2 e1, e2;           // direct lattice basis
    Vec2 k1, k2;           // reciprocal basis, e_i . k_j = 2 pi delta_ij
    double cell_area = 0.0;
    Vec2 center;           // obstacle center (e1 + e2) / 2

    Vec2 direct(int l1, int l2) const { return double(l1) * e1 + double(l2) * e2; }
    Vec2 reciprocal(int l1, int l2) const { return double(l1) * k1 + double(l2) * k2; }
};

struct HighSymmetryPoints {
    BlochVector Gamma, M, K, Kprime;
};

/// Reciprocal vectors q with |kappa* + q| equal to a common singular
/// frequency. Members are kept with their integer coordinates, ordered
/// lexicographically by (l1, l2).
struct ResonantShell {
    double omega_bar = 0.0;
    std::vector<Vec2> members;
    std::vector<std::pair<int, int>> indices;
};

LatticeSpec build_lattice(double a, double epsilon);
HighSymmetryPoints high_symmetry_points(const LatticeSpec& spec);

/// All distinct |kappa + q| <= omega_max, ascending, deduplicated at
/// relative tolerance 1e-9.
std::vector<double> singular_frequencies(const LatticeSpec& spec, BlochVector kappa,
                                         double omega_max);

ResonantShell resonant_shell(const LatticeSpec& spec, BlochVector kappa_star,
                             double omega_bar);

/// Piecewise-linear path through the given points with a cumulative
/// arclength parameter; shared vertices appear once.
std::vector<std::pair<double, BlochVector>> brillouin_path(
    const std::vector<BlochVector>& points, int samples_per_segment);

}  // namespace diracbands

#include "diracbands/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace diracbands {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kShellTol = 1e-9;  // relative tolerance merging equal |kappa+q|
}  // namespace

LatticeSpec build_lattice(double a, double epsilon) {
    if (!(a > 0.0)) throw std::invalid_argument("build_lattice: a must be positive");
    if (!(epsilon > 0.0) || !(2.0 * epsilon < a))
        throw std::invalid_argument("build_lattice: need 0 < 2*epsilon < a");

    const double s3 = std::sqrt(3.0);
    LatticeSpec spec;
    spec.a = a;
    spec.epsilon = epsilon;
    spec.e1 = {a * s3 / 2.0, a / 2.0};
    spec.e2 = {a * s3 / 2.0, -a / 2.0};
    spec.k1 = {kTwoPi / a / s3, kTwoPi / a};
    spec.k2 = {kTwoPi / a / s3, -kTwoPi / a};
    spec.cell_area = std::abs(cross(spec.e1, spec.e2));
    spec.center = 0.5 * (spec.e1 + spec.e2);
    return spec;
}

HighSymmetryPoints high_symmetry_points(const LatticeSpec& spec) {
    const double u = kTwoPi / spec.a;
    HighSymmetryPoints pts;
    pts.Gamma = {{0.0, 0.0}};
    pts.M = {{u / std::sqrt(3.0), 0.0}};
    pts.K = {{u / std::sqrt(3.0), u / 3.0}};
    pts.Kprime = {{-pts.K.k.x, -pts.K.k.y}};
    return pts;
}

std::vector<double> singular_frequencies(const LatticeSpec& spec, BlochVector kappa,
                                         double omega_max) {
    if (!(omega_max > 0.0))
        throw std::invalid_argument("singular_frequencies: omega_max must be positive");

    // |kappa+q| grows at least linearly in max(|l_i|); the margin covers skew.
    const int L = static_cast<int>(std::ceil(omega_max * spec.a)) + 4;
    std::vector<double> values;
    for (int l1 = -L; l1 <= L; ++l1)
        for (int l2 = -L; l2 <= L; ++l2) {
            const double w = norm(kappa.k + spec.reciprocal(l1, l2));
            if (w <= omega_max) values.push_back(w);
        }
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double w : values) {
        if (out.empty() || w - out.back() > kShellTol * std::max(w, kTwoPi / spec.a))
            out.push_back(w);
    }
    return out;
}

ResonantShell resonant_shell(const LatticeSpec& spec, BlochVector kappa_star,
                             double omega_bar) {
    const int L = static_cast<int>(std::ceil((omega_bar + norm(kappa_star.k)) * spec.a)) + 4;
    ResonantShell shell;
    shell.omega_bar = omega_bar;
    for (int l1 = -L; l1 <= L; ++l1)
        for (int l2 = -L; l2 <= L; ++l2) {
            const Vec2 q = spec.reciprocal(l1, l2);
            const double w = norm(kappa_star.k + q);
            if (std::abs(w - omega_bar) < kShellTol * std::max(omega_bar, kTwoPi / spec.a)) {
                shell.members.push_back(q);
                shell.indices.emplace_back(l1, l2);
            }
        }
    if (shell.members.empty())
        throw std::invalid_argument("resonant_shell: omega_bar is not a singular frequency");
    // already lexicographic in (l1, l2) by construction of the loops
    return shell;
}

std::vector<std::pair<double, BlochVector>> brillouin_path(
    const std::vector<BlochVector>& points, int samples_per_segment) {
    if (points.size() < 2)
        throw std::invalid_argument("brillouin_path: need at least two points");
    if (samples_per_segment < 2)
        throw std::invalid_argument("brillouin_path: need at least two samples per segment");

    std::vector<std::pair<double, BlochVector>> path;
    double s = 0.0;
    path.push_back({0.0, points.front()});
    for (size_t seg = 0; seg + 1 < points.size(); ++seg) {
        const Vec2 p0 = points[seg].k;
        const Vec2 p1 = points[seg + 1].k;
        const double len = norm(p1 - p0);
        for (int i = 1; i < samples_per_segment; ++i) {
            const double t = double(i) / double(samples_per_segment - 1);
            path.push_back({s + t * len, BlochVector{p0 + t * (p1 - p0)}});
        }
        s += len;
    }
    return path;
}

}  // namespace diracbands

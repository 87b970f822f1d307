#include "diracbands/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace diracbands {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

double shell_omega_bar(const LatticeSpec& spec, BandGroup group) {
    const double ks = kTwoPi / spec.a * 2.0 / 3.0;  // |K|
    switch (group) {
        case BandGroup::Band1: return ks;
        case BandGroup::Band45: return 2.0 * ks;
        case BandGroup::Band1011: return std::sqrt(7.0) * ks;
    }
    throw std::logic_error("shell_omega_bar");
}

// omega-shift of the paired j = +-1 root to leading order (signed).
double pair_shift(const LatticeSpec& spec, BoundaryCondition bc, BandGroup group) {
    const AsymptoticCoefficients co = asymptotic_coefficients(spec);
    const double e2 = spec.epsilon * spec.epsilon;
    const double base = co.alpha / co.kappa_star_norm * e2;
    switch (group) {
        case BandGroup::Band1:
            return bc == BoundaryCondition::Dirichlet ? base : -base;
        case BandGroup::Band45: return 2.0 * base;
        case BandGroup::Band1011: return 2.0 * std::sqrt(7.0) * base;
    }
    throw std::logic_error("pair_shift");
}

}  // namespace

BandGroup band_group_from_pair(int lo, int hi) {
    if (lo == 1 && hi == 2) return BandGroup::Band1;
    if (lo == 4 && hi == 5) return BandGroup::Band45;
    if (lo == 10 && hi == 11) return BandGroup::Band1011;
    throw std::invalid_argument("band pair must be (1,2), (4,5) or (10,11)");
}

AsymptoticCoefficients asymptotic_coefficients(const LatticeSpec& spec,
                                               const EwaldParams& params) {
    AsymptoticCoefficients co;
    const double u = kTwoPi / spec.a;
    co.alpha = kTwoPi / (3.0 * spec.cell_area) * u * u;
    co.kappa_star_norm = 2.0 / 3.0 * u;
    co.cell_area = spec.cell_area;
    co.gamma0 = h0_gamma0();
    const BlochVector K = high_symmetry_points(spec).K;
    co.beta1 = [spec, params, K](double omega) {
        const ResonantShell shell =
            resonant_shell(spec, K, 2.0 / 3.0 * kTwoPi / spec.a);
        return (std::log(omega) + h0_gamma0()) / kTwoPi +
               smooth_remainder(spec, K, omega, {0.0, 0.0}, shell, params);
    };
    return co;
}

std::vector<std::pair<std::string, double>> asymptotic_eigenvalues(
    const LatticeSpec& spec, BoundaryCondition bc, BandGroup group) {
    if (!(spec.epsilon <= 0.25 * spec.a))
        throw std::domain_error("asymptotic_eigenvalues: requires epsilon/a <= 0.25");
    const AsymptoticCoefficients co = asymptotic_coefficients(spec);
    const double ks = co.kappa_star_norm;
    const double e2 = spec.epsilon * spec.epsilon;
    const double base = co.alpha / ks * e2;
    std::vector<std::pair<std::string, double>> out;
    switch (group) {
        case BandGroup::Band1:
            if (bc == BoundaryCondition::Dirichlet) {
                out.emplace_back("omega1*", ks + base);
                out.emplace_back("omega1**",
                                 ks - 3.0 * kPi / (co.cell_area * ks * std::log(spec.epsilon / spec.a)));
            } else {
                out.emplace_back("omega1*", ks - base);
            }
            break;
        case BandGroup::Band45:
            out.emplace_back("omega2*", 2.0 * ks + 2.0 * base);
            break;
        case BandGroup::Band1011:
            out.emplace_back("omega3*", std::sqrt(7.0) * ks + 2.0 * std::sqrt(7.0) * base);
            break;
    }
    return out;
}

double theory_slopes(const LatticeSpec& spec, BandGroup group, double omega_star) {
    if (!(omega_star > 0.0)) throw std::domain_error("theory_slopes: omega_star > 0");
    const double u = kTwoPi / spec.a;
    switch (group) {
        case BandGroup::Band1: return u / (3.0 * omega_star);
        case BandGroup::Band45: return 4.0 * u / (3.0 * omega_star);
        case BandGroup::Band1011: return 20.0 * u / (21.0 * omega_star);
    }
    throw std::logic_error("theory_slopes");
}

double pair_root_at_k(const BoundaryOperator& op, BandGroup group, int j) {
    const LatticeSpec& spec = op.spec();
    const double wb = shell_omega_bar(spec, group);
    const double shift = pair_shift(spec, op.bc(), group);

    // Bracket the j = +1 Schur sign change around the predicted root.
    double lo, hi;
    if (shift > 0.0) {
        lo = std::sqrt(wb * wb + 0.25 * (2.0 * wb * shift));
        hi = wb + std::min(5.0 * shift,
                           4.0 * kPi / (spec.cell_area * std::abs(std::log(spec.epsilon / spec.a)) * wb) * 1.05);
    } else {
        lo = wb + 5.0 * shift;  // shift < 0
        hi = std::sqrt(wb * wb + 0.25 * (2.0 * wb * shift));
    }
    if (hi > op.omega_max()) hi = op.omega_max();

    auto f = [&](double w) { return schur_characteristic(op, j, w); };
    auto is_pair_root = [&](double w) {
        const OperatorMatrix A = op.matrix(w);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A.entries);
        const auto& sv = svd.singularValues();
        int mult = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) < 1e-6 * sv(0)) ++mult;
        return mult >= 2;
    };

    // Scan for sign changes; points where the Schur function is invalid
    // (Ahat poles) are skipped, and every bracket is validated against
    // the full matrix so that poles cannot masquerade as roots.
    const int scan = 96;
    bool have_prev = false;
    double prev_w = 0.0, prev_f = 0.0;
    for (int i = 0; i <= scan; ++i) {
        const double w = lo + (hi - lo) * double(i) / double(scan);
        double fw;
        try {
            fw = f(w);
        } catch (const std::exception&) {
            have_prev = false;
            continue;
        }
        if (have_prev && prev_f * fw < 0.0) {
            try {
                const double root = refine_root(f, prev_w, w, 1e-12 * kTwoPi / spec.a);
                if (is_pair_root(root)) return root;
            } catch (const std::exception&) {
            }
        }
        prev_w = w;
        prev_f = fw;
        have_prev = true;
    }
    throw std::runtime_error("pair_root_at_k: no validated root of the Schur function");
}

DiracReport cone_fit(BoundaryCondition bc, const LatticeSpec& spec,
                     std::pair<int, int> band_pair, FourierTruncation trunc,
                     const std::vector<double>& radii_normalized, int directions,
                     const EwaldParams& params) {
    if (directions < 3) throw std::invalid_argument("cone_fit: directions >= 3");
    for (double r : radii_normalized)
        if (!(r >= 1e-4 && r <= 2e-2))
            throw std::invalid_argument("cone_fit: radii outside the linear regime");

    const BandGroup group = band_group_from_pair(band_pair.first, band_pair.second);
    const double un = kTwoPi / spec.a;
    const BlochVector K = high_symmetry_points(spec).K;
    const double wb = shell_omega_bar(spec, group);
    const double rmax = *std::max_element(radii_normalized.begin(), radii_normalized.end());

    const double omega_hi_guess = wb *
        (group == BandGroup::Band1 ? 1.35 : 1.12);
    BoundaryOperator vertex_op(bc, spec, K, trunc, omega_hi_guess, params);
    const double wstar = pair_root_at_k(vertex_op, group, 1);
    const double wstar_m = pair_root_at_k(vertex_op, group, -1);

    // multiplicity at the vertex
    const OperatorMatrix Av = vertex_op.matrix(wstar);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Av.entries);
    const auto& sv = svd.singularValues();
    int mult = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) < 1e-6 * sv(0)) ++mult;

    const double slope_est = theory_slopes(spec, group, wstar);

    DiracReport rep;
    rep.bc = bc;
    rep.band_pair = band_pair;
    rep.multiplicity = mult;
    rep.directions_tested = directions;
    rep.omega_star_numeric = wstar / un;
    rep.omega_star_asymptotic = asymptotic_eigenvalues(spec, bc, group).front().second / un;
    rep.slope_theory = theory_slopes(spec, group, wstar);
    rep.vertex_gap = std::abs(wstar - wstar_m) / un;

    std::vector<double> slopes_plus, slopes_minus, quad_ratios;
    double ss_res = 0.0;
    int n_res = 0;

    for (int d = 0; d < directions; ++d) {
        const double th = kTwoPi * double(d) / double(directions);
        const Vec2 uhat{std::cos(th), std::sin(th)};

        // collect (r, w+), (r, w-) including the shared vertex at r = 0
        std::vector<double> rs{0.0}, wp{wstar / un}, wm{wstar / un};
        for (double rn : radii_normalized) {
            const BlochVector kp{K.k + (rn * un) * uhat};
            const double halfwidth = 2.2 * slope_est * rn * un + 2e-5 * un;
            SweepConfig cfg;
            cfg.omega_lo = wstar - halfwidth;
            cfg.omega_hi = wstar + halfwidth;
            cfg.coarse_per_unit =
                std::max(400, int(std::ceil(10.0 / (slope_est * rn))));
            cfg.zone_halfwidth = 0.0;
            BoundaryOperator op(bc, spec, kp, trunc, cfg.omega_hi, params);
            const auto roots = characteristic_sweep(op, cfg);
            const CharacteristicRoot* below = nullptr;
            const CharacteristicRoot* above = nullptr;
            for (const auto& rt : roots) {
                if (rt.omega <= wstar && (!below || rt.omega > below->omega)) below = &rt;
                if (rt.omega > wstar && (!above || rt.omega < above->omega)) above = &rt;
            }
            if (!below || !above)
                throw std::runtime_error(
                    "cone_fit: missing branch root at direction " + std::to_string(d) +
                    " radius " + std::to_string(rn));
            rs.push_back(rn);
            wp.push_back(above->omega / un);
            wm.push_back(below->omega / un);
        }

        // least squares w = w* + s r + c r^2 per branch, vertex pinned
        auto fit = [&](const std::vector<double>& ws, double& s, double& c) {
            Eigen::MatrixXd X(rs.size(), 2);
            Eigen::VectorXd y(rs.size());
            for (std::size_t i = 0; i < rs.size(); ++i) {
                X(i, 0) = rs[i];
                X(i, 1) = rs[i] * rs[i];
                y(i) = ws[i] - wstar / un;
            }
            const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
            s = beta(0);
            c = beta(1);
            const Eigen::VectorXd res = y - X * beta;
            ss_res += res.squaredNorm();
            n_res += int(rs.size());
        };
        double sp, cp2, sm, cm2;
        fit(wp, sp, cp2);
        fit(wm, sm, cm2);
        slopes_plus.push_back(sp);
        slopes_minus.push_back(sm);
        quad_ratios.push_back(std::max(std::abs(cp2) * rmax / std::abs(sp),
                                       std::abs(cm2) * rmax / std::abs(sm)));
    }

    rep.slope_fit_plus =
        std::accumulate(slopes_plus.begin(), slopes_plus.end(), 0.0) / directions;
    rep.slope_fit_minus =
        std::accumulate(slopes_minus.begin(), slopes_minus.end(), 0.0) / directions;
    rep.fit_residual = std::sqrt(ss_res / std::max(n_res, 1));
    const auto [pmin, pmax] = std::minmax_element(slopes_plus.begin(), slopes_plus.end());
    const auto [mmin, mmax] = std::minmax_element(slopes_minus.begin(), slopes_minus.end());
    rep.isotropy_spread =
        std::max(*pmax - *pmin, std::abs(*mmin - *mmax));
    rep.quadratic_ratio = *std::max_element(quad_ratios.begin(), quad_ratios.end());
    return rep;
}

std::vector<Table1Row> table1_compare(double a, const std::vector<double>& eps_list,
                                      FourierTruncation trunc, const EwaldParams& params) {
    std::vector<Table1Row> rows;
    for (double eps : eps_list) {
        if (!(eps > 0.0 && eps < 0.25 * a))
            throw std::invalid_argument("table1_compare: eps_list within (0, a/4)");
        const LatticeSpec spec = build_lattice(a, eps);
        const BlochVector K = high_symmetry_points(spec).K;
        const double un = kTwoPi / a;
        BoundaryOperator op(BoundaryCondition::Dirichlet, spec, K, trunc, 0.95 * un,
                            params);
        const double numeric = pair_root_at_k(op, BandGroup::Band1);
        const double asym =
            asymptotic_eigenvalues(spec, BoundaryCondition::Dirichlet, BandGroup::Band1)
                .front()
                .second;
        rows.push_back({eps, numeric / un, asym / un, std::abs(numeric - asym) / un});
    }
    return rows;
}

EigenfunctionReport eigenfunction_check(const BoundaryOperator& op,
                                        const CharacteristicRoot& root) {
    EigenfunctionReport rep;
    const int N = op.truncation().N;
    const DensityCoefficients* v1 = nullptr;
    const DensityCoefficients* vm1 = nullptr;
    for (const auto& d : root.nullspace) {
        if (d.residue_class && *d.residue_class == 1) v1 = &d;
        if (d.residue_class && *d.residue_class == -1) vm1 = &d;
    }
    if (!v1 || !vm1) return rep;
    rep.classes_found = true;
    rep.dominant_fraction_j1 = std::norm(v1->c(1 + N)) / v1->c.squaredNorm();
    rep.dominant_fraction_jm1 = std::norm(vm1->c(-1 + N)) / vm1->c.squaredNorm();

    // map the j=+1 vector through c'_{3n-1} = (-1)^n conj(c_{-3n+1})
    Eigen::VectorXcd cp = Eigen::VectorXcd::Zero(2 * N + 1);
    for (int n = -N; n <= N; ++n) {
        const int idx = 3 * n - 1;
        if (idx < -N || idx > N) continue;
        const int src = -3 * n + 1;
        if (src < -N || src > N) continue;
        const double sign = (n % 2) ? -1.0 : 1.0;
        cp(idx + N) = sign * std::conj(v1->c(src + N));
    }
    const OperatorMatrix A = op.matrix(root.omega);
    rep.conjugation_residual = (A.entries * cp).norm() / cp.norm();
    return rep;
}

}  // namespace diracbands

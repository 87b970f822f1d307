#include "diracbands/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace diracbands {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool at_k_vertex(const LatticeSpec& spec, BlochVector kappa) {
    const double u = kTwoPi / spec.a;
    const Vec2 K{u / std::sqrt(3.0), u / 3.0};
    return norm(kappa.k - K) < 1e-12 * u || norm(kappa.k + K) < 1e-12 * u;
}

struct Segment {
    std::vector<double> pts;
};

std::vector<Segment> make_grid(const BoundaryOperator& op, const SweepConfig& cfg) {
    const LatticeSpec& spec = op.spec();
    const double un = kTwoPi / spec.a;
    const double lo = std::max(cfg.omega_lo, 1e-6 * un);
    const double hi = cfg.omega_hi;
    if (!(hi > lo)) throw std::invalid_argument("characteristic_sweep: empty window");

    const auto sing = singular_frequencies(spec, op.kappa(), hi + un);
    const double excl = cfg.singular_exclusion * un;

    // allowed intervals = [lo, hi] minus the exclusion balls
    std::vector<std::pair<double, double>> holes;
    for (double wb : sing)
        if (wb + excl > lo && wb - excl < hi) holes.push_back({wb - excl, wb + excl});
    std::sort(holes.begin(), holes.end());
    std::vector<std::pair<double, double>> allowed;
    double cursor = lo;
    for (auto& h : holes) {
        if (h.first > cursor) allowed.push_back({cursor, std::min(h.first, hi)});
        cursor = std::max(cursor, h.second);
    }
    if (cursor < hi) allowed.push_back({cursor, hi});

    const double dt_coarse = un / double(cfg.coarse_per_unit);
    const double dt_fine = dt_coarse / 10.0;
    const double zone = cfg.zone_halfwidth * un;

    std::vector<Segment> segments;
    for (auto& [A, B] : allowed) {
        if (B - A < 1e-14 * un) continue;
        Segment seg;
        double w = A;
        while (true) {
            seg.pts.push_back(w);
            double near = 1e300;
            for (double wb : sing) near = std::min(near, std::abs(w - wb));
            const double step = (near < zone) ? dt_fine : dt_coarse;
            if (w >= B) break;
            w = std::min(w + step, B);
        }
        if (seg.pts.size() >= 2) segments.push_back(std::move(seg));
    }
    return segments;
}

Eigen::MatrixXcd extract(const Eigen::MatrixXcd& A, const std::vector<int>& idx, int N) {
    Eigen::MatrixXcd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c)
            sub(r, c) = A(idx[r] + N, idx[c] + N);
    return sub;
}

double sigma_min(const Eigen::MatrixXcd& A) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

// golden-section minimization of sigma_min over [lo, hi]
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double det_sign(const Eigen::MatrixXcd& A) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    Complex phase = Complex(double(lu.permutationP().determinant()), 0.0);
    const auto& LU = lu.matrixLU();
    for (Eigen::Index i = 0; i < LU.rows(); ++i) {
        const Complex d = LU(i, i);
        const double ad = std::abs(d);
        if (ad == 0.0) return 0.0;
        phase *= d / ad;
    }
    return phase.real();
}

std::vector<CharacteristicRoot> characteristic_sweep(const BoundaryOperator& op,
                                                     const SweepConfig& cfg) {
    const double un = kTwoPi / op.spec().a;
    const double tol = cfg.root_tol * un;
    const int N = op.truncation().N;
    const bool vertex = at_k_vertex(op.spec(), op.kappa());

    // detection channels: full matrix, or the three residue classes at K
    std::vector<std::vector<int>> channels;
    if (vertex) {
        for (int j : {0, 1, -1}) channels.push_back(subsystem_indices(N, j));
    } else {
        std::vector<int> all;
        for (int n = -N; n <= N; ++n) all.push_back(n);
        channels.push_back(all);
    }

    struct Probe {
        std::vector<double> sig;   // sigma_min per channel
        std::vector<double> sign;  // Re sign of det per channel
    };
    auto probe = [&](double w) {
        Probe pr;
        const OperatorMatrix A = op.matrix(w);
        for (const auto& idx : channels) {
            const Eigen::MatrixXcd sub = extract(A.entries, idx, N);
            pr.sig.push_back(sigma_min(sub));
            pr.sign.push_back(det_sign(sub));
        }
        return pr;
    };
    auto channel_sigma = [&](std::size_t c, double w) {
        const OperatorMatrix A = op.matrix(w);
        return sigma_min(extract(A.entries, channels[c], N));
    };
    auto channel_sign = [&](std::size_t c, double w) {
        const OperatorMatrix A = op.matrix(w);
        return det_sign(extract(A.entries, channels[c], N));
    };

    std::vector<double> candidates;
    for (const Segment& seg : make_grid(op, cfg)) {
        std::vector<Probe> probes;
        probes.reserve(seg.pts.size());
        for (double w : seg.pts) probes.push_back(probe(w));
        for (std::size_t c = 0; c < channels.size(); ++c) {
            for (std::size_t i = 0; i + 1 < seg.pts.size(); ++i) {
                if (probes[i].sign[c] * probes[i + 1].sign[c] < 0.0) {
                    // bisect the determinant sign change
                    double a = seg.pts[i], b = seg.pts[i + 1];
                    double sa = probes[i].sign[c];
                    while (b - a > tol) {
                        const double m = 0.5 * (a + b);
                        const double sm = channel_sign(c, m);
                        if (sa * sm <= 0.0)
                            b = m;
                        else {
                            a = m;
                            sa = sm;
                        }
                    }
                    candidates.push_back(0.5 * (a + b));
                }
            }
            for (std::size_t i = 1; i + 1 < seg.pts.size(); ++i) {
                if (probes[i].sig[c] <= probes[i - 1].sig[c] &&
                    probes[i].sig[c] <= probes[i + 1].sig[c] &&
                    probes[i].sign[c] * probes[i + 1].sign[c] > 0.0 &&
                    probes[i - 1].sign[c] * probes[i].sign[c] > 0.0) {
                    const double w = golden_min([&](double t) { return channel_sigma(c, t); },
                                                seg.pts[i - 1], seg.pts[i + 1], tol);
                    candidates.push_back(w);
                }
            }
        }
    }

    std::sort(candidates.begin(), candidates.end());
    std::vector<CharacteristicRoot> roots;
    for (double w : candidates) {
        if (!roots.empty() && std::abs(w - roots.back().omega) < 10.0 * tol) continue;
        const OperatorMatrix A = op.matrix(w);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A.entries);
        const auto& sv = svd.singularValues();
        const double thr = cfg.sv_threshold_rel * sv(0);
        int mult = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) < thr) ++mult;
        if (mult == 0) continue;
        CharacteristicRoot root;
        root.omega = w;
        root.multiplicity = mult;
        root.residual = sv(sv.size() - 1);
        root.nullspace = nullspace(A, thr);
        roots.push_back(std::move(root));
    }
    return roots;
}

std::vector<CharacteristicRoot> characteristic_sweep(BoundaryCondition bc,
                                                     const LatticeSpec& spec,
                                                     BlochVector kappa,
                                                     const SweepConfig& cfg,
                                                     FourierTruncation trunc,
                                                     const EwaldParams& params) {
    BoundaryOperator op(bc, spec, kappa, trunc, cfg.omega_hi, params);
    return characteristic_sweep(op, cfg);
}

namespace {

// returns f_j and the pre-cancellation scale |a_jj| + |<Ahat^-1 ahat, ahat>|
std::pair<Complex, double> schur_eval(const BoundaryOperator& op, int j, double omega) {
    if (!at_k_vertex(op.spec(), op.kappa()))
        throw std::invalid_argument("schur_characteristic: kappa must be the K/K' vertex");
    const int N = op.truncation().N;
    const OperatorMatrix A = op.matrix(omega);
    const auto cls = subsystem_indices(N, j);
    std::vector<int> hat;  // class minus the center index j
    for (int n : cls)
        if (n != j) hat.push_back(n);

    Eigen::MatrixXcd Ahat(hat.size(), hat.size());
    Eigen::VectorXcd col(hat.size()), row(hat.size());
    for (std::size_t r = 0; r < hat.size(); ++r) {
        col(r) = A.at(hat[r], j);
        row(r) = A.at(j, hat[r]);
        for (std::size_t c = 0; c < hat.size(); ++c) Ahat(r, c) = A.at(hat[r], hat[c]);
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Ahat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        throw std::runtime_error("schur_characteristic: Ahat_j numerically singular");
    // Schur complement of the scalar block: a_jj - row . Ahat^{-1} col.
    // With a Hermitian matrix the row is the conjugated column and this
    // is the <Ahat^{-1} ahat, ahat> pairing.
    const Eigen::VectorXcd solved = svd.solve(col);
    const Complex ip = (row.transpose() * solved)(0);
    const Complex f = A.at(j, j) - ip;
    return {f, std::abs(A.at(j, j)) + std::abs(ip)};
}

}  // namespace

Complex schur_characteristic_full(const BoundaryOperator& op, int j, double omega) {
    return schur_eval(op, j, omega).first;
}

double schur_characteristic(const BoundaryOperator& op, int j, double omega) {
    const auto [f, scale] = schur_eval(op, j, omega);
    // The imaginary part is rounding noise relative to the uncancelled
    // magnitudes |a_jj| + |ip|, which dominate |f| near a root.
    if (op.bc() == BoundaryCondition::Dirichlet && std::abs(f.imag()) > 1e-10 * scale)
        throw std::runtime_error("schur_characteristic: imaginary residue above 1e-10");
    return f.real();
}

double refine_root(const std::function<double(double)>& f, double lo, double hi,
                   double tol) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) throw std::invalid_argument("refine_root: no sign change on bracket");
    while (b - a > tol) {
        // secant proposal, safeguarded to the middle half of the bracket
        double m = (a * fb - b * fa) / (fb - fa);
        const double lo_guard = a + 0.25 * (b - a), hi_guard = b - 0.25 * (b - a);
        if (!(m > lo_guard) || !(m < hi_guard)) m = 0.5 * (a + b);
        const double fm = f(m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
            fb = fm;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

std::vector<DensityCoefficients> nullspace(const OperatorMatrix& A, double threshold) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A.entries, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const int N = A.trunc.N;
    std::vector<DensityCoefficients> out;
    bool vertex = false;
    {
        const double u = 1.5 * norm(A.kappa.k);
        const Vec2 K{u / std::sqrt(3.0), u / 3.0};
        vertex = u > 0.0 &&
                 (norm(A.kappa.k - K) < 1e-9 * u || norm(A.kappa.k + K) < 1e-9 * u);
    }
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) >= threshold) continue;
        DensityCoefficients d;
        d.c = svd.matrixV().col(i);
        if (vertex) {
            double cls[3] = {0.0, 0.0, 0.0};
            for (int n = -N; n <= N; ++n)
                cls[((n % 3) + 3) % 3] += std::norm(d.c(n + N));
            const double total = cls[0] + cls[1] + cls[2];
            for (int r = 0; r < 3; ++r)
                if (cls[r] >= (1.0 - 1e-6) * total) d.residue_class = (r == 2) ? -1 : r;
        }
        out.push_back(std::move(d));
    }
    return out;
}

double weighted_inverse_norm(const OperatorMatrix& A, int j) {
    const int N = A.trunc.N;
    std::vector<int> hat;
    for (int n : subsystem_indices(N, j))
        if (n != j) hat.push_back(n);
    Eigen::MatrixXcd Ahat(hat.size(), hat.size());
    for (std::size_t r = 0; r < hat.size(); ++r)
        for (std::size_t c = 0; c < hat.size(); ++c) Ahat(r, c) = A.at(hat[r], hat[c]);
    const Eigen::MatrixXcd inv = Ahat.inverse();
    Eigen::VectorXd w(hat.size());
    for (std::size_t r = 0; r < hat.size(); ++r)
        w(r) = std::pow(1.0 + double(hat[r]) * double(hat[r]), -0.25);
    const Eigen::MatrixXcd M = w.asDiagonal() * inv * w.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    return svd.singularValues()(0);
}

}  // namespace diracbands

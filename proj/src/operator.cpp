#include "diracbands/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diracbands/simd.hpp"

namespace diracbands {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDiskResonance = 2.404825557695773;  // first zero of J0

// Fourier moments of powers of the squared chord X = 2 - 2 cos s on the
// unit circle:
//   I2(p, n) = (1/2pi) Int X^p e^{-ins} ds            (binomial)
//   I1(p, n) = (1/2pi) Int (1/2) X^p ln X e^{-ins} ds (log convolution)
// Both are real and even in n. The Pascal row advances with p.
class ChordMoments {
  public:
    ChordMoments() : row_{1.0}, p_(0) {}

    void advance() {  // p -> p + 1, i.e. C(2p,.) -> C(2p+2,.)
        step();
        step();
        ++p_;
    }

    int p() const { return p_; }

    double i2(int n) const {
        const int idx = p_ + n;
        if (idx < 0 || idx > 2 * p_) return 0.0;
        return ((n % 2) ? -1.0 : 1.0) * row_[idx];
    }

    double i1(int n) const {
        double sum = 0.0;
        for (int l = -p_; l <= p_; ++l) {
            const int m = -n - l;
            if (m == 0) continue;
            const double cl = ((l % 2) ? -1.0 : 1.0) * row_[p_ + l];
            sum += cl * (-1.0 / std::abs(double(m)));
        }
        return 0.5 * sum;
    }

  private:
    void step() {
        row_.push_back(0.0);
        for (std::size_t i = row_.size() - 1; i > 0; --i) row_[i] += row_[i - 1];
    }
    std::vector<double> row_;
    int p_;
};

double log_kernel_eigenvalue(int n) { return n == 0 ? 0.0 : -0.5 / std::abs(double(n)); }

}  // namespace

Complex h0_diagonal(double omega, double epsilon, int n, int order) {
    const double u = omega * epsilon;
    if (!(u > 0.0) || u >= 1.5)
        throw std::domain_error("h0_diagonal: need 0 < omega*epsilon < 1.5");
    const Complex gamma0 = h0_gamma0();
    Complex sum = log_kernel_eigenvalue(n);
    if (n == 0) sum += std::log(epsilon) + std::log(omega) + gamma0;

    const double lnu = std::log(u);
    ChordMoments mom;
    double b1 = 1.0;
    double harmonic = 0.0;
    double u2p = 1.0;
    int small_terms = 0;
    for (int p = 1; p <= order; ++p) {
        mom.advance();
        b1 *= -1.0 / (4.0 * double(p) * double(p));
        harmonic += 1.0 / double(p);
        const Complex b2 = (gamma0 - harmonic) * b1;
        u2p *= u * u;
        const Complex term =
            u2p * (b1 * (lnu * mom.i2(n) + mom.i1(n)) + b2 * mom.i2(n));
        sum += term;
        small_terms = (std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) ? small_terms + 1 : 0;
        if (small_terms >= 2) break;
    }
    return sum;
}

Complex dl_h0_diagonal(double omega, double epsilon, int n, int order) {
    const double u = omega * epsilon;
    if (!(u > 0.0) || u >= 1.5)
        throw std::domain_error("dl_h0_diagonal: need 0 < omega*epsilon < 1.5");
    Complex sum = (n == 0) ? Complex(0.5 / epsilon) : Complex(0.0);

    const double w = 0.25 * u * u;  // (omega eps / 2)^2
    const double pref = omega * omega * epsilon / 16.0;
    const double lhalf = std::log(0.5 * u) + kEulerGamma;
    ChordMoments mom;
    mom.advance();  // series starts at X^{k+1}
    double ck = 1.0;  // (-1)^k w^k / (k! (k+1)!)
    double hk = 0.0, hk1 = 1.0;
    int small_terms = 0;
    for (int k = 0; k <= order; ++k) {
        const Complex alpha =
            pref * ck * Complex((hk + hk1) / kPi - 2.0 * lhalf / kPi, 1.0);
        const double beta = -pref * ck / kPi;
        const Complex term =
            kTwoPi * (alpha * mom.i2(n) + 2.0 * beta * mom.i1(n));
        sum += term;
        small_terms = (std::abs(term) < 1e-17 * (1.0 + std::abs(sum))) ? small_terms + 1 : 0;
        if (small_terms >= 2) break;
        ck *= -w / (double(k + 1) * double(k + 2));
        hk += 1.0 / double(k + 1);
        hk1 += 1.0 / double(k + 2);
        mom.advance();
    }
    return sum;
}

// ---------------------------------------------------------------------------

struct BoundaryOperator::Impl {
    BoundaryCondition bc;
    LatticeSpec spec;
    BlochVector kappa;
    FourierTruncation trunc;
    double omega_max;
    EwaldParams params;
    double eta;
    int Q;
    int N;
    int M;  // 2N + 1
    int P;  // spatial series cap at omega_max

    struct Mode {
        double k2;
        std::vector<Complex> uhat;  // size M
        std::vector<Complex> vhat;  // Neumann right factor, size M
        double core_peak = 0.0;
        double nyq_peak = 0.0;  // |DFT| at the Nyquist sentinel modes
    };
    std::vector<Mode> modes;

    // Per-p spatial tables over the retained modes, row-major MxM.
    std::vector<std::vector<Complex>> spatial_hat;
    std::vector<double> spatial_peak;  // per p, core entries
    std::vector<double> spatial_nyq;   // per p, max row content at Nyquist

    // s-grid data (index l = 0..Q-1)
    std::vector<double> chord;          // 2|sin(pi l/Q)|
    std::vector<double> one_minus_cos;  // 1 - cos(2 pi l/Q)
    std::vector<double> chain;          // E_r(z_l), r = 0..P+1, chain[r*Q + l]
    std::vector<Complex> fneg;          // e^{-i m t_j}, fneg[(m+N)*Q + j]
    std::vector<Complex> fnyq;          // e^{-i m t_j} for m = Q/2-1, Q/2

    const Complex* fneg_row(int m) const { return fneg.data() + (m + N) * Q; }
    const Complex* fnyq_row(int r) const { return fnyq.data() + r * Q; }

    void build();
    void build_spectral_tables(const std::vector<double>& rx, const std::vector<double>& ry);
    void build_spatial_tables(const std::vector<double>& rx, const std::vector<double>& ry);
    void build_sgrid_tables();
    OperatorMatrix matrix(double omega) const;
};

void BoundaryOperator::Impl::build() {
    if (trunc.N < 2) throw std::invalid_argument("BoundaryOperator: N >= 2 required");
    if (trunc.quad_points < 4 * trunc.N + 4 || trunc.quad_points % 2 != 0)
        throw std::invalid_argument("BoundaryOperator: quad_points must be even and >= 4N+4");
    if (!(omega_max * spec.epsilon < kDiskResonance))
        throw std::domain_error(
            "BoundaryOperator: omega*epsilon reaches the first interior disk resonance");

    eta = params.eta > 0.0 ? params.eta : ewald_default_eta(spec);
    Q = trunc.quad_points;
    N = trunc.N;
    M = 2 * N + 1;
    P = ewald_series_length(omega_max, eta, std::max(params.target_tol, 1e-14),
                            params.series_order);

    std::vector<double> rx(Q), ry(Q);
    for (int j = 0; j < Q; ++j) {
        const double t = kTwoPi * j / Q;
        rx[j] = std::cos(t);
        ry[j] = std::sin(t);
    }
    fneg.resize(std::size_t(M) * Q);
    for (int m = -N; m <= N; ++m)
        for (int j = 0; j < Q; ++j) {
            const double t = kTwoPi * j / Q;
            fneg[std::size_t(m + N) * Q + j] = {std::cos(m * t), -std::sin(m * t)};
        }
    fnyq.resize(2 * std::size_t(Q));
    for (int r = 0; r < 2; ++r) {
        const int m = Q / 2 - r;
        for (int j = 0; j < Q; ++j) {
            const double t = kTwoPi * j / Q;
            fnyq[std::size_t(r) * Q + j] = {std::cos(m * t), -std::sin(m * t)};
        }
    }

    build_spectral_tables(rx, ry);
    build_spatial_tables(rx, ry);
    build_sgrid_tables();
}

void BoundaryOperator::Impl::build_spectral_tables(const std::vector<double>& rx,
                                                   const std::vector<double>& ry) {
    const auto& K = simd::active();
    const double tol = std::max(params.target_tol, 1e-14);
    const std::vector<Vec2> ks = spectral_modes(spec, kappa, omega_max, eta, 1e-3 * tol);
    const double eps = spec.epsilon;

    std::vector<Complex> u(Q), v(Q);
    modes.reserve(ks.size());
    for (const Vec2& k : ks) {
        Mode mode;
        mode.k2 = norm2(k);
        for (int j = 0; j < Q; ++j) {
            const double phase = eps * (k.x * rx[j] + k.y * ry[j]);
            u[j] = {std::cos(phase), std::sin(phase)};
            if (bc == BoundaryCondition::Neumann)
                v[j] = Complex(0.0, k.x * rx[j] + k.y * ry[j]) * u[j];
        }
        mode.uhat.resize(M);
        for (int m = -N; m <= N; ++m)
            mode.uhat[m + N] = K.zdotu(Q, u.data(), fneg_row(m));
        if (bc == BoundaryCondition::Neumann) {
            mode.vhat.resize(M);
            for (int m = -N; m <= N; ++m)
                mode.vhat[m + N] = K.zdotu(Q, v.data(), fneg_row(m));
        }
        const auto& right = (bc == BoundaryCondition::Neumann) ? mode.vhat : mode.uhat;
        for (int m = 0; m < M; ++m) {
            const double mag = std::max(std::abs(mode.uhat[m]), std::abs(right[m]));
            mode.core_peak = std::max(mode.core_peak, mag);
        }
        for (int r = 0; r < 2; ++r) {
            mode.nyq_peak = std::max(mode.nyq_peak,
                                     std::abs(K.zdotu(Q, u.data(), fnyq_row(r))));
            if (bc == BoundaryCondition::Neumann)
                mode.nyq_peak = std::max(mode.nyq_peak,
                                         std::abs(K.zdotu(Q, v.data(), fnyq_row(r))));
        }
        modes.push_back(std::move(mode));
    }
}

void BoundaryOperator::Impl::build_spatial_tables(const std::vector<double>& rx,
                                                  const std::vector<double>& ry) {
    const auto& K = simd::active();
    const double tol = std::max(params.target_tol, 1e-14);
    const double eps = spec.epsilon;
    const std::vector<Vec2> sites = spatial_sites(spec, eta, 1e-3 * tol, 2.0 * eps);
    const bool neumann = (bc == BoundaryCondition::Neumann);

    spatial_hat.assign(P + 1, std::vector<Complex>(std::size_t(M) * M, Complex{}));
    spatial_nyq.assign(P + 1, 0.0);

    std::vector<double> dx(Q), dy(Q), z(Q), emz(Q), E(Q), E0(Q), geom(Q);
    std::vector<double> row_re(std::size_t(P + 1) * Q), row_im(std::size_t(P + 1) * Q);
    std::vector<Complex> scratch(Q), brow(M);

    for (int j = 0; j < Q; ++j) {
        for (int k = 0; k < Q; ++k) {
            dx[k] = eps * (rx[j] - rx[k]);
            dy[k] = eps * (ry[j] - ry[k]);
        }
        std::fill(row_re.begin(), row_re.end(), 0.0);
        std::fill(row_im.begin(), row_im.end(), 0.0);

        for (const Vec2& e : sites) {
            K.dist2_scaled(Q, dx.data(), dy.data(), e.x, e.y, eta * eta, z.data());
            for (int k = 0; k < Q; ++k) emz[k] = std::exp(-z[k]);
            for (int k = 0; k < Q; ++k) E[k] = expint_e1(z[k]);
            const double phase = dot(kappa.k, e);
            const double br = std::cos(phase), bi = std::sin(phase);

            if (!neumann) {
                // accumulate E_{p+1}, p = 0..P
                for (int p = 0; p <= P; ++p) {
                    if (p > 0) K.expint_step(Q, 1.0 / double(p), emz.data(), z.data(), E.data());
                    K.daxpy(Q, br, E.data(), row_re.data() + std::size_t(p) * Q);
                    K.daxpy(Q, bi, E.data(), row_im.data() + std::size_t(p) * Q);
                }
            } else {
                // geometric factor r_k . (d - e) and weights -(eta^2/2pi) bloch
                for (int k = 0; k < Q; ++k)
                    geom[k] = rx[k] * (dx[k] - e.x) + ry[k] * (dy[k] - e.y);
                const double wr = -eta * eta / kTwoPi * br;
                const double wi = -eta * eta / kTwoPi * bi;
                for (int k = 0; k < Q; ++k) E0[k] = emz[k] / z[k];
                K.daxpy_prod(Q, wr, geom.data(), E0.data(), row_re.data());
                K.daxpy_prod(Q, wi, geom.data(), E0.data(), row_im.data());
                for (int p = 1; p <= P; ++p) {
                    if (p > 1) K.expint_step(Q, 1.0 / double(p - 1), emz.data(), z.data(), E.data());
                    K.daxpy_prod(Q, wr, geom.data(), E.data(), row_re.data() + std::size_t(p) * Q);
                    K.daxpy_prod(Q, wi, geom.data(), E.data(), row_im.data() + std::size_t(p) * Q);
                }
            }
        }

        for (int p = 0; p <= P; ++p) {
            const double* rr = row_re.data() + std::size_t(p) * Q;
            const double* ri = row_im.data() + std::size_t(p) * Q;
            for (int k = 0; k < Q; ++k) scratch[k] = {rr[k], ri[k]};
            for (int n = -N; n <= N; ++n)
                brow[n + N] = K.zdotu(Q, scratch.data(), fneg_row(-n));
            auto& tab = spatial_hat[p];
            for (int m = -N; m <= N; ++m)
                K.zaxpy(M, fneg[(std::size_t(m + N)) * Q + j], brow.data(),
                        tab.data() + std::size_t(m + N) * M);
            for (int r = 0; r < 2; ++r)
                spatial_nyq[p] = std::max(
                    spatial_nyq[p], std::abs(K.zdotu(Q, scratch.data(), fnyq_row(r))));
        }
    }

    spatial_peak.assign(P + 1, 0.0);
    for (int p = 0; p <= P; ++p)
        for (const Complex& v : spatial_hat[p])
            spatial_peak[p] = std::max(spatial_peak[p], std::abs(v));
}

void BoundaryOperator::Impl::build_sgrid_tables() {
    const double eps = spec.epsilon;
    chord.resize(Q);
    one_minus_cos.resize(Q);
    chain.assign(std::size_t(P + 2) * Q, 0.0);
    std::vector<double> En(P + 2);
    for (int l = 0; l < Q; ++l) {
        const double s = kTwoPi * l / Q;
        chord[l] = 2.0 * std::abs(std::sin(0.5 * s));
        one_minus_cos[l] = 1.0 - std::cos(s);
        if (l == 0) continue;
        const double z = eta * eta * eps * eps * chord[l] * chord[l];
        chain[l] = std::exp(-z) / z;  // E_0
        expint_chain(z, P + 1, En.data());
        for (int r = 1; r <= P + 1; ++r) chain[std::size_t(r) * Q + l] = En[r - 1];
    }
}

OperatorMatrix BoundaryOperator::Impl::matrix(double omega) const {
    const auto& K = simd::active();
    if (!(omega > 0.0)) throw std::domain_error("matrix: omega must be positive");
    if (omega > omega_max)
        throw std::invalid_argument("matrix: omega above the omega_max the tables cover");
    if (!(omega * spec.epsilon < kDiskResonance))
        throw std::domain_error("matrix: omega*epsilon reaches the interior disk resonance");
    const double unit = kTwoPi / spec.a;
    for (const auto& mode : modes)
        if (std::abs(std::sqrt(mode.k2) - omega) < 1e-6 * unit)
            throw SingularFrequency("matrix: omega within 1e-6*(2pi/a) of a singular frequency");

    const int Mc = 2 * N + 1;
    const bool neumann = (bc == BoundaryCondition::Neumann);
    const double eps = spec.epsilon;
    std::vector<Complex> buf(std::size_t(Mc) * Mc, Complex{});

    double tail_abs = 0.0;

    // spectral rank-one updates
    const double quad_pref = kTwoPi / (double(Q) * double(Q));
    for (const auto& mode : modes) {
        double w = spectral_weight(omega, mode.k2, eta, spec.cell_area) * quad_pref;
        if (neumann) w *= eps;
        const auto& right = neumann ? mode.vhat : mode.uhat;
        for (int m = -N; m <= N; ++m) {
            const Complex a = w * mode.uhat[m + N];
            K.zaxpy_conj(Mc, a, right.data(), buf.data() + std::size_t(m + N) * Mc);
        }
        tail_abs += std::abs(w) * mode.nyq_peak * mode.core_peak;
    }

    // spatial tables
    const std::vector<double> cp = ewald_series_coeffs(omega, eta, P);
    for (int p = 0; p <= P; ++p) {
        const double coef = neumann ? eps * quad_pref * cp[p]
                                    : -cp[p] / (2.0 * double(Q) * double(Q));
        const auto& tab = spatial_hat[p];
        for (int m = -N; m <= N; ++m)
            K.zaxpy(Mc, coef, tab.data() + std::size_t(m + N) * M,
                    buf.data() + std::size_t(m + N) * Mc);
        // conservative bound on the Nyquist-frequency table content
        tail_abs += std::abs(coef) * double(Q) * spatial_nyq[p];
    }

    // s-only piece: (e = 0 Ewald spatial term) minus the free-space kernel
    std::vector<Complex> psi(Q);
    if (!neumann) {
        std::vector<double> acc(Q, 0.0);
        for (int p = 0; p <= P; ++p)
            K.daxpy(Q, cp[p], chain.data() + std::size_t(p + 1) * Q, acc.data());
        for (int l = 1; l < Q; ++l)
            psi[l] = -acc[l] / (4.0 * kPi) - h0_free(omega, eps * chord[l]);
        double psum = 0.0;
        for (int p = 1; p <= P; ++p) psum += cp[p] / double(p);
        psi[0] = kEulerGamma / (4.0 * kPi) + std::log(eta) / kTwoPi - psum / (4.0 * kPi) -
                 (std::log(omega) + h0_gamma0()) / kTwoPi;
    } else {
        std::vector<double> acc(Q, 0.0);
        for (int p = 0; p <= P; ++p)
            K.daxpy(Q, cp[p], chain.data() + std::size_t(p) * Q, acc.data());
        for (int l = 1; l < Q; ++l) {
            const Complex h0rad = h0_free_radial_derivative(omega, eps * chord[l]);
            psi[l] = eta * eta * eps / kTwoPi * one_minus_cos[l] * acc[l] -
                     one_minus_cos[l] / chord[l] * h0rad;
        }
        psi[0] = 0.0;
    }

    const double spref = kTwoPi / double(Q);
    for (int n = -N; n <= N; ++n) {
        const Complex g = spref * K.zdotu(Q, psi.data(), fneg_row(n));
        const Complex diag = neumann ? 0.5 + eps * (g + dl_h0_diagonal(omega, eps, n))
                                     : g + h0_diagonal(omega, eps, n);
        buf[std::size_t(n + N) * Mc + (n + N)] += diag;
    }
    for (int r = 0; r < 2; ++r) {
        const double t1 = std::abs(spref * K.zdotu(Q, psi.data(), fnyq_row(r)));
        tail_abs += (neumann ? eps : 1.0) * t1;
    }

    OperatorMatrix out;
    out.bc = bc;
    out.kappa = kappa;
    out.omega = omega;
    out.trunc = trunc;
    out.entries.resize(Mc, Mc);
    for (int m = 0; m < Mc; ++m)
        for (int n = 0; n < Mc; ++n) out.entries(m, n) = buf[std::size_t(m) * Mc + n];

    const double scale = out.norm_max();
    if (tail_abs > 1e-8 * scale)
        throw QuadratureUnresolved("matrix: trailing Fourier content above 1e-8 of norm");
    return out;
}

BoundaryOperator::BoundaryOperator(BoundaryCondition bc, const LatticeSpec& spec,
                                   BlochVector kappa, FourierTruncation trunc,
                                   double omega_max, const EwaldParams& params)
    : impl_(std::make_unique<Impl>()) {
    impl_->bc = bc;
    impl_->spec = spec;
    impl_->kappa = kappa;
    impl_->trunc = trunc;
    impl_->omega_max = omega_max;
    impl_->params = params;
    impl_->build();
}

BoundaryOperator::~BoundaryOperator() = default;
BoundaryOperator::BoundaryOperator(BoundaryOperator&&) noexcept = default;
BoundaryOperator& BoundaryOperator::operator=(BoundaryOperator&&) noexcept = default;

OperatorMatrix BoundaryOperator::matrix(double omega) const { return impl_->matrix(omega); }
BoundaryCondition BoundaryOperator::bc() const { return impl_->bc; }
const LatticeSpec& BoundaryOperator::spec() const { return impl_->spec; }
BlochVector BoundaryOperator::kappa() const { return impl_->kappa; }
FourierTruncation BoundaryOperator::truncation() const { return impl_->trunc; }
double BoundaryOperator::omega_max() const { return impl_->omega_max; }

OperatorMatrix assemble(BoundaryCondition bc, const LatticeSpec& spec, BlochVector kappa,
                        double omega, FourierTruncation trunc, const EwaldParams& params) {
    BoundaryOperator op(bc, spec, kappa, trunc, omega, params);
    return op.matrix(omega);
}

std::vector<int> subsystem_indices(int N, int j) {
    if (j != 0 && j != 1 && j != -1)
        throw std::invalid_argument("subsystem_indices: j must be 0, 1 or -1");
    std::vector<int> idx;
    for (int n = -N; n <= N; ++n)
        if (((n - j) % 3 + 3) % 3 == 0) idx.push_back(n);
    return idx;
}

Eigen::MatrixXcd subsystem_extract(const OperatorMatrix& A, int j) {
    // kappa must sit at the K (or K') vertex for the residue classes to
    // decouple. |K| = (2/3)(2pi/a) fixes the scale without knowing a.
    const double u = 1.5 * norm(A.kappa.k);
    const Vec2 Kv{u / std::sqrt(3.0), u / 3.0};
    const bool at_K =
        u > 0.0 && (norm(A.kappa.k - Kv) < 1e-9 * u || norm(A.kappa.k + Kv) < 1e-9 * u);
    if (!at_K)
        throw std::invalid_argument("subsystem_extract: kappa is not the K/K' vertex");

    const auto idx = subsystem_indices(A.trunc.N, j);
    Eigen::MatrixXcd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = A.at(idx[r], idx[c]);
    return sub;
}

SymmetryReport symmetry_report(const OperatorMatrix& A) {
    SymmetryReport rep;
    const int N = A.trunc.N;
    rep.norm_max = A.norm_max();
    if (A.bc == BoundaryCondition::Dirichlet) {
        double h = 0.0;
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n)
                h = std::max(h, std::abs(A.at(m, n) - std::conj(A.at(n, m))));
        rep.hermitian_violation = h;
    }
    double idxv = 0.0;
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            const double sign = ((m - n) % 2) ? -1.0 : 1.0;
            const Complex partner = (A.bc == BoundaryCondition::Dirichlet)
                                        ? A.at(-n, -m)
                                        : std::conj(A.at(-m, -n));
            idxv = std::max(idxv, std::abs(A.at(m, n) - sign * partner));
        }
    rep.index_symmetry_violation = idxv;
    double m3 = 0.0;
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n)
            if (((m - n) % 3 + 3) % 3 != 0) m3 = std::max(m3, std::abs(A.at(m, n)));
    rep.mod3_violation = m3 / std::max(rep.norm_max, 1e-300);
    return rep;
}

}  // namespace diracbands

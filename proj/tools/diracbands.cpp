// Band-structure and Dirac-point command line tool for the honeycomb
// obstacle lattice. Subcommands: bands | dirac | table1 | greens-probe.

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <thread>

#include <CLI11.hpp>

#include "diracbands/config.hpp"
#include "diracbands/dirac.hpp"
#include "diracbands/log.hpp"
#include "diracbands/output.hpp"
#include "diracbands/spectral.hpp"

namespace db = diracbands;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct CommonFlags {
    std::string config_path;
    std::string bc;
    double eps = -1.0;
    int n = -1;
    std::string out;
    std::string format;
    int jobs = 0;
    bool raw = false;
};

void add_common(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("--config", fl.config_path, "configuration file (key = value)");
    cmd->add_option("--bc", fl.bc, "boundary condition: dirichlet|neumann");
    cmd->add_option("--eps", fl.eps, "obstacle radius");
    cmd->add_option("--n", fl.n, "Fourier truncation N");
    cmd->add_option("--out", fl.out, "output path (default stdout)");
    cmd->add_option("--format", fl.format, "output format: csv|json");
    cmd->add_option("--jobs", fl.jobs, "worker threads (default: all cores)");
    cmd->add_flag("--raw", fl.raw, "emit unnormalized frequencies");
}

db::RunConfig load_config(const CommonFlags& fl) {
    db::RunConfig cfg;
    if (!fl.config_path.empty()) cfg = db::parse_config_file(fl.config_path);
    if (!fl.bc.empty()) {
        if (fl.bc == "dirichlet") cfg.bc = db::BoundaryCondition::Dirichlet;
        else if (fl.bc == "neumann") cfg.bc = db::BoundaryCondition::Neumann;
        else throw db::ConfigError("--bc must be dirichlet or neumann");
    }
    if (fl.eps > 0.0) cfg.epsilon = fl.eps;
    if (fl.n > 0) {
        cfg.n = fl.n;
        cfg.quad_points = std::max(cfg.quad_points, 4 * cfg.n + 4);
    }
    if (!fl.out.empty()) cfg.out_path = fl.out;
    if (!fl.format.empty()) cfg.format = fl.format;
    cfg.jobs = fl.jobs;
    cfg.raw = fl.raw;
    cfg.validate();
    return cfg;
}

// Run fn(i) for i in [0, n) on a small worker pool; output order is the
// caller's to arrange, so results stay deterministic.
void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
    if (jobs <= 0) jobs = int(std::thread::hardware_concurrency());
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw db::ConfigError("cannot open output file: " + path);
    return file;
}

int cmd_bands(const db::RunConfig& cfg) {
    const db::LatticeSpec spec = db::build_lattice(cfg.a, cfg.epsilon);
    const double un = kTwoPi / cfg.a;

    std::vector<db::BlochVector> pts;
    for (const auto& tok : cfg.path) pts.push_back(db::resolve_path_point(spec, tok));
    const auto path = db::brillouin_path(pts, cfg.samples_per_segment);

    double omega_hi = cfg.omega_max * un;
    const double cap = std::min(1.45, 2.39) / cfg.epsilon;
    if (omega_hi > cap) {
        db::log_warn("omega_max capped so that omega*epsilon stays in the kernel-series range");
        omega_hi = cap;
    }

    db::SweepConfig sweep;
    sweep.omega_lo = 0.0;
    sweep.omega_hi = omega_hi;
    sweep.coarse_per_unit = cfg.coarse_per_unit;
    sweep.singular_exclusion = cfg.singular_exclusion;
    sweep.zone_halfwidth = cfg.zone_halfwidth;
    sweep.root_tol = cfg.root_tol;
    sweep.sv_threshold_rel = cfg.sv_threshold;

    db::FourierTruncation trunc{cfg.n, cfg.quad_points};
    db::BandTable table;
    table.n_bands = cfg.n_bands;
    table.rows.resize(path.size());

    parallel_for(cfg.jobs, int(path.size()), [&](int i) {
        db::BandRow row;
        row.s = path[i].first / un;
        row.kx = path[i].second.k.x / un;
        row.ky = path[i].second.k.y / un;
        try {
            db::BoundaryOperator op(cfg.bc, spec, path[i].second, trunc, omega_hi,
                                    cfg.ewald);
            const auto roots = db::characteristic_sweep(op, sweep);
            for (const auto& rt : roots)
                for (int m = 0; m < rt.multiplicity; ++m) {
                    const double w = cfg.raw ? rt.omega : rt.omega / un;
                    row.bands.push_back(w);
                }
            if (int(row.bands.size()) > cfg.n_bands) row.bands.resize(cfg.n_bands);
        } catch (const std::exception& ex) {
            db::log_warn("bands: kappa sample " + std::to_string(i) + " failed: " +
                         ex.what());
            row.bands.clear();
        }
        if (cfg.raw) {
            row.s = path[i].first;
            row.kx = path[i].second.k.x;
            row.ky = path[i].second.k.y;
        }
        table.rows[i] = std::move(row);
    });

    std::ofstream file;
    std::ostream& os = open_output(cfg.out_path, file);
    if (cfg.format == "json")
        db::write_band_json(os, table);
    else
        db::write_band_csv(os, table);
    return 0;
}

int cmd_dirac(const db::RunConfig& cfg) {
    const db::LatticeSpec spec = db::build_lattice(cfg.a, cfg.epsilon);
    const double un = kTwoPi / cfg.a;
    db::FourierTruncation trunc{cfg.n, cfg.quad_points};
    db::DiracReport rep = db::cone_fit(cfg.bc, spec, {cfg.band_lo, cfg.band_hi}, trunc,
                                       cfg.radii, cfg.directions, cfg.ewald);
    if (cfg.raw) {
        rep.omega_star_numeric *= un;
        rep.omega_star_asymptotic *= un;
        rep.fit_residual *= un;
        rep.vertex_gap *= un;
    }
    std::ofstream file;
    std::ostream& os = open_output(cfg.out_path, file);
    db::write_dirac_json(os, rep);
    return 0;
}

int cmd_table1(const db::RunConfig& cfg, const std::vector<double>& eps_list) {
    db::FourierTruncation trunc{cfg.n, cfg.quad_points};
    const auto rows = db::table1_compare(cfg.a, eps_list, trunc, cfg.ewald);

    std::ofstream file;
    std::ostream& os = open_output(cfg.out_path, file);
    write_table1_csv(os, rows);

    // reference values for the default eps list; tolerance failures exit 1
    struct Ref {
        double eps, numeric, asym, err;
    };
    const std::vector<Ref> refs = {{1.0 / 40, 0.66896, 0.66893, 3e-5},
                                   {1.0 / 20, 0.67559, 0.67573, 1.4e-4},
                                   {1.0 / 10, 0.70172, 0.70294, 1.2e-3},
                                   {1.0 / 5, 0.81715, 0.81177, 5.4e-3}};
    bool ok = true;
    for (const auto& row : rows) {
        for (const auto& ref : refs) {
            if (std::abs(row.epsilon - ref.eps) > 1e-12) continue;
            const bool row_ok = std::abs(row.numeric - ref.numeric) < 5e-4 &&
                                std::abs(row.asymptotic - ref.asym) < 5e-5 &&
                                row.error < 2.0 * ref.err && row.error > 0.5 * ref.err;
            if (!row_ok) {
                db::log_error("table1 row eps=" + db::format_sig(row.epsilon) +
                              " outside tolerance: numeric=" + db::format_sig(row.numeric) +
                              " asymptotic=" + db::format_sig(row.asymptotic) +
                              " error=" + db::format_sig(row.error));
                ok = false;
            }
        }
    }
    return ok ? 0 : 1;
}

int cmd_greens_probe(const db::RunConfig& cfg, double kx, double ky, double omega_n,
                     double x, double y, bool check, bool eta_scan) {
    const db::LatticeSpec spec = db::build_lattice(cfg.a, cfg.epsilon);
    const double un = kTwoPi / cfg.a;
    const db::BlochVector kappa{{kx * un, ky * un}};
    const double omega = omega_n * un;
    const db::Vec2 xv{x * cfg.a, y * cfg.a};

    const auto t0 = std::chrono::steady_clock::now();
    const db::GreensValue g = db::ewald_green(spec, kappa, omega, xv, cfg.ewald);
    const auto t1 = std::chrono::steady_clock::now();
    const double us = std::chrono::duration<double, std::micro>(t1 - t0).count();

    std::cout << "G      = " << db::format_sig(g.value.real()) << " + "
              << db::format_sig(g.value.imag()) << "i\n";
    std::cout << "dG/dx  = " << db::format_sig(g.grad_x[0].real()) << " + "
              << db::format_sig(g.grad_x[0].imag()) << "i\n";
    std::cout << "dG/dy  = " << db::format_sig(g.grad_x[1].real()) << " + "
              << db::format_sig(g.grad_x[1].imag()) << "i\n";
    std::cout << "est_err= " << db::format_sig(g.est_error) << "\n";
    std::cout << "time_us= " << db::format_sig(us) << "\n";

    int rc = 0;
    if (check) {
        const db::GreensValue gp =
            db::ewald_green(spec, kappa, omega, xv + spec.e1, cfg.ewald);
        const db::Complex phase{std::cos(dot(kappa.k, spec.e1)),
                                std::sin(dot(kappa.k, spec.e1))};
        const double qp = std::abs(gp.value - phase * g.value);
        const db::GreensValue gm = db::ewald_green(spec, kappa, omega, -xv, cfg.ewald);
        const double conj_sym = std::abs(g.value - std::conj(gm.value));
        double rot = 0.0;
        const db::BlochVector K = db::high_symmetry_points(spec).K;
        if (db::norm(kappa.k - K.k) < 1e-12 * un) {
            const db::GreensValue gr =
                db::ewald_green(spec, kappa, omega, db::rotate(xv), cfg.ewald);
            rot = std::abs(g.value - gr.value);
        }
        std::cout << "quasi_periodicity = " << db::format_sig(qp) << "\n";
        std::cout << "conjugate_symmetry = " << db::format_sig(conj_sym) << "\n";
        std::cout << "rotation_at_K = " << db::format_sig(rot) << "\n";
        if (qp > 1e-9 || conj_sym > 1e-9 || rot > 1e-9) rc = 1;
    }
    if (eta_scan) {
        db::EwaldParams p2 = cfg.ewald;
        p2.eta = (cfg.ewald.eta > 0.0 ? cfg.ewald.eta : db::ewald_default_eta(spec)) * 1.5;
        const db::GreensValue g2 = db::ewald_green(spec, kappa, omega, xv, p2);
        std::cout << "two_eta_agreement = " << db::format_sig(std::abs(g.value - g2.value))
                  << "\n";
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"honeycomb-lattice Helmholtz band structures and Dirac points"};
    app.require_subcommand(1);

    CommonFlags fl_bands, fl_dirac, fl_table1, fl_probe;

    CLI::App* bands = app.add_subcommand("bands", "dispersion table along a k-path");
    add_common(bands, fl_bands);

    CLI::App* dirac = app.add_subcommand("dirac", "Dirac-point report (JSON)");
    add_common(dirac, fl_dirac);
    std::vector<int> band_pair;
    dirac->add_option("--band-pair", band_pair, "band pair, e.g. 1 2")->expected(2);

    CLI::App* table1 = app.add_subcommand("table1", "asymptotic-accuracy table (CSV)");
    add_common(table1, fl_table1);
    std::vector<double> eps_list;
    table1->add_option("--eps-list", eps_list, "obstacle radii (default 1/40 1/20 1/10 1/5)");

    CLI::App* probe = app.add_subcommand("greens-probe", "evaluate the lattice Green's function");
    add_common(probe, fl_probe);
    double kx = 0.0, ky = 0.0, omega_n = 0.5, px = 0.1, py = 0.05;
    bool check = false, eta_scan = false;
    probe->add_option("--kx", kx, "Bloch vector x (units 2pi/a)")->required();
    probe->add_option("--ky", ky, "Bloch vector y (units 2pi/a)")->required();
    probe->add_option("--omega", omega_n, "frequency (units 2pi/a)")->required();
    probe->add_option("--x", px, "field point x (units of a)")->required();
    probe->add_option("--y", py, "field point y (units of a)")->required();
    probe->add_flag("--check", check, "run quasi-periodicity/conjugation/rotation checks");
    probe->add_flag("--eta-scan", eta_scan, "report two-eta agreement");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bands->parsed()) return cmd_bands(load_config(fl_bands));
        if (dirac->parsed()) {
            db::RunConfig cfg = load_config(fl_dirac);
            if (band_pair.size() == 2) {
                cfg.band_lo = band_pair[0];
                cfg.band_hi = band_pair[1];
            }
            db::band_group_from_pair(cfg.band_lo, cfg.band_hi);  // validate early
            return cmd_dirac(cfg);
        }
        if (table1->parsed()) {
            db::RunConfig cfg = load_config(fl_table1);
            if (eps_list.empty()) eps_list = {1.0 / 40, 1.0 / 20, 1.0 / 10, 1.0 / 5};
            return cmd_table1(cfg, eps_list);
        }
        if (probe->parsed())
            return cmd_greens_probe(load_config(fl_probe), kx, ky, omega_n, px, py, check,
                                    eta_scan);
    } catch (const db::ConfigError& ex) {
        std::cerr << "config error: " << ex.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "usage error: " << ex.what() << "\n";
        return 2;
    } catch (const db::OnSourcePoint& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}

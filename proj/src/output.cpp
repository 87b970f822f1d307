#include "diracbands/output.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace diracbands {

std::string format_sig(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_band_csv(std::ostream& os, const BandTable& table) {
    os << "s,kx,ky";
    for (int b = 1; b <= table.n_bands; ++b) os << ",band" << b;
    os << "\n";
    for (const BandRow& row : table.rows) {
        os << format_sig(row.s) << ',' << format_sig(row.kx) << ',' << format_sig(row.ky);
        for (int b = 0; b < table.n_bands; ++b) {
            os << ',';
            if (b < int(row.bands.size()) && row.bands[b]) os << format_sig(*row.bands[b]);
        }
        os << "\n";
    }
}

namespace {
nlohmann::json row_to_json(const BandRow& row, int n_bands) {
    nlohmann::json j;
    j["s"] = row.s;
    j["kx"] = row.kx;
    j["ky"] = row.ky;
    nlohmann::json bands = nlohmann::json::array();
    for (int b = 0; b < n_bands; ++b) {
        if (b < int(row.bands.size()) && row.bands[b])
            bands.push_back(*row.bands[b]);
        else
            bands.push_back(nullptr);
    }
    j["bands"] = bands;
    return j;
}
}  // namespace

void write_band_json(std::ostream& os, const BandTable& table) {
    nlohmann::json j = nlohmann::json::array();
    for (const BandRow& row : table.rows) j.push_back(row_to_json(row, table.n_bands));
    os << j.dump(2) << "\n";
}

void write_dirac_json(std::ostream& os, const DiracReport& report) {
    nlohmann::json j;
    j["bc"] = report.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann";
    j["band_pair"] = {report.band_pair.first, report.band_pair.second};
    j["omega_star_numeric"] = report.omega_star_numeric;
    j["omega_star_asymptotic"] = report.omega_star_asymptotic;
    j["multiplicity"] = report.multiplicity;
    j["slope_fit_plus"] = report.slope_fit_plus;
    j["slope_fit_minus"] = report.slope_fit_minus;
    j["slope_theory"] = report.slope_theory;
    j["fit_residual"] = report.fit_residual;
    j["directions_tested"] = report.directions_tested;
    j["isotropy_spread"] = report.isotropy_spread;
    j["quadratic_ratio"] = report.quadratic_ratio;
    j["vertex_gap"] = report.vertex_gap;
    os << j.dump(2) << "\n";
}

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows) {
    os << "epsilon,numeric,asymptotic,error\n";
    for (const Table1Row& r : rows)
        os << format_sig(r.epsilon) << ',' << format_sig(r.numeric) << ','
           << format_sig(r.asymptotic) << ',' << format_sig(r.error) << "\n";
}

}  // namespace diracbands

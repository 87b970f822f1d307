#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "diracbands/dirac.hpp"

namespace diracbands {

/// One dispersion-table row: arclength parameter, Bloch vector and the
/// band frequencies (all in normalized units).
struct BandRow {
    double s = 0.0;
    double kx = 0.0, ky = 0.0;
    std::vector<std::optional<double>> bands;
};

struct BandTable {
    std::vector<BandRow> rows;
    int n_bands = 0;
};

/// 12-significant-digit formatting used by every writer.
std::string format_sig(double x);

void write_band_csv(std::ostream& os, const BandTable& table);
void write_band_json(std::ostream& os, const BandTable& table);

void write_dirac_json(std::ostream& os, const DiracReport& report);

void write_table1_csv(std::ostream& os, const std::vector<Table1Row>& rows);

}  // namespace diracbands

#include "diracbands/config.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

namespace diracbands {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

void apply(RunConfig& cfg, const std::string& section, const std::string& key,
           const std::string& value) {
    const std::string k = section.empty() ? key : section + "." + key;
    if (k == "lattice.a") cfg.a = to_double(k, value);
    else if (k == "lattice.epsilon") cfg.epsilon = to_double(k, value);
    else if (k == "problem.bc") {
        if (value == "dirichlet") cfg.bc = BoundaryCondition::Dirichlet;
        else if (value == "neumann") cfg.bc = BoundaryCondition::Neumann;
        else throw ConfigError("bc must be dirichlet or neumann, got " + value);
    } else if (k == "problem.n_bands") cfg.n_bands = to_int(k, value);
    else if (k == "problem.omega_max") cfg.omega_max = to_double(k, value);
    else if (k == "truncation.n") cfg.n = to_int(k, value);
    else if (k == "truncation.quad_points") cfg.quad_points = to_int(k, value);
    else if (k == "ewald.eta") cfg.ewald.eta = to_double(k, value);
    else if (k == "ewald.target_tol") cfg.ewald.target_tol = to_double(k, value);
    else if (k == "ewald.spectral_radius") cfg.ewald.spectral_radius = to_int(k, value);
    else if (k == "ewald.spatial_radius") cfg.ewald.spatial_radius = to_int(k, value);
    else if (k == "ewald.series_order") cfg.ewald.series_order = to_int(k, value);
    else if (k == "sweep.coarse_per_unit") cfg.coarse_per_unit = to_int(k, value);
    else if (k == "sweep.singular_exclusion") cfg.singular_exclusion = to_double(k, value);
    else if (k == "sweep.zone_halfwidth") cfg.zone_halfwidth = to_double(k, value);
    else if (k == "sweep.root_tol") cfg.root_tol = to_double(k, value);
    else if (k == "sweep.sv_threshold") cfg.sv_threshold = to_double(k, value);
    else if (k == "path.points") cfg.path = split_ws(value);
    else if (k == "path.samples_per_segment") cfg.samples_per_segment = to_int(k, value);
    else if (k == "dirac.band_pair") {
        const auto toks = split_ws(value);
        if (toks.size() != 2) throw ConfigError("band_pair needs two integers");
        cfg.band_lo = to_int(k, toks[0]);
        cfg.band_hi = to_int(k, toks[1]);
    } else if (k == "dirac.radii") {
        cfg.radii.clear();
        for (const auto& t : split_ws(value)) cfg.radii.push_back(to_double(k, t));
    } else if (k == "dirac.directions") cfg.directions = to_int(k, value);
    else if (k == "output.format") cfg.format = value;
    else if (k == "output.path") cfg.out_path = value;
    else throw ConfigError("unknown configuration key '" + k + "'");
}

}  // namespace

void RunConfig::validate() const {
    if (!(a > 0.0)) throw ConfigError("a must be positive");
    if (!(epsilon > 0.0 && 2.0 * epsilon < a))
        throw ConfigError("epsilon must satisfy 0 < 2*epsilon < a");
    if (n < 2) throw ConfigError("truncation n must be >= 2");
    if (quad_points < 4 * n + 4) throw ConfigError("quad_points must be >= 4n+4");
    if (n_bands < 1) throw ConfigError("n_bands must be >= 1");
    if (!(omega_max > 0.0)) throw ConfigError("omega_max must be positive");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (samples_per_segment < 2) throw ConfigError("samples_per_segment must be >= 2");
    if (directions < 3) throw ConfigError("directions must be >= 3");
    if (path.size() < 2) throw ConfigError("path needs at least two points");
    for (double r : radii)
        if (!(r > 0.0)) throw ConfigError("radii must be positive");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        apply(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file: " + file);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

BlochVector resolve_path_point(const LatticeSpec& spec, const std::string& token) {
    const HighSymmetryPoints pts = high_symmetry_points(spec);
    if (token == "Gamma" || token == "G") return pts.Gamma;
    if (token == "M") return pts.M;
    if (token == "K") return pts.K;
    if (token == "Kprime" || token == "K'") return pts.Kprime;
    const auto comma = token.find(',');
    if (comma == std::string::npos)
        throw ConfigError("unknown path point '" + token + "'");
    const double unit = 2.0 * std::numbers::pi / spec.a;
    try {
        const double kx = std::stod(token.substr(0, comma));
        const double ky = std::stod(token.substr(comma + 1));
        return BlochVector{{kx * unit, ky * unit}};
    } catch (const std::exception&) {
        throw ConfigError("bad explicit path point '" + token + "'");
    }
}

}  // namespace diracbands

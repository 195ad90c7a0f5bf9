#include "nlgate/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace nlgate {

std::string format_real(Real value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

Real parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  Real v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("bad number for " + key + ": '" + text + "'");
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw std::invalid_argument("bad integer for " + key + ": '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw std::invalid_argument("bad flag for " + key + ": '" + text + "'");
}

template <class T>
Field field(const char* key, T RunConfig::*member) {
  Field f{key, nullptr, nullptr};
  if constexpr (std::is_same_v<T, Real>) {
    f.get = [member](const RunConfig& c) { return format_real(c.*member); };
    f.set = [member, key](RunConfig& c, const std::string& v) { c.*member = parse_real(key, v); };
  } else if constexpr (std::is_same_v<T, bool>) {
    f.get = [member](const RunConfig& c) { return std::string(c.*member ? "true" : "false"); };
    f.set = [member, key](RunConfig& c, const std::string& v) { c.*member = parse_bool(key, v); };
  } else if constexpr (std::is_same_v<T, std::string>) {
    f.get = [member](const RunConfig& c) { return c.*member; };
    f.set = [member](RunConfig& c, const std::string& v) { c.*member = v; };
  } else {
    f.get = [member](const RunConfig& c) { return std::to_string(c.*member); };
    f.set = [member, key](RunConfig& c, const std::string& v) {
      const long long x = parse_integer(key, v);
      if constexpr (std::is_unsigned_v<T>) {
        if (x < 0) throw std::invalid_argument(std::string(key) + " must be non-negative");
      }
      c.*member = static_cast<T>(x);
    };
  }
  return f;
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      field("x_min_um", &RunConfig::x_min_um),
      field("x_max_um", &RunConfig::x_max_um),
      field("dx_um", &RunConfig::dx_um),
      field("alpha2_hz", &RunConfig::alpha2_hz),
      field("alpha4_hz", &RunConfig::alpha4_hz),
      field("g_hz_um", &RunConfig::g_hz_um),
      field("T_ms", &RunConfig::T_ms),
      field("n_samples", &RunConfig::n_samples),
      field("substeps", &RunConfig::substeps),
      field("modes", &RunConfig::modes),
      field("imaginary_dt_ms", &RunConfig::imaginary_dt_ms),
      field("stationary_tolerance_khz", &RunConfig::stationary_tolerance_khz),
      field("fibonacci_count", &RunConfig::fibonacci_count),
      field("per_state_threshold", &RunConfig::per_state_threshold),
      field("per_state_iterations", &RunConfig::per_state_iterations),
      field("band_cutoff_fraction", &RunConfig::band_cutoff_fraction),
      field("band_first", &RunConfig::band_first),
      field("band_last", &RunConfig::band_last),
      field("fidelity_threshold", &RunConfig::fidelity_threshold),
      field("budget", &RunConfig::budget),
      field("seed", &RunConfig::seed),
      field("search_method", &RunConfig::search_method),
      field("max_modulus_um", &RunConfig::max_modulus_um),
      field("max_excursion_um", &RunConfig::max_excursion_um),
      field("local_iterations", &RunConfig::local_iterations),
      field("local_evaluations", &RunConfig::local_evaluations),
      field("mesh_search", &RunConfig::mesh_search),
      field("mesh_alpha2_min_hz", &RunConfig::mesh_alpha2_min_hz),
      field("mesh_alpha2_max_hz", &RunConfig::mesh_alpha2_max_hz),
      field("mesh_alpha4_min_hz", &RunConfig::mesh_alpha4_min_hz),
      field("mesh_alpha4_max_hz", &RunConfig::mesh_alpha4_max_hz),
      field("mesh_step_hz", &RunConfig::mesh_step_hz),
      field("mesh_max_candidates", &RunConfig::mesh_max_candidates),
      field("stride", &RunConfig::stride),
      field("tau_min_ms", &RunConfig::tau_min_ms),
      field("tau_max_ms", &RunConfig::tau_max_ms),
      field("tau_step_ms", &RunConfig::tau_step_ms),
      field("path_tau_ms", &RunConfig::path_tau_ms),
      field("linear_oracle", &RunConfig::linear_oracle),
      field("g_sweep_hz_um", &RunConfig::g_sweep_hz_um),
      field("threads", &RunConfig::threads),
      field("out_dir", &RunConfig::out_dir),
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

SpatialGrid RunConfig::grid() const {
  const Real cells = (x_max_um - x_min_um) / dx_um;
  const long rounded = std::lround(cells);
  if (std::abs(cells - rounded) > 1e-6 * std::max(1.0, cells))
    throw std::invalid_argument("dx_um does not divide the spatial range");
  return SpatialGrid(x_min_um, x_max_um, static_cast<int>(rounded) + 1);
}

TrapPotential RunConfig::trap() const { return TrapPotential(alpha2_hz, alpha4_hz); }

StationaryOptions RunConfig::stationary() const {
  StationaryOptions o;
  o.imaginary_dt = imaginary_dt_ms;
  o.tolerance = stationary_tolerance_khz;
  return o;
}

GlobalSearchOptions RunConfig::search() const {
  GlobalSearchOptions o;
  o.threshold = fidelity_threshold;
  o.budget = budget;
  o.seed = seed;
  o.max_modulus = max_modulus_um;
  o.local_iterations = local_iterations;
  o.local_evaluations = local_evaluations;
  if (search_method == "quasi-newton") o.method = LocalMethod::QuasiNewton;
  else if (search_method == "nelder-mead") o.method = LocalMethod::NelderMead;
  else throw std::invalid_argument("search_method must be quasi-newton or nelder-mead");
  return o;
}

OptimalControlOptions RunConfig::per_state() const {
  OptimalControlOptions o;
  o.target_fidelity = per_state_threshold;
  o.max_iterations = per_state_iterations;
  return o;
}

MeshDomain RunConfig::mesh() const {
  return {mesh_alpha2_min_hz, mesh_alpha2_max_hz, mesh_alpha4_min_hz, mesh_alpha4_max_hz, mesh_step_hz};
}

RealVector RunConfig::tau_grid() const {
  if (!(tau_step_ms > 0.0) || tau_max_ms < tau_min_ms) throw std::invalid_argument("invalid tau grid");
  const long n = std::lround((tau_max_ms - tau_min_ms) / tau_step_ms) + 1;
  RealVector tau(n);
  for (long i = 0; i < n; ++i) tau[i] = tau_min_ms + tau_step_ms * i;
  return tau;
}

std::vector<Real> RunConfig::g_values() const {
  std::vector<Real> out;
  std::stringstream ss(g_sweep_hz_um);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real("g_sweep_hz_um", trim(item)));
  return out;
}

void RunConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(x_max_um > x_min_um, "x_max_um must exceed x_min_um");
  require(dx_um > 0.0, "dx_um must be positive");
  require(alpha2_hz > 0.0, "alpha2_hz must be positive");
  require(alpha4_hz >= 0.0, "alpha4_hz must be non-negative");
  require(g_hz_um >= 0.0, "g_hz_um must be non-negative");
  require(T_ms > 0.0, "T_ms must be positive");
  require(n_samples >= 3, "n_samples must be at least 3");
  require(substeps >= 1, "substeps must be at least 1");
  require(modes >= 2, "modes must be at least 2");
  require(imaginary_dt_ms > 0.0, "imaginary_dt_ms must be positive");
  require(stationary_tolerance_khz > 0.0, "stationary_tolerance_khz must be positive");
  require(fibonacci_count >= 1, "fibonacci_count must be positive");
  require(per_state_threshold > 0.0 && per_state_threshold <= 1.0, "per_state_threshold must be in (0, 1]");
  require(band_cutoff_fraction > 0.0 && band_cutoff_fraction <= 1.0, "band_cutoff_fraction must be in (0, 1]");
  require((band_first == 0 && band_last == 0) || (band_first >= 1 && band_last >= band_first),
          "band_first/band_last must both be 0 or form a band starting at 1 or above");
  require(fidelity_threshold >= 0.0 && fidelity_threshold <= 1.0, "fidelity_threshold must be in [0, 1]");
  require(budget >= 1, "budget must be positive");
  require(max_modulus_um > 0.0, "max_modulus_um must be positive");
  require(max_excursion_um > 0.0, "max_excursion_um must be positive");
  require(stride >= 1, "stride must be at least 1");
  require(threads >= 0, "threads must be non-negative");
  grid();
  search();
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(config, value);
      return;
    }
  }
  throw std::invalid_argument("unknown config key: " + key);
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(number) + ": expected key=value");
    try {
      set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config line " + std::to_string(number) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(config));
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t basis_key(const RunConfig& config, Real g_hz_um) {
  const SpatialGrid grid = config.grid();
  const StationaryOptions s = config.stationary();
  std::ostringstream key;
  key << "grid " << format_real(grid.x_min()) << ' ' << format_real(grid.x_max()) << ' ' << grid.size()
      << " trap " << format_real(config.alpha2_hz) << ' ' << format_real(config.alpha4_hz) << " g "
      << format_real(g_hz_um) << " modes " << config.modes << " solver " << format_real(s.imaginary_dt) << ' '
      << format_real(s.tolerance) << ' ' << format_real(s.energy_tolerance) << ' ' << s.max_iterations;
  return fnv1a(key.str());
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_basis(const std::filesystem::path& path, const ModeBasis& basis, std::uint64_t key) {
  std::ofstream out = open_output(path);
  out << "# nlgate basis\n";
  out << "# key=" << hex(key) << '\n';
  out << "# x_min_um=" << format_real(basis.grid.x_min()) << '\n';
  out << "# x_max_um=" << format_real(basis.grid.x_max()) << '\n';
  out << "# n_points=" << basis.grid.size() << '\n';
  out << "# alpha2_hz=" << format_real(basis.trap.alpha2()) << '\n';
  out << "# alpha4_hz=" << format_real(basis.trap.alpha4()) << '\n';
  out << "# g_hz_um=" << format_real(basis.g.g_hz_um) << '\n';
  out << "# modes=" << basis.size() << '\n';
  for (int i = 0; i < basis.size(); ++i) {
    out << "# energy_khz_" << i << '=' << format_real(basis.energies[i]) << '\n';
    out << "# chemical_potential_khz_" << i << '=' << format_real(basis.chemical_potentials[i]) << '\n';
  }
  out << "x_um";
  for (int i = 0; i < basis.size(); ++i) out << "\tre_" << i << "\tim_" << i;
  out << '\n';
  for (int j = 0; j < basis.grid.size(); ++j) {
    out << format_real(basis.grid.x(j));
    for (int i = 0; i < basis.size(); ++i)
      out << '\t' << format_real(basis[i][j].real()) << '\t' << format_real(basis[i][j].imag());
    out << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> read_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    out.emplace_back(trim(line.substr(1, eq - 1)), trim(line.substr(eq + 1)));
  }
  return out;
}

namespace {

std::string header_value(const std::vector<std::pair<std::string, std::string>>& header, const std::string& key) {
  for (const auto& [k, v] : header)
    if (k == key) return v;
  throw std::runtime_error("missing header field " + key);
}

}  // namespace

std::optional<ModeBasis> read_basis(const std::filesystem::path& path, std::uint64_t key) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const auto header = read_header(path);
  if (header_value(header, "key") != hex(key)) return std::nullopt;
  const SpatialGrid grid(parse_real("x_min_um", header_value(header, "x_min_um")),
                         parse_real("x_max_um", header_value(header, "x_max_um")),
                         static_cast<int>(parse_integer("n_points", header_value(header, "n_points"))));
  const TrapPotential trap(parse_real("alpha2_hz", header_value(header, "alpha2_hz")),
                           parse_real("alpha4_hz", header_value(header, "alpha4_hz")));
  const Nonlinearity g(parse_real("g_hz_um", header_value(header, "g_hz_um")));
  const int count = static_cast<int>(parse_integer("modes", header_value(header, "modes")));
  ModeBasis basis{grid, trap, g, {}, {}, {}};
  std::vector<ComplexVector> amps(count, ComplexVector::Zero(grid.size()));
  for (int i = 0; i < count; ++i) {
    basis.energies.push_back(parse_real("energy", header_value(header, "energy_khz_" + std::to_string(i))));
    basis.chemical_potentials.push_back(
        parse_real("mu", header_value(header, "chemical_potential_khz_" + std::to_string(i))));
  }
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) {
  }
  for (int j = 0; j < grid.size(); ++j) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated basis file " + path.string());
    std::istringstream row(line);
    Real x = 0.0;
    row >> x;
    for (int i = 0; i < count; ++i) {
      Real re = 0.0, im = 0.0;
      row >> re >> im;
      amps[i][j] = Complex(re, im);
    }
    if (!row) throw std::runtime_error("malformed basis row in " + path.string());
  }
  for (auto& a : amps) basis.modes.emplace_back(grid, std::move(a));
  return basis;
}

ModeBasis cached_basis(const RunConfig& config, Real g_hz_um, bool* hit) {
  const std::uint64_t key = basis_key(config, g_hz_um);
  const auto path = std::filesystem::path(config.out_dir) / "cache" / ("basis-" + hex(key) + ".tsv");
  if (auto cached = read_basis(path, key)) {
    if (hit) *hit = true;
    return std::move(*cached);
  }
  if (hit) *hit = false;
  ModeBasis basis = mode_basis(config.trap(), Nonlinearity(g_hz_um), config.grid(), config.modes,
                               config.stationary());
  write_basis(path, basis, key);
  return basis;
}

RunConfig config_from_output(const std::filesystem::path& path) {
  RunConfig cfg;
  for (const auto& [k, v] : read_header(path)) {
    for (const auto& f : fields()) {
      if (k == f.key) {
        f.set(cfg, v);
        break;
      }
    }
  }
  return cfg;
}

void write_header(std::ostream& out, const RunConfig& config,
                  const std::vector<std::pair<std::string, std::string>>& extra) {
  for (const auto& [k, v] : config_entries(config)) out << "# " << k << '=' << v << '\n';
  for (const auto& [k, v] : extra) out << "# " << k << '=' << v << '\n';
}

void write_spectrum(const std::filesystem::path& path, const ControlSpectrum& spectrum, const RunConfig& config) {
  std::ofstream out = open_output(path);
  write_header(out, config,
               {{"duration_ms", format_real(spectrum.duration())}, {"first_bin", std::to_string(spectrum.first_bin())}});
  out << "bin\tfrequency_khz\tre_um\tim_um\tmodulus_um\tphase_rad\n";
  for (int k = 0; k < spectrum.size(); ++k) {
    const Complex c = spectrum.coefficients()[k];
    out << spectrum.first_bin() + k << '\t' << format_real(spectrum.frequency(k)) << '\t' << format_real(c.real())
        << '\t' << format_real(c.imag()) << '\t' << format_real(std::abs(c)) << '\t' << format_real(std::arg(c))
        << '\n';
  }
}

ControlSpectrum read_spectrum(const std::filesystem::path& path) {
  const auto header = read_header(path);
  const Real duration = parse_real("duration_ms", header_value(header, "duration_ms"));
  const int first = static_cast<int>(parse_integer("first_bin", header_value(header, "first_bin")));
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) {
  }
  std::vector<Complex> coeffs;
  int expected = first;
  int number = static_cast<int>(header.size()) + 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    int bin = 0;
    Real f = 0.0, re = 0.0, im = 0.0;
    row >> bin >> f >> re >> im;
    if (!row) throw std::runtime_error(path.string() + ":" + std::to_string(number) + ": malformed spectrum row");
    if (bin != expected) throw std::runtime_error(path.string() + ": spectrum bins must be contiguous");
    ++expected;
    coeffs.emplace_back(re, im);
  }
  if (coeffs.empty()) throw std::runtime_error(path.string() + ": spectrum has no bins");
  ComplexVector c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[static_cast<Eigen::Index>(i)] = coeffs[i];
  return ControlSpectrum(duration, first, std::move(c));
}

void write_trajectory(const std::filesystem::path& path, const ControlTrajectory& trajectory,
                      const RunConfig& config) {
  std::ofstream out = open_output(path);
  write_header(out, config, {{"duration_ms", format_real(trajectory.duration())}});
  out << "j\tt_ms\tlambda_um\n";
  for (int j = 0; j < trajectory.size(); ++j)
    out << j << '\t' << format_real(trajectory.time(j)) << '\t' << format_real(trajectory[j]) << '\n';
}

void write_heatmap(const std::filesystem::path& path, const SphereFidelityMap& map, const RunConfig& config) {
  std::ofstream out = open_output(path);
  write_header(out, config, {{"map_stride", std::to_string(map.stride)}});
  out << "lat_deg\tlon_deg\tX\tY\tfidelity\tfailed\n";
  for (const auto& c : map.cells) {
    const PlanarPoint p = eckert4_project(c.latitude, c.longitude);
    out << format_real(c.latitude) << '\t' << format_real(c.longitude) << '\t' << format_real(p.x) << '\t'
        << format_real(p.y) << '\t' << (c.failed ? std::string("nan") : format_real(c.fidelity)) << '\t'
        << (c.failed ? 1 : 0) << '\n';
  }
}

void write_fringes(const std::filesystem::path& path, const FringeScan& scan, const RunConfig& config) {
  std::ofstream out = open_output(path);
  write_header(out, config,
               {{"contrast_p0", format_real(scan.contrast_p0)},
                {"contrast_p1", format_real(scan.contrast_p1)},
                {"fringe_frequency_khz", format_real(scan.fringe_frequency_khz)},
                {"max_leakage", format_real(scan.max_leakage)}});
  out << "tau_ms\tp0\tp1\n";
  for (Eigen::Index i = 0; i < scan.tau.size(); ++i)
    out << format_real(scan.tau[i]) << '\t' << format_real(scan.p0[i]) << '\t' << format_real(scan.p1[i]) << '\n';
}

void write_bloch_path(const std::filesystem::path& path, const std::vector<BlochSample>& samples,
                      const RunConfig& config) {
  std::ofstream out = open_output(path);
  write_header(out, config);
  out << "t_ms\tstage\tx\ty\tz\tp0\tp1\tlat_deg\tlon_deg\tX\tY\n";
  for (const auto& s : samples) {
    const Real r = s.xyz.norm();
    const Real lat = r > 0.0 ? std::asin(std::clamp(s.xyz.z() / r, -1.0, 1.0)) * 180.0 / kPi : 0.0;
    const Real lon = std::atan2(s.xyz.y(), s.xyz.x()) * 180.0 / kPi;
    const PlanarPoint p = eckert4_project(lat, lon);
    out << format_real(s.time) << '\t' << stage_name(s.stage) << '\t' << format_real(s.xyz.x()) << '\t'
        << format_real(s.xyz.y()) << '\t' << format_real(s.xyz.z()) << '\t' << format_real(s.p0) << '\t'
        << format_real(s.p1) << '\t' << format_real(lat) << '\t' << format_real(lon) << '\t' << format_real(p.x)
        << '\t' << format_real(p.y) << '\n';
  }
}

nlohmann::json config_json(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : config_entries(config)) j[k] = v;
  return j;
}

nlohmann::json report_json(const FidelityReport& report) {
  return {{"provenance", report.provenance}, {"mean", report.mean},         {"min", report.min},
          {"max", report.max},               {"evaluated", report.fidelities.size()}, {"failed", report.failed}};
}

nlohmann::json map_summary_json(const SphereFidelityMap& map) {
  return {{"stride", map.stride},
          {"cells", map.cells.size()},
          {"F_max", map.max},
          {"F_min", map.min},
          {"F_mean", map.mean},
          {"F_mean_solid_angle", map.solid_angle_mean},
          {"failures", map.failures}};
}

void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << record.dump() << '\n';
}

}  // namespace nlgate

#ifndef NLGATE_IO_HPP
#define NLGATE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nlgate/characterization.hpp"
#include "nlgate/interferometry.hpp"

namespace nlgate {

/// Every knob of a run. Keys in the text form carry their unit; the defaults
/// reproduce the paper configuration.
struct RunConfig {
  Real x_min_um = -1.5;
  Real x_max_um = 1.5;
  Real dx_um = 0.03;
  Real alpha2_hz = 533.0;
  Real alpha4_hz = 7648.0;
  Real g_hz_um = 223.0;
  Real T_ms = 1.0;
  int n_samples = 101;
  int substeps = 4;
  int modes = 4;
  Real imaginary_dt_ms = 1e-3;
  Real stationary_tolerance_khz = 1e-6;

  int fibonacci_count = 24;
  Real per_state_threshold = 0.9999;
  int per_state_iterations = 1000;
  Real band_cutoff_fraction = 0.1;
  /// Explicit band; 0 means derive it from the spectral average.
  int band_first = 0;
  int band_last = 0;
  Real fidelity_threshold = 0.99;
  int budget = 8;
  std::uint64_t seed = 1;
  std::string search_method = "quasi-newton";
  Real max_modulus_um = 0.25;
  Real max_excursion_um = 0.5;
  int local_iterations = 200;
  int local_evaluations = 3000;

  bool mesh_search = false;
  Real mesh_alpha2_min_hz = 500.0;
  Real mesh_alpha2_max_hz = 3000.0;
  Real mesh_alpha4_min_hz = 50.0;
  Real mesh_alpha4_max_hz = 8000.0;
  Real mesh_step_hz = 1.0;
  long mesh_max_candidates = 0;

  int stride = 1;

  Real tau_min_ms = 0.0;
  Real tau_max_ms = 2.0;
  Real tau_step_ms = 0.005;
  /// Free-evolution time of the recorded Bloch path; negative selects half a fringe period.
  Real path_tau_ms = -1.0;
  bool linear_oracle = false;

  std::string g_sweep_hz_um = "0,223,477";

  int threads = 0;
  std::string out_dir = "out";

  SpatialGrid grid() const;
  TrapPotential trap() const;
  Nonlinearity g() const { return Nonlinearity(g_hz_um); }
  StationaryOptions stationary() const;
  GlobalSearchOptions search() const;
  OptimalControlOptions per_state() const;
  MeshDomain mesh() const;
  RealVector tau_grid() const;
  std::vector<Real> g_values() const;

  /// Throws std::invalid_argument if a physical field is out of range.
  void validate() const;
};

/// Environment variable naming the default config file.
inline constexpr const char* kConfigEnv = "NLGATE_CONFIG";

/// Sets one key from its text value; unknown keys throw.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// key=value lines; '#' starts a comment; blank lines ignored.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Config embedded in the header of an output file; extra header fields are skipped.
RunConfig config_from_output(const std::filesystem::path& path);

/// Every key in declaration order as (key, text value).
std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& config);

/// Round-trip text for a double (17 significant digits).
std::string format_real(Real value);

std::uint64_t fnv1a(const std::string& text);

/// Hash of everything the stationary basis depends on.
std::uint64_t basis_key(const RunConfig& config, Real g_hz_um);

void write_basis(const std::filesystem::path& path, const ModeBasis& basis, std::uint64_t key);
/// Empty if the file is missing or was written for a different key.
std::optional<ModeBasis> read_basis(const std::filesystem::path& path, std::uint64_t key);

/// Loads the cached basis under out_dir/cache, or builds and stores it.
/// `hit` reports whether the cache was used.
ModeBasis cached_basis(const RunConfig& config, Real g_hz_um, bool* hit = nullptr);

/// Writes the header block: '# key=value' for the resolved config and any extras.
void write_header(std::ostream& out, const RunConfig& config,
                  const std::vector<std::pair<std::string, std::string>>& extra = {});

/// Reads back the '# key=value' header of a file written by write_header.
std::vector<std::pair<std::string, std::string>> read_header(const std::filesystem::path& path);

void write_spectrum(const std::filesystem::path& path, const ControlSpectrum& spectrum, const RunConfig& config);
ControlSpectrum read_spectrum(const std::filesystem::path& path);

void write_trajectory(const std::filesystem::path& path, const ControlTrajectory& trajectory,
                      const RunConfig& config);

void write_heatmap(const std::filesystem::path& path, const SphereFidelityMap& map, const RunConfig& config);
void write_fringes(const std::filesystem::path& path, const FringeScan& scan, const RunConfig& config);
void write_bloch_path(const std::filesystem::path& path, const std::vector<BlochSample>& samples,
                      const RunConfig& config);

nlohmann::json config_json(const RunConfig& config);
nlohmann::json report_json(const FidelityReport& report);
nlohmann::json map_summary_json(const SphereFidelityMap& map);

/// One JSON object per line.
void append_jsonl(const std::filesystem::path& path, const nlohmann::json& record);

}  // namespace nlgate

#endif  // NLGATE_IO_HPP

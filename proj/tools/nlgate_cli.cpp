#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nlgate/io.hpp"
#include "nlgate/parallel.hpp"

namespace fs = std::filesystem;
using namespace nlgate;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string replay_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;
  std::optional<int> stride;
  std::optional<int> budget;
  std::string spectrum_path;
};

RunConfig resolve(const CommonFlags& flags) {
  RunConfig cfg;
  std::string path = flags.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnv)) path = env;
  }
  if (!flags.replay_path.empty()) cfg = config_from_output(flags.replay_path);
  else if (!path.empty()) cfg = load_config(path);
  for (const auto& kv : flags.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.threads) cfg.threads = *flags.threads;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.stride) cfg.stride = *flags.stride;
  if (flags.budget) cfg.budget = *flags.budget;
  cfg.validate();
  return cfg;
}

int worker_count(const RunConfig& cfg) { return cfg.threads > 0 ? cfg.threads : default_threads(); }

ControlSetup make_setup(const RunConfig& cfg, ModeBasis basis) {
  ControlSetup setup{std::move(basis)};
  setup.duration = cfg.T_ms;
  setup.samples = cfg.n_samples;
  setup.evolve.substeps = cfg.substeps;
  setup.max_excursion = cfg.max_excursion_um;
  setup.threads = worker_count(cfg);
  return setup;
}

fs::path out_path(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.out_dir) / name; }

fs::path spectrum_path(const RunConfig& cfg, const CommonFlags& flags) {
  return flags.spectrum_path.empty() ? out_path(cfg, "spectrum.tsv") : fs::path(flags.spectrum_path);
}

void write_json(const fs::path& path, const nlohmann::json& record) {
  if (fs::exists(path)) fs::remove(path);
  append_jsonl(path, record);
}

int cmd_basis(const RunConfig& cfg) {
  const fs::path table = out_path(cfg, "basis.tsv");
  fs::create_directories(cfg.out_dir);
  std::ofstream out(table);
  write_header(out, cfg);
  out << "g_hz_um\tmode\tenergy_khz\tchemical_potential_khz\tspacing_khz\n";
  nlohmann::json record = {{"command", "basis"}, {"config", config_json(cfg)}, {"bases", nlohmann::json::array()}};
  std::vector<Real> gs = {0.0};
  if (cfg.g_hz_um != 0.0) gs.push_back(cfg.g_hz_um);
  for (Real g : gs) {
    bool hit = false;
    const ModeBasis basis = cached_basis(cfg, g, &hit);
    nlohmann::json entry = {{"g_hz_um", g}, {"cache_hit", hit}, {"energies_khz", basis.energies},
                            {"chemical_potentials_khz", basis.chemical_potentials}};
    for (int i = 0; i < basis.size(); ++i) {
      const Real spacing = i > 0 ? basis.energies[i] - basis.energies[i - 1] : 0.0;
      out << format_real(g) << '\t' << i << '\t' << format_real(basis.energies[i]) << '\t'
          << format_real(basis.chemical_potentials[i]) << '\t' << format_real(spacing) << '\n';
    }
    std::cout << "g=" << g << " Hz um:";
    for (Real e : basis.energies) std::cout << ' ' << e;
    std::cout << " kHz (splitting " << basis.qubit_splitting() << " kHz)" << (hit ? " [cached]" : "") << '\n';
    record["bases"].push_back(entry);
  }
  write_json(out_path(cfg, "basis.jsonl"), record);
  return 0;
}

int cmd_design(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const GateSpec gate = GateSpec::hadamard();
  const FibonacciLattice lattice = fibonacci_lattice(cfg.fibonacci_count);
  ControlSetup setup = make_setup(cfg, cached_basis(cfg, cfg.g_hz_um));
  nlohmann::json record = {{"command", "design"}, {"config", config_json(cfg)}};

  FrequencyBand band{cfg.band_first, cfg.band_last};
  GlobalSearchOptions search = cfg.search();
  if (cfg.band_first == 0) {
    const StageOneResult stage = per_state_stage(setup, gate, lattice, cfg.per_state());
    std::ofstream avg(out_path(cfg, "spectral_average.tsv"));
    write_header(avg, cfg);
    avg << "bin\tfrequency_khz\tLambda_um\n";
    for (Eigen::Index k = 0; k < stage.average.values.size(); ++k) {
      const int bin = static_cast<int>(k) + 1;
      avg << bin << '\t' << format_real(stage.average.frequency(bin)) << '\t'
          << format_real(stage.average.values[k]) << '\n';
    }
    std::vector<Real> per_state;
    for (const auto& c : stage.controls) per_state.push_back(c.fidelity);
    band = select_band(stage.average, relative_cutoff(stage.average, cfg.band_cutoff_fraction));
    search.initial_moduli = band_moduli(stage.average, band);
    record["per_state"] = {{"fidelities", per_state},
                           {"all_converged", stage.all_converged},
                           {"peak_bin", stage.average.peak_bin()},
                           {"peak_frequency_khz", stage.average.frequency(stage.average.peak_bin())}};
    std::cout << "per-state controls: " << (stage.all_converged ? "all converged" : "some below threshold")
              << ", spectral peak at " << stage.average.frequency(stage.average.peak_bin()) << " kHz\n";
  }
  record["band"] = {{"first", band.first}, {"last", band.last}};
  std::cout << "search band: bins " << band.first << ".." << band.last << '\n';

  GlobalSearchResult result = global_search(setup, band, gate, lattice, search);
  RunConfig used = cfg;
  if (!result.feasible && cfg.mesh_search) {
    MeshSearchOptions mesh;
    mesh.lattice_size = cfg.fibonacci_count;
    mesh.per_state_threshold = cfg.per_state_threshold;
    mesh.control = cfg.per_state();
    mesh.band_cutoff_fraction = cfg.band_cutoff_fraction;
    mesh.search = cfg.search();
    mesh.stationary = cfg.stationary();
    mesh.modes = cfg.modes;
    mesh.max_candidates = cfg.mesh_max_candidates;
    const MeshSearchResult m = alpha_mesh_search(cfg.grid(), cfg.g(), setup, gate, cfg.mesh(), mesh);
    record["mesh"] = {{"candidates", m.candidates}, {"feasible", m.feasible}};
    if (m.search && m.search->report.mean > result.report.mean) {
      result = *m.search;
      band = m.band;
      used.alpha2_hz = m.trap->alpha2();
      used.alpha4_hz = m.trap->alpha4();
      record["band"] = {{"first", band.first}, {"last", band.last}};
    }
  }

  write_spectrum(out_path(cfg, "spectrum.tsv"), result.spectrum, used);
  write_trajectory(out_path(cfg, "trajectory.tsv"), synthesize_trajectory(result.spectrum, cfg.n_samples), used);
  record["alpha2_hz"] = used.alpha2_hz;
  record["alpha4_hz"] = used.alpha4_hz;
  record["feasible"] = result.feasible;
  record["starts"] = result.starts;
  record["evaluations"] = result.evaluations;
  record["report"] = report_json(result.report);
  write_json(out_path(cfg, "design.jsonl"), record);
  std::cout << "design: mean fidelity " << result.report.mean << " (min " << result.report.min << ") over M="
            << lattice.count << ", " << (result.feasible ? "feasible" : "NOT feasible") << " after "
            << result.starts << " start(s), "
            << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
  return result.feasible ? 0 : 1;
}

int cmd_characterize(const RunConfig& cfg, const CommonFlags& flags) {
  const fs::path spath = spectrum_path(cfg, flags);
  if (!fs::exists(spath)) throw std::runtime_error("spectrum file not found: " + spath.string());
  const ControlSpectrum spectrum = read_spectrum(spath);
  ControlSetup setup = make_setup(cfg, cached_basis(cfg, cfg.g_hz_um));
  const SphereFidelityMap map =
      fidelity_heatmap(setup, synthesize_trajectory(spectrum, cfg.n_samples), GateSpec::hadamard(), cfg.stride);
  write_heatmap(out_path(cfg, "heatmap.tsv"), map, cfg);
  nlohmann::json record = {{"command", "characterize"},
                           {"config", config_json(cfg)},
                           {"spectrum", spath.string()},
                           {"summary", map_summary_json(map)}};
  write_json(out_path(cfg, "stats.jsonl"), record);
  std::cout << "map (" << map.cells.size() << " cells): F_max " << map.max << ", F_min " << map.min << ", mean "
            << map.mean << ", solid-angle mean " << map.solid_angle_mean << ", failures " << map.failures << '\n';
  return map.failures == 0 ? 0 : 1;
}

int cmd_ramsey(const RunConfig& cfg, const CommonFlags& flags) {
  const ModeBasis basis = cached_basis(cfg, cfg.g_hz_um);
  std::optional<RamseyPulse> pulse;
  if (cfg.linear_oracle) {
    pulse = RamseyPulse::exact(GateSpec::hadamard());
  } else {
    const fs::path spath = spectrum_path(cfg, flags);
    if (!fs::exists(spath)) throw std::runtime_error("spectrum file not found: " + spath.string());
    EvolveOptions evolve;
    evolve.substeps = cfg.substeps;
    pulse = RamseyPulse::shake(synthesize_trajectory(read_spectrum(spath), cfg.n_samples), evolve);
  }
  const RealVector taus = cfg.tau_grid();
  nlohmann::json record = {{"command", "ramsey"}, {"config", config_json(cfg)}, {"linear_oracle", cfg.linear_oracle}};
  bool ok = true;
  Real path_tau = cfg.path_tau_ms;
  if (taus.size() == 1) {
    const RamseyResult r = ramsey_run(basis, *pulse, taus[0]);
    record["tau_ms"] = taus[0];
    record["p0"] = r.p0;
    record["p1"] = r.p1;
    std::cout << "tau=" << taus[0] << " ms: p0 " << r.p0 << ", p1 " << r.p1 << '\n';
    if (path_tau < 0.0) path_tau = taus[0];
  } else {
    const FringeScan scan = ramsey_scan(basis, *pulse, taus, worker_count(cfg));
    write_fringes(out_path(cfg, "fringes.tsv"), scan, cfg);
    record["contrast_p0"] = scan.contrast_p0;
    record["contrast_p1"] = scan.contrast_p1;
    record["fringe_frequency_khz"] = scan.fringe_frequency_khz;
    record["qubit_splitting_khz"] = basis.qubit_splitting();
    record["max_leakage"] = scan.max_leakage;
    std::cout << "fringe frequency " << scan.fringe_frequency_khz << " kHz (splitting " << basis.qubit_splitting()
              << " kHz), contrast p0 " << scan.contrast_p0 << ", p1 " << scan.contrast_p1 << '\n';
    if (cfg.linear_oracle) {
      Real worst = 0.0;
      for (Eigen::Index i = 0; i < taus.size(); ++i) {
        const Real c = std::cos(kPi * basis.qubit_splitting() * taus[i]);
        worst = std::max(worst, std::abs(scan.p0[i] - c * c));
      }
      record["oracle_max_deviation"] = worst;
      ok = worst < 0.01;
      std::cout << "closed-form deviation " << worst << (ok ? " (within 1%)" : " (exceeds 1%)") << '\n';
    }
    if (path_tau < 0.0) path_tau = 0.5 / scan.fringe_frequency_khz;
  }
  RamseyOptions rec;
  rec.record = true;
  const RamseyResult run = ramsey_run(basis, *pulse, path_tau, rec);
  write_bloch_path(out_path(cfg, "bloch_path.tsv"), bloch_path(run), cfg);
  record["path_tau_ms"] = path_tau;
  record["path_final"] = {{"p0", run.p0}, {"p1", run.p1}};
  write_json(out_path(cfg, "ramsey.jsonl"), record);
  return ok ? 0 : 1;
}

int cmd_sweep_g(const RunConfig& cfg) {
  if (cfg.band_first == 0) throw std::invalid_argument("sweep-g needs an explicit band (band_first, band_last)");
  ControlSetup setup = make_setup(cfg, cached_basis(cfg, cfg.g_hz_um));
  GSweepOptions opts;
  opts.search = cfg.search();
  opts.lattice_size = cfg.fibonacci_count;
  opts.map_stride = cfg.stride;
  opts.modes = cfg.modes;
  opts.stationary = cfg.stationary();
  const auto rows = g_sweep(setup, cfg.trap(), GateSpec::hadamard(), {cfg.band_first, cfg.band_last},
                            cfg.g_values(), opts);
  fs::create_directories(cfg.out_dir);
  std::ofstream out(out_path(cfg, "g_sweep.tsv"));
  write_header(out, cfg);
  out << "g_hz_um\tsplitting_khz\tlattice_mean\tfeasible\tmap_mean\tmap_min\tmap_max\tmap_solid_angle_mean\n";
  nlohmann::json record = {{"command", "sweep-g"}, {"config", config_json(cfg)}, {"rows", nlohmann::json::array()}};
  for (const auto& r : rows) {
    out << format_real(r.g_hz_um) << '\t' << format_real(r.qubit_splitting_khz) << '\t'
        << format_real(r.search.report.mean) << '\t' << (r.search.feasible ? 1 : 0) << '\t' << format_real(r.map.mean)
        << '\t' << format_real(r.map.min) << '\t' << format_real(r.map.max) << '\t'
        << format_real(r.map.solid_angle_mean) << '\n';
    record["rows"].push_back({{"g_hz_um", r.g_hz_um},
                              {"lattice", report_json(r.search.report)},
                              {"map", map_summary_json(r.map)}});
    std::cout << "g=" << r.g_hz_um << ": lattice mean " << r.search.report.mean << ", map mean " << r.map.mean
              << '\n';
  }
  write_json(out_path(cfg, "g_sweep.jsonl"), record);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlinear single-qubit gates on a shaken 1D condensate"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonFlags flags;
  app.add_option("--config", flags.config_path,
                 std::string("key=value config file (default: $") + kConfigEnv + ")");
  app.add_option("--replay", flags.replay_path, "Take the config embedded in an output file")
      ->excludes("--config");
  app.add_option("--set", flags.overrides, "Override a config key, e.g. --set g_hz_um=0");
  app.add_option("--seed", flags.seed, "Search seed");
  app.add_option("--threads", flags.threads, "Worker threads (0 = all cores)");
  app.add_option("--out-dir", flags.out_dir, "Output directory");

  auto* basis = app.add_subcommand("basis", "Stationary modes and level spacings (cached)");
  auto* design = app.add_subcommand("design", "Per-state controls, band selection and global search");
  design->add_option("--budget", flags.budget, "Number of search starts");
  auto* characterize = app.add_subcommand("characterize", "Whole-sphere fidelity map of a spectrum");
  characterize->add_option("--stride", flags.stride, "Evaluate every k-th degree cell");
  characterize->add_option("--spectrum", flags.spectrum_path, "Spectrum file (default: <out-dir>/spectrum.tsv)");
  auto* ramsey = app.add_subcommand("ramsey", "Ramsey fringe scan and Bloch path");
  ramsey->add_option("--spectrum", flags.spectrum_path, "Spectrum file (default: <out-dir>/spectrum.tsv)");
  auto* sweep = app.add_subcommand("sweep-g", "Best mean fidelity across nonlinearities");
  sweep->add_option("--budget", flags.budget, "Number of search starts per g");
  sweep->add_option("--stride", flags.stride, "Map stride for each g");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = resolve(flags);
    if (*basis) return cmd_basis(cfg);
    if (*design) return cmd_design(cfg);
    if (*characterize) return cmd_characterize(cfg, flags);
    if (*ramsey) return cmd_ramsey(cfg, flags);
    if (*sweep) return cmd_sweep_g(cfg);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

#include "doctest.h"
#include "fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "nlgate/io.hpp"

using namespace nlgate;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("nlgate-" + name + "-" + std::to_string(rd()));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("default config describes the paper trap and validates") {
  const RunConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.grid().size() == 101);
  CHECK(cfg.grid().dx() == doctest::Approx(0.03));
  CHECK(cfg.g_values() == std::vector<Real>{0.0, 223.0, 477.0});
  CHECK(cfg.tau_grid().size() == 401);
  CHECK(cfg.search().method == LocalMethod::QuasiNewton);
}

TEST_CASE("config text overrides defaults and ignores comments") {
  std::istringstream in("# trap\nalpha2_hz = 600\n\n g_hz_um=0 # linear\nsearch_method=nelder-mead\nmesh_search=true\n");
  const RunConfig cfg = parse_config(in);
  CHECK(cfg.alpha2_hz == 600.0);
  CHECK(cfg.g_hz_um == 0.0);
  CHECK(cfg.mesh_search);
  CHECK(cfg.search().method == LocalMethod::NelderMead);
  CHECK(cfg.alpha4_hz == 7648.0);
}

TEST_CASE("bad config input is rejected") {
  RunConfig cfg;
  CHECK_THROWS_AS(set_config_value(cfg, "no_such_key", "1"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "budget", "2.5"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "T_ms", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(set_config_value(cfg, "mesh_search", "maybe"), std::invalid_argument);
  std::istringstream missing_eq("alpha2_hz 600\n");
  CHECK_THROWS_AS(parse_config(missing_eq), std::invalid_argument);

  RunConfig bad;
  bad.dx_um = 0.07;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.alpha2_hz = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.band_first = 3;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.search_method = "annealing";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/nlgate.cfg"), std::runtime_error);
}

TEST_CASE("config entries round-trip through text") {
  RunConfig cfg;
  cfg.alpha4_hz = 1234.5678901234567;
  cfg.seed = 987654321987ULL;
  cfg.g_sweep_hz_um = "0,100";
  std::ostringstream text;
  for (const auto& [k, v] : config_entries(cfg)) text << k << '=' << v << '\n';
  std::istringstream in(text.str());
  const RunConfig back = parse_config(in);
  CHECK(back.alpha4_hz == cfg.alpha4_hz);
  CHECK(back.seed == cfg.seed);
  CHECK(back.g_sweep_hz_um == "0,100");
  CHECK(std::stod(format_real(0.1)) == 0.1);
}

TEST_CASE("FNV-1a hash matches reference values") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  RunConfig a, b;
  b.seed = 99;  // not part of the basis
  CHECK(basis_key(a, 223.0) == basis_key(b, 223.0));
  b.alpha2_hz = 534.0;
  CHECK(basis_key(a, 223.0) != basis_key(b, 223.0));
  CHECK(basis_key(a, 223.0) != basis_key(a, 0.0));
}

TEST_CASE("spectrum file round trip and header replay") {
  const fs::path dir = scratch_dir("spectrum");
  RunConfig cfg;
  cfg.budget = 5;
  cfg.band_first = 2;
  cfg.band_last = 4;
  ComplexVector c(3);
  c << Complex(0.1, -0.2), Complex(1.0 / 3.0, 0.0), Complex(-1e-9, 0.25);
  const ControlSpectrum s(1.0, 2, c);
  write_spectrum(dir / "spectrum.tsv", s, cfg);
  const ControlSpectrum back = read_spectrum(dir / "spectrum.tsv");
  CHECK(back.first_bin() == 2);
  CHECK(back.duration() == 1.0);
  CHECK(back.coefficients() == c);
  const RunConfig replay = config_from_output(dir / "spectrum.tsv");
  CHECK(replay.budget == 5);
  CHECK(replay.band_last == 4);
  fs::remove_all(dir);
}

TEST_CASE("basis cache returns the stored modes") {
  const fs::path dir = scratch_dir("cache");
  RunConfig cfg;
  cfg.dx_um = 0.06;
  cfg.out_dir = dir.string();
  bool hit = true;
  const ModeBasis first = cached_basis(cfg, 223.0, &hit);
  CHECK_FALSE(hit);
  const ModeBasis second = cached_basis(cfg, 223.0, &hit);
  CHECK(hit);
  REQUIRE(second.size() == first.size());
  for (int i = 0; i < first.size(); ++i) CHECK((second[i].amplitudes() - first[i].amplitudes()).norm() == 0.0);
  CHECK(second.energies == first.energies);
  CHECK(second.chemical_potentials == first.chemical_potentials);
  CHECK_FALSE(read_basis(dir / "missing.tsv", 1).has_value());
  fs::remove_all(dir);
}

TEST_CASE("heat map and Bloch path files carry projected columns") {
  const fs::path dir = scratch_dir("tables");
  SphereFidelityMap map;
  map.cells = {{0, 0, -179.5, -89.5, 0.9, false}, {1, 0, -178.5, -89.5, 0.0, true}};
  write_heatmap(dir / "heatmap.tsv", map, RunConfig{});
  std::ifstream in(dir / "heatmap.tsv");
  std::string line;
  while (std::getline(in, line) && line.rfind("#", 0) == 0) {
  }
  CHECK(line == "lat_deg\tlon_deg\tX\tY\tfidelity\tfailed");
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.find("nan") != std::string::npos);

  std::vector<BlochSample> path{{0.0, RamseyStage::Pulse1, {0, 0, 1}, 1, 0}, {1.5, RamseyStage::Free, {1, 0, 0}, 0.5, 0.5}};
  write_bloch_path(dir / "path.tsv", path, RunConfig{});
  std::ifstream p(dir / "path.tsv");
  while (std::getline(p, line) && line.rfind("#", 0) == 0) {
  }
  CHECK(line == "t_ms\tstage\tx\ty\tz\tp0\tp1\tlat_deg\tlon_deg\tX\tY");
  std::getline(p, line);
  CHECK(line.find("\tpulse1\t") != std::string::npos);
  std::getline(p, line);
  CHECK(line.find("\tfree\t") != std::string::npos);
  fs::remove_all(dir);
}

#include "nlgate/characterization.hpp"

#include <cmath>
#include <stdexcept>

#include "nlgate/parallel.hpp"

namespace nlgate {

namespace {

Real radians(Real deg) { return deg * kPi / 180.0; }

}  // namespace

QubitState cell_state(Real latitude_deg, Real longitude_deg) {
  return QubitState(radians(90.0 - latitude_deg), radians(longitude_deg));
}

SphereFidelityMap fidelity_heatmap(const ControlSetup& setup, const ControlTrajectory& trajectory,
                                   const GateSpec& gate, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be at least 1");
  SphereFidelityMap map;
  map.stride = stride;
  for (int j = 0; j < kLatitudeCells; j += stride) {
    for (int i = 0; i < kLongitudeCells; i += stride) {
      map.cells.push_back({i, j, -179.5 + i, -89.5 + j, 0.0, false});
    }
  }
  const int count = static_cast<int>(map.cells.size());
  ControlSetup inner = setup;
  inner.threads = 1;
  parallel_for(count, setup.threads, [&](int k) {
    FidelityCell& c = map.cells[k];
    try {
      c.fidelity = gate_fidelity(inner, trajectory, gate, cell_state(c.latitude, c.longitude));
    } catch (const SolverError&) {
      c.failed = true;
    }
  });

  Real sum = 0.0;
  Real weighted = 0.0;
  Real weights = 0.0;
  int good = 0;
  map.max = -1.0;
  map.min = 2.0;
  for (const auto& c : map.cells) {
    if (c.failed) {
      ++map.failures;
      continue;
    }
    ++good;
    sum += c.fidelity;
    const Real w = std::cos(radians(c.latitude));
    weighted += w * c.fidelity;
    weights += w;
    map.max = std::max(map.max, c.fidelity);
    map.min = std::min(map.min, c.fidelity);
  }
  if (good == 0) throw SolverError("every map cell failed", 0.0);
  map.mean = sum / good;
  map.solid_angle_mean = weighted / weights;
  return map;
}

PlanarPoint eckert4_project(Real latitude_deg, Real longitude_deg) {
  if (!(latitude_deg >= -90.0 && latitude_deg <= 90.0) || !(longitude_deg >= -180.0 && longitude_deg <= 180.0))
    throw std::invalid_argument("coordinates outside the sphere");
  const Real phi = radians(latitude_deg);
  const Real lambda = radians(longitude_deg);
  const Real target = (2.0 + 0.5 * kPi) * std::sin(phi);
  int iterations = 0;
  Real theta;
  if (std::abs(latitude_deg) == 90.0) {
    theta = std::copysign(0.5 * kPi, phi);
  } else {
    // Newton on theta + sin(theta) cos(theta) + 2 sin(theta) = target. The
    // derivative 2 cos(theta) (1 + cos(theta)) vanishes at the poles, where the
    // root is double; a bracket keeps the iteration inside (-pi/2, pi/2).
    Real lo = -0.5 * kPi;
    Real hi = 0.5 * kPi;
    theta = 0.5 * phi;
    for (iterations = 1; iterations <= 50; ++iterations) {
      const Real s = std::sin(theta);
      const Real c = std::cos(theta);
      const Real f = theta + s * c + 2.0 * s - target;
      if (f == 0.0) break;
      if (f > 0.0) hi = theta;
      else lo = theta;
      const Real d = 2.0 * c * (1.0 + c);
      Real next = d > 0.0 ? theta - f / d : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const Real delta = std::abs(next - theta);
      theta = next;
      if (delta < 1e-10 || hi - lo < 1e-10) break;
    }
    iterations = std::min(iterations, 50);
  }
  const Real cx = 2.0 / std::sqrt(kPi * (4.0 + kPi));
  const Real cy = 2.0 * std::sqrt(kPi / (4.0 + kPi));
  return {cx * lambda * (1.0 + std::cos(theta)), cy * std::sin(theta), iterations};
}

std::vector<GSweepRow> g_sweep(const ControlSetup& time_mesh, const TrapPotential& trap, const GateSpec& gate,
                               const FrequencyBand& band, const std::vector<Real>& g_values_hz_um,
                               const GSweepOptions& options) {
  if (g_values_hz_um.size() < 2) throw std::invalid_argument("a sweep needs at least two values of g");
  const FibonacciLattice lattice = fibonacci_lattice(options.lattice_size);
  // Every g spends the whole budget so the best values are comparable.
  GlobalSearchOptions search_options = options.search;
  search_options.threshold = 1.0;
  std::vector<GSweepRow> rows;
  for (Real g_value : g_values_hz_um) {
    ControlSetup setup = time_mesh;
    const Nonlinearity g(g_value);
    setup.basis = mode_basis(trap, g, time_mesh.basis.grid, options.modes, options.stationary);
    GlobalSearchResult search = global_search(setup, band, gate, lattice, search_options);
    SphereFidelityMap map =
        fidelity_heatmap(setup, synthesize_trajectory(search.spectrum, setup.samples), gate, options.map_stride);
    rows.push_back({g_value, setup.basis.qubit_splitting(), std::move(search), std::move(map)});
  }
  return rows;
}

}  // namespace nlgate

#ifndef NLGATE_CHARACTERIZATION_HPP
#define NLGATE_CHARACTERIZATION_HPP

#include <vector>

#include "nlgate/search.hpp"

namespace nlgate {

inline constexpr int kLongitudeCells = 360;
inline constexpr int kLatitudeCells = 180;

/// One-degree cell; centers at -179.5 .. 179.5 (longitude) and -89.5 .. 89.5 (latitude).
struct FidelityCell {
  int lon_index = 0;
  int lat_index = 0;
  Real longitude = 0.0;  // deg
  Real latitude = 0.0;   // deg
  Real fidelity = 0.0;
  bool failed = false;
};

/// Input state of a cell: theta = 90 deg - latitude, phi = longitude.
QubitState cell_state(Real latitude_deg, Real longitude_deg);

struct SphereFidelityMap {
  /// Every `stride`-th cell in each direction; stride 1 covers all 64,800 cells.
  int stride = 1;
  /// Row-major: latitude outer (south to north), longitude inner (west to east).
  std::vector<FidelityCell> cells;
  Real max = 0.0;
  Real min = 0.0;
  /// Plain mean over evaluated cells.
  Real mean = 0.0;
  /// Mean weighted by the solid angle of each cell.
  Real solid_angle_mean = 0.0;
  int failures = 0;
};

SphereFidelityMap fidelity_heatmap(const ControlSetup& setup, const ControlTrajectory& trajectory,
                                   const GateSpec& gate, int stride = 1);

struct PlanarPoint {
  Real x = 0.0;
  Real y = 0.0;
  int iterations = 0;
};

/// Equal-area Eckert IV projection of the unit sphere (degrees in).
PlanarPoint eckert4_project(Real latitude_deg, Real longitude_deg);

struct GSweepRow {
  Real g_hz_um = 0.0;
  Real qubit_splitting_khz = 0.0;
  GlobalSearchResult search;
  /// Map statistics of the best spectrum for this g (stride as requested).
  SphereFidelityMap map;
};

struct GSweepOptions {
  GlobalSearchOptions search{};
  int lattice_size = 24;
  int map_stride = 1;
  int modes = 4;
  StationaryOptions stationary{};
};

/// Rebuild the basis for each g and rerun the global search with the same
/// budget and seed, then characterize the result on the sphere. The search
/// threshold is ignored: every g runs its full budget.
std::vector<GSweepRow> g_sweep(const ControlSetup& time_mesh, const TrapPotential& trap, const GateSpec& gate,
                               const FrequencyBand& band, const std::vector<Real>& g_values_hz_um,
                               const GSweepOptions& options);

}  // namespace nlgate

#endif  // NLGATE_CHARACTERIZATION_HPP

#ifndef NLGATE_SEARCH_HPP
#define NLGATE_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nlgate/optimal_control.hpp"

namespace nlgate {

/// Lambda_i = mean over trajectories of |lambda~_i|, bins 1 .. top (index 0 is bin 1).
struct SpectralAverage {
  Real duration = 0.0;
  RealVector values;
  Real frequency(int bin) const { return bin / duration; }
  /// Bin (>= 1) with the largest average modulus.
  int peak_bin() const;
};

SpectralAverage spectral_average(const std::vector<ControlTrajectory>& trajectories);

/// Smallest contiguous band containing every bin with Lambda_i >= cutoff.
FrequencyBand select_band(const SpectralAverage& average, Real cutoff);

/// Lambda_i over the bins of `band` (zero beyond the averaged range).
RealVector band_moduli(const SpectralAverage& average, const FrequencyBand& band);

/// Default cutoff: a fraction of the largest Lambda_i.
Real relative_cutoff(const SpectralAverage& average, Real fraction = 0.1);

/// Derivative-free simplex minimizer with adaptive coefficients.
struct NelderMeadOptions {
  int max_evaluations = 2000;
  Real initial_step = 0.1;
  Real tolerance = 1e-10;
};

struct NelderMeadResult {
  RealVector x;
  Real value = 0.0;
  int evaluations = 0;
};

NelderMeadResult nelder_mead(const std::function<Real(const RealVector&)>& objective, RealVector x0,
                             const RealVector& steps, const NelderMeadOptions& options,
                             const std::function<bool(Real)>& stop = {});

enum class LocalMethod { NelderMead, QuasiNewton };

struct GlobalSearchOptions {
  Real threshold = 0.99;
  /// Number of local refinements (multi-start count).
  int budget = 8;
  std::uint64_t seed = 1;
  Real max_modulus = 0.25;  // um
  /// Modulus of the equal-support first start.
  Real initial_modulus = 0.02;
  /// Per-bin moduli of the first start (zero phases) in place of equal
  /// support, typically the spectral average over the band.
  RealVector initial_moduli;
  LocalMethod method = LocalMethod::QuasiNewton;
  int local_evaluations = 3000;
  int local_iterations = 200;
};

struct GlobalSearchResult {
  ControlSpectrum spectrum;
  FidelityReport report;
  bool feasible = false;
  int starts = 0;
  int evaluations = 0;
};

/// Multi-start local maximization of the lattice-averaged gate fidelity over
/// the complex coefficient of every bin in `band`, each modulus bounded by
/// max_modulus. The first start has zero phases and either the given
/// initial_moduli or equal support (initial_modulus) on every bin; later
/// starts come from a shifted Halton sequence. Returns the first candidate
/// meeting the threshold, else the best found.
GlobalSearchResult global_search(const ControlSetup& setup, const FrequencyBand& band, const GateSpec& gate,
                                 const FibonacciLattice& lattice, const GlobalSearchOptions& options);

/// Average fidelity over inputs and its gradient with respect to the band
/// coefficients (real parts then imaginary parts).
Real average_fidelity_gradient(const ControlSetup& setup, const ControlSpectrum& spectrum, const GateSpec& gate,
                               const std::vector<QubitState>& inputs, RealVector& gradient);

/// Low-discrepancy point in [0,1)^d: Halton radical inverse shifted by `shift` mod 1.
RealVector halton_point(int index, const RealVector& shift);

struct MeshDomain {
  Real alpha2_min = 500.0;
  Real alpha2_max = 3000.0;
  Real alpha4_min = 50.0;
  Real alpha4_max = 8000.0;
  Real step = 1.0;
};

struct MeshSearchOptions {
  int lattice_size = 24;
  Real per_state_threshold = 0.9999;
  OptimalControlOptions control{};
  Real band_cutoff_fraction = 0.1;
  GlobalSearchOptions search{};
  StationaryOptions stationary{};
  int modes = 4;
  /// Stop after this many mesh points (0 = whole domain).
  long max_candidates = 0;
};

struct StageOneResult {
  std::vector<OptimalControlResult> controls;
  SpectralAverage average;
  bool all_converged = false;
};

/// Per-state optimal controls for every lattice input, followed by spectral averaging.
StageOneResult per_state_stage(const ControlSetup& setup, const GateSpec& gate, const FibonacciLattice& lattice,
                               const OptimalControlOptions& options);

struct MeshSearchResult {
  std::optional<TrapPotential> trap;
  std::optional<GlobalSearchResult> search;
  FrequencyBand band;
  bool feasible = false;
  long candidates = 0;
};

/// Row-major sweep of (alpha2, alpha4) from the domain corner; the first
/// trap whose per-state controls all succeed and whose global search is
/// feasible is returned.
MeshSearchResult alpha_mesh_search(const SpatialGrid& grid, Nonlinearity g, const ControlSetup& time_mesh,
                                   const GateSpec& gate, const MeshDomain& domain,
                                   const MeshSearchOptions& options);

}  // namespace nlgate

#endif  // NLGATE_SEARCH_HPP

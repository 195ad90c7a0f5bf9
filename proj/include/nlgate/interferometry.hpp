#ifndef NLGATE_INTERFEROMETRY_HPP
#define NLGATE_INTERFEROMETRY_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "nlgate/fidelity.hpp"

namespace nlgate {

/// Default free-evolution step, equal to the control substep at the paper mesh.
inline constexpr Real kFreeStepMs = 2.5e-3;

/// Evolve with the trap at rest for tau (ms).
Wavefunction free_evolve(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g, Real tau,
                         Real max_dt = kFreeStepMs);

/// A Ramsey pulse: either a shaking trajectory run through the GPE, or an
/// exact 2x2 gate applied to the {phi_0, phi_1} components (linear oracle).
class RamseyPulse {
 public:
  static RamseyPulse shake(ControlTrajectory trajectory, EvolveOptions evolve = {});
  static RamseyPulse exact(GateSpec gate);

  bool is_exact() const { return gate_.has_value(); }
  Real duration() const { return trajectory_ ? trajectory_->duration() : 0.0; }

  Evolution apply(const Wavefunction& psi, const ModeBasis& basis, bool record) const;

 private:
  RamseyPulse() = default;
  std::optional<ControlTrajectory> trajectory_;
  std::optional<GateSpec> gate_;
  EvolveOptions evolve_{};
};

enum class RamseyStage { Pulse1, Free, Pulse2 };

std::string_view stage_name(RamseyStage stage);

struct BlochSample {
  Real time = 0.0;  // ms since the start of the sequence
  RamseyStage stage = RamseyStage::Pulse1;
  Eigen::Vector3d xyz = Eigen::Vector3d::Zero();
  Real p0 = 0.0;
  Real p1 = 0.0;
};

struct RamseyOptions {
  bool record = false;
  Real free_dt = kFreeStepMs;
  /// Spacing of recorded free-evolution samples (ms); 0 records every step.
  Real record_interval = 5e-3;
};

struct RamseyResult {
  Real tau = 0.0;
  Real p0 = 0.0;
  Real p1 = 0.0;
  std::vector<BlochSample> path;
  Wavefunction final_state;
};

/// pulse, free evolution for tau, the same pulse, readout; starts from phi_0.
RamseyResult ramsey_run(const ModeBasis& basis, const RamseyPulse& pulse, Real tau,
                        const RamseyOptions& options = {});

/// Stage-tagged Bloch path of a recorded run.
const std::vector<BlochSample>& bloch_path(const RamseyResult& run);

/// (max - min) / (max + min); zero for an all-zero series.
Real contrast(const RealVector& series);

/// Peak of a zero-padded transform of a uniformly sampled series with the
/// mean removed and a Hann taper, refined by quadratic interpolation on the magnitude.
Real dominant_frequency(const RealVector& series, Real spacing, int padding = 16);

struct FringeScan {
  RealVector tau;
  RealVector p0;
  RealVector p1;
  Real contrast_p0 = 0.0;
  Real contrast_p1 = 0.0;
  Real fringe_frequency_khz = 0.0;
  /// Largest 1 - (p0 + p1) over the readouts.
  Real max_leakage = 0.0;
};

/// 0 .. 2 ms in 5 us steps.
RealVector default_tau_grid();

/// Ramsey readout over a uniform tau grid; rejects grids covering fewer than
/// two periods or fewer than 20 samples per period of the expected fringe
/// frequency (the qubit splitting of `basis`).
FringeScan ramsey_scan(const ModeBasis& basis, const RamseyPulse& pulse, const RealVector& tau_grid,
                       int threads = 1, const RamseyOptions& options = {});

}  // namespace nlgate

#endif  // NLGATE_INTERFEROMETRY_HPP

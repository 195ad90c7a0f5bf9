#include "nlgate/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlgate/parallel.hpp"

namespace nlgate {

Wavefunction free_evolve(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g, Real tau,
                         Real max_dt) {
  return evolve_static(psi, trap, g, tau, max_dt).final_state;
}

RamseyPulse RamseyPulse::shake(ControlTrajectory trajectory, EvolveOptions evolve) {
  RamseyPulse p;
  p.trajectory_ = std::move(trajectory);
  p.evolve_ = evolve;
  return p;
}

RamseyPulse RamseyPulse::exact(GateSpec gate) {
  RamseyPulse p;
  p.gate_ = std::move(gate);
  return p;
}

Evolution RamseyPulse::apply(const Wavefunction& psi, const ModeBasis& basis, bool record) const {
  if (trajectory_) {
    EvolveOptions opts = evolve_;
    opts.record = record;
    return evolve(psi, basis.trap, *trajectory_, basis.g, opts);
  }
  const Complex a = inner(basis[0], psi);
  const Complex b = inner(basis[1], psi);
  const QubitAmplitudes out = gate_->apply(QubitAmplitudes(a, b));
  Wavefunction next = psi + (out[0] - a) * basis[0] + (out[1] - b) * basis[1];
  Evolution e{next, {}, {}};
  if (record) {
    e.snapshots = {psi, next};
    e.times = {0.0, 0.0};
  }
  return e;
}

std::string_view stage_name(RamseyStage stage) {
  switch (stage) {
    case RamseyStage::Pulse1:
      return "pulse1";
    case RamseyStage::Free:
      return "free";
    case RamseyStage::Pulse2:
      return "pulse2";
  }
  return "unknown";
}

namespace {

void append_path(std::vector<BlochSample>& path, const Evolution& e, const ModeBasis& basis, RamseyStage stage,
                 Real t0) {
  for (std::size_t i = 0; i < e.snapshots.size(); ++i) {
    const Projection pr = project(e.snapshots[i], basis);
    path.push_back({t0 + e.times[i], stage, bloch_coords(e.snapshots[i], basis), pr.populations.p[0],
                    pr.populations.p[1]});
  }
}

}  // namespace

RamseyResult ramsey_run(const ModeBasis& basis, const RamseyPulse& pulse, Real tau, const RamseyOptions& options) {
  if (!(tau >= 0.0)) throw std::invalid_argument("free evolution time must be non-negative");
  const bool rec = options.record;
  const Evolution first = pulse.apply(basis[0], basis, rec);
  const Evolution free =
      evolve_static(first.final_state, basis.trap, basis.g, tau, options.free_dt, rec, options.record_interval);
  const Evolution second = pulse.apply(free.final_state, basis, rec);

  const Projection pr = project(second.final_state, basis);
  RamseyResult out{tau, pr.populations.p[0], pr.populations.p[1], {}, second.final_state};
  if (rec) {
    const Real t1 = pulse.duration();
    append_path(out.path, first, basis, RamseyStage::Pulse1, 0.0);
    append_path(out.path, free, basis, RamseyStage::Free, t1);
    append_path(out.path, second, basis, RamseyStage::Pulse2, t1 + tau);
  }
  return out;
}

const std::vector<BlochSample>& bloch_path(const RamseyResult& run) {
  if (run.path.empty()) throw std::invalid_argument("run was not recorded");
  return run.path;
}

Real contrast(const RealVector& series) {
  if (series.size() == 0) throw std::invalid_argument("contrast of an empty series");
  const Real hi = series.maxCoeff();
  const Real lo = series.minCoeff();
  if (hi + lo == 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

Real dominant_frequency(const RealVector& series, Real spacing, int padding) {
  const Eigen::Index n = series.size();
  if (n < 4) throw std::invalid_argument("series too short for a frequency estimate");
  if (!(spacing > 0.0) || padding < 1) throw std::invalid_argument("invalid transform parameters");
  // Hann taper suppresses leakage from the image peak at negative frequency.
  RealVector centered = series.array() - series.mean();
  for (Eigen::Index j = 0; j < n; ++j) centered[j] *= 0.5 - 0.5 * std::cos(kTwoPi * j / (n - 1));
  const Eigen::Index m = n * padding;
  // Magnitudes at bins 0 .. m/2 of the zero-padded transform.
  RealVector mag(m / 2 + 1);
  for (Eigen::Index k = 0; k <= m / 2; ++k) {
    Complex acc{0.0, 0.0};
    const Real w = -kTwoPi * static_cast<Real>(k) / static_cast<Real>(m);
    const Complex step(std::cos(w), std::sin(w));
    Complex phase{1.0, 0.0};
    for (Eigen::Index j = 0; j < n; ++j) {
      acc += centered[j] * phase;
      phase *= step;
      if ((j & 63) == 63) phase /= std::abs(phase);
    }
    mag[k] = std::abs(acc);
  }
  Eigen::Index peak = 1;
  for (Eigen::Index k = 1; k < mag.size(); ++k)
    if (mag[k] > mag[peak]) peak = k;
  Real shift = 0.0;
  if (peak > 0 && peak + 1 < mag.size()) {
    const Real l = mag[peak - 1], c = mag[peak], r = mag[peak + 1];
    const Real den = l - 2.0 * c + r;
    if (den != 0.0) shift = 0.5 * (l - r) / den;
  }
  return (static_cast<Real>(peak) + shift) / (static_cast<Real>(m) * spacing);
}

RealVector default_tau_grid() {
  const int n = 401;
  RealVector tau(n);
  for (int i = 0; i < n; ++i) tau[i] = 5e-3 * i;
  return tau;
}

FringeScan ramsey_scan(const ModeBasis& basis, const RamseyPulse& pulse, const RealVector& tau_grid, int threads,
                       const RamseyOptions& options) {
  const Eigen::Index n = tau_grid.size();
  if (n < 2) throw std::invalid_argument("tau grid needs at least two points");
  const Real spacing = tau_grid[1] - tau_grid[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    const Real d = tau_grid[i] - tau_grid[i - 1];
    if (!(d > 0.0)) throw std::invalid_argument("tau grid must be strictly increasing");
    if (std::abs(d - spacing) > 1e-9 * std::max(1.0, spacing))
      throw std::invalid_argument("tau grid must be uniform");
  }
  if (tau_grid[0] < 0.0) throw std::invalid_argument("tau grid must be non-negative");
  const Real expected = basis.qubit_splitting();
  const Real span = tau_grid[n - 1] - tau_grid[0];
  if (span * expected < 2.0) throw std::invalid_argument("tau grid covers fewer than two fringe periods");
  if (1.0 / (expected * spacing) < 20.0)
    throw std::invalid_argument("tau grid has fewer than 20 samples per fringe period");

  FringeScan scan;
  scan.tau = tau_grid;
  scan.p0.resize(n);
  scan.p1.resize(n);
  RealVector leak(n);
  RamseyOptions single = options;
  single.record = false;
  parallel_for(static_cast<int>(n), threads, [&](int i) {
    const RamseyResult r = ramsey_run(basis, pulse, tau_grid[i], single);
    scan.p0[i] = r.p0;
    scan.p1[i] = r.p1;
    leak[i] = 1.0 - (r.p0 + r.p1);
  });
  scan.contrast_p0 = contrast(scan.p0);
  scan.contrast_p1 = contrast(scan.p1);
  scan.fringe_frequency_khz = dominant_frequency(scan.p1, spacing);
  scan.max_leakage = leak.maxCoeff();
  return scan;
}

}  // namespace nlgate

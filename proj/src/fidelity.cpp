#include "nlgate/fidelity.hpp"

#include <cmath>

#include "nlgate/parallel.hpp"

namespace nlgate {

GateSpec::GateSpec(const Eigen::Matrix2cd& matrix, Real tolerance) : matrix_(matrix) {
  if (unitarity_error() > tolerance) throw std::invalid_argument("gate matrix is not unitary");
}

GateSpec GateSpec::identity() { return GateSpec(Eigen::Matrix2cd::Identity()); }

GateSpec GateSpec::hadamard() {
  Eigen::Matrix2cd h;
  const Real s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  return GateSpec(h);
}

GateSpec GateSpec::inverse() const { return GateSpec(matrix_.adjoint()); }

GateSpec GateSpec::then(const GateSpec& next) const { return GateSpec(next.matrix_ * matrix_); }

Real GateSpec::unitarity_error() const {
  return (matrix_.adjoint() * matrix_ - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

Real state_fidelity(const Wavefunction& final_state, const Wavefunction& target) {
  return std::min(1.0, std::norm(inner(final_state, target)));
}

Wavefunction gate_target(const GateSpec& gate, const QubitState& input, const ModeBasis& basis) {
  return embed(gate.apply(input.amplitudes()), basis);
}

FidelityReport summarize(std::vector<Real> fidelities, std::string provenance) {
  FidelityReport report;
  report.provenance = std::move(provenance);
  if (!fidelities.empty()) {
    Real sum = 0.0;
    report.max = fidelities.front();
    report.min = fidelities.front();
    for (Real f : fidelities) {
      sum += f;
      report.max = std::max(report.max, f);
      report.min = std::min(report.min, f);
    }
    report.mean = sum / static_cast<Real>(fidelities.size());
  }
  report.fidelities = std::move(fidelities);
  return report;
}

Real gate_fidelity(const ControlSetup& setup, const ControlTrajectory& trajectory, const GateSpec& gate,
                   const QubitState& input) {
  const Wavefunction psi0 = embed(input, setup.basis);
  const Evolution ev = evolve(psi0, setup.trap(), trajectory, setup.g(), setup.evolve);
  return state_fidelity(ev.final_state, gate_target(gate, input, setup.basis));
}

FidelityReport average_gate_fidelity(const ControlSetup& setup, const ControlTrajectory& trajectory,
                                     const GateSpec& gate, const std::vector<QubitState>& inputs,
                                     std::string provenance) {
  if (trajectory.size() != setup.samples)
    throw std::invalid_argument("trajectory sample count does not match the time mesh");
  std::vector<Real> f(inputs.size(), 0.0);
  std::vector<char> ok(inputs.size(), 1);
  parallel_for(static_cast<int>(inputs.size()), setup.threads, [&](int i) {
    try {
      f[i] = gate_fidelity(setup, trajectory, gate, inputs[i]);
    } catch (const SolverError&) {
      ok[i] = 0;
    }
  });
  std::vector<int> failed;
  std::vector<Real> good;
  good.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (ok[i]) good.push_back(f[i]);
    else failed.push_back(static_cast<int>(i));
  }
  FidelityReport report = summarize(std::move(good), std::move(provenance));
  report.failed = std::move(failed);
  return report;
}

FidelityReport average_gate_fidelity(const ControlSetup& setup, const ControlSpectrum& spectrum,
                                     const GateSpec& gate, const FibonacciLattice& lattice) {
  const ControlTrajectory trajectory = synthesize_trajectory(spectrum, setup.samples);
  return average_gate_fidelity(setup, trajectory, gate, lattice.states,
                               "fibonacci:" + std::to_string(lattice.count));
}

}  // namespace nlgate

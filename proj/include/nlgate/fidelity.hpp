#ifndef NLGATE_FIDELITY_HPP
#define NLGATE_FIDELITY_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "nlgate/qubit.hpp"

namespace nlgate {

/// Ideal single-qubit gate, u_ij = <i|U|j>.
class GateSpec {
 public:
  explicit GateSpec(const Eigen::Matrix2cd& matrix, Real tolerance = 1e-12);

  static GateSpec identity();
  static GateSpec hadamard();

  const Eigen::Matrix2cd& matrix() const { return matrix_; }
  QubitAmplitudes apply(const QubitAmplitudes& c) const { return matrix_ * c; }
  GateSpec inverse() const;
  GateSpec then(const GateSpec& next) const;  // next * this
  /// max |(U^dagger U - 1)_ij|
  Real unitarity_error() const;

 private:
  Eigen::Matrix2cd matrix_;
};

/// |<final|target>|^2 over the full position representation.
Real state_fidelity(const Wavefunction& final_state, const Wavefunction& target);

/// Embedding of U (c0, c1) in the mode basis.
Wavefunction gate_target(const GateSpec& gate, const QubitState& input, const ModeBasis& basis);

/// Everything needed to run a shaking protocol on one trap.
struct ControlSetup {
  ModeBasis basis;
  Real duration = 1.0;  // T, ms
  int samples = 101;    // n
  EvolveOptions evolve{};
  Real max_excursion = 0.5;  // um
  int threads = 1;

  const TrapPotential& trap() const { return basis.trap; }
  Nonlinearity g() const { return basis.g; }
};

struct FidelityReport {
  std::vector<Real> fidelities;
  std::vector<int> failed;
  Real max = 0.0;
  Real min = 0.0;
  Real mean = 0.0;
  std::string provenance;
};

/// Summary statistics with an ascending-index summation.
FidelityReport summarize(std::vector<Real> fidelities, std::string provenance);

/// Gate fidelity of a single input under a trajectory.
Real gate_fidelity(const ControlSetup& setup, const ControlTrajectory& trajectory, const GateSpec& gate,
                   const QubitState& input);

FidelityReport average_gate_fidelity(const ControlSetup& setup, const ControlTrajectory& trajectory,
                                     const GateSpec& gate, const std::vector<QubitState>& inputs,
                                     std::string provenance = "");

FidelityReport average_gate_fidelity(const ControlSetup& setup, const ControlSpectrum& spectrum,
                                     const GateSpec& gate, const FibonacciLattice& lattice);

}  // namespace nlgate

#endif  // NLGATE_FIDELITY_HPP

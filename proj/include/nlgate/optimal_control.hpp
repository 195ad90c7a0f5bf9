#ifndef NLGATE_OPTIMAL_CONTROL_HPP
#define NLGATE_OPTIMAL_CONTROL_HPP

#include <functional>

#include "nlgate/fidelity.hpp"

namespace nlgate {

struct FidelityGradient {
  Real fidelity = 0.0;
  /// dF/d lambda(t_j) for every sample, endpoints included.
  RealVector gradient;
};

/// F = |<target|psi(T)>|^2 and its exact gradient with respect to the
/// trajectory samples, from one taped forward run and one reverse sweep
/// through the discrete Crank-Nicolson map.
FidelityGradient fidelity_gradient(const ControlSetup& setup, const ControlTrajectory& trajectory,
                                   const Wavefunction& initial, const Wavefunction& target);

struct OptimalControlOptions {
  Real target_fidelity = 0.9999;
  int max_iterations = 1000;
  int memory = 10;
};

struct OptimalControlResult {
  ControlTrajectory trajectory;
  Real fidelity = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximizes the state fidelity of a single input over the interior samples
/// (endpoints stay at zero, samples are clipped to the excursion bound) with a
/// limited-memory quasi-Newton ascent on the adjoint gradient.
OptimalControlResult per_state_optimal_control(const ControlSetup& setup, const QubitState& input,
                                               const GateSpec& gate, const ControlTrajectory& seed,
                                               const OptimalControlOptions& options = {});

/// Box-constrained L-BFGS minimizer shared by the control optimizers.
/// `objective` returns f(x) and writes its gradient; `project` maps x into the
/// feasible box. Stops when `done(f)` holds or the iteration budget is spent.
struct LbfgsResult {
  RealVector x;
  Real value = 0.0;
  int iterations = 0;
};

LbfgsResult minimize_lbfgs(const std::function<Real(const RealVector&, RealVector&)>& objective,
                           const std::function<void(RealVector&)>& project, RealVector x0, int max_iterations,
                           int memory, const std::function<bool(Real)>& done);

}  // namespace nlgate

#endif  // NLGATE_OPTIMAL_CONTROL_HPP

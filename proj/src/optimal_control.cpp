#include "nlgate/optimal_control.hpp"

#include <cmath>
#include <deque>

namespace nlgate {

FidelityGradient fidelity_gradient(const ControlSetup& setup, const ControlTrajectory& trajectory,
                                   const Wavefunction& initial, const Wavefunction& target) {
  require_same_grid(initial.grid(), target.grid());
  const SpatialGrid& grid = initial.grid();
  const int m = grid.size() - 2;
  const int s = setup.evolve.substeps;
  const int n = trajectory.size();
  const Real dt = trajectory.dt() / s;

  CrankNicolsonStepper stepper(grid, setup.trap(), setup.g());
  std::vector<StepTape> tape(static_cast<std::size_t>(n - 1) * s);
  ComplexVector psi = initial.amplitudes().segment(1, m);
  for (int j = 0; j + 1 < n; ++j) {
    for (int k = 0; k < s; ++k) {
      const Real w = (k + 0.5) / s;
      stepper.advance(psi, trajectory[j] + (trajectory[j + 1] - trajectory[j]) * w, dt,
                      &tape[static_cast<std::size_t>(j) * s + k]);
    }
  }
  const ComplexVector t = target.amplitudes().segment(1, m);
  const Complex overlap = t.dot(psi) * grid.dx();  // <target|psi>

  FidelityGradient out;
  out.fidelity = std::norm(overlap);
  out.gradient = RealVector::Zero(n);
  // J = |o|^2, o = dx t^H psi  =>  dJ/dRe psi + i dJ/dIm psi = 2 o dx t
  ComplexVector grad = (2.0 * overlap * grid.dx()) * t;
  for (int j = n - 2; j >= 0; --j) {
    for (int k = s - 1; k >= 0; --k) {
      const Real w = (k + 0.5) / s;
      const Real d_offset = stepper.adjoint(tape[static_cast<std::size_t>(j) * s + k], grad);
      out.gradient[j] += (1.0 - w) * d_offset;
      out.gradient[j + 1] += w * d_offset;
    }
  }
  return out;
}

LbfgsResult minimize_lbfgs(const std::function<Real(const RealVector&, RealVector&)>& objective,
                           const std::function<void(RealVector&)>& project, RealVector x0, int max_iterations,
                           int memory, const std::function<bool(Real)>& done) {
  project(x0);
  RealVector grad;
  Real f = objective(x0, grad);
  LbfgsResult best{x0, f, 0};
  std::deque<RealVector> s_hist;
  std::deque<RealVector> y_hist;
  RealVector x = x0;
  Real step_scale = 1.0;

  for (int it = 0; it < max_iterations && !done(f); ++it) {
    best.iterations = it + 1;
    // two-loop recursion
    RealVector q = grad;
    const int h = static_cast<int>(s_hist.size());
    std::vector<Real> alpha(h);
    for (int i = h - 1; i >= 0; --i) {
      const Real rho = 1.0 / y_hist[i].dot(s_hist[i]);
      alpha[i] = rho * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    Real gamma = h > 0 ? s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm() : 0.0;
    if (h == 0) {
      const Real gn = grad.norm();
      gamma = gn > 0.0 ? step_scale / gn : 1.0;
    }
    q *= gamma;
    for (int i = 0; i < h; ++i) {
      const Real rho = 1.0 / y_hist[i].dot(s_hist[i]);
      const Real b = rho * y_hist[i].dot(q);
      q += s_hist[i] * (alpha[i] - b);
    }
    RealVector dir = -q;
    if (dir.dot(grad) >= 0.0) {
      s_hist.clear();
      y_hist.clear();
      const Real gn = grad.norm();
      if (!(gn > 0.0)) break;
      dir = -grad * (step_scale / gn);
    }

    // Armijo backtracking on the projected path.
    Real t = 1.0;
    RealVector x_new;
    RealVector g_new;
    Real f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      x_new = x + t * dir;
      project(x_new);
      f_new = objective(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * grad.dot(x_new - x)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (s_hist.empty()) break;
      s_hist.clear();
      y_hist.clear();
      continue;
    }
    RealVector sv = x_new - x;
    RealVector yv = g_new - grad;
    if (sv.dot(yv) > 1e-16 * sv.norm() * yv.norm()) {
      s_hist.push_back(sv);
      y_hist.push_back(yv);
      if (static_cast<int>(s_hist.size()) > memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    step_scale = std::max(1e-6, sv.norm());
    x = std::move(x_new);
    grad = std::move(g_new);
    f = f_new;
    if (f < best.value) {
      best.x = x;
      best.value = f;
    }
  }
  return best;
}

OptimalControlResult per_state_optimal_control(const ControlSetup& setup, const QubitState& input,
                                               const GateSpec& gate, const ControlTrajectory& seed,
                                               const OptimalControlOptions& options) {
  if (seed.size() != setup.samples) throw std::invalid_argument("seed does not match the time mesh");
  if (std::abs(seed.duration() - setup.duration) > 1e-12)
    throw std::invalid_argument("seed duration does not match the control duration");
  const Wavefunction initial = embed(input, setup.basis);
  const Wavefunction target = gate_target(gate, input, setup.basis);
  const int n = seed.size();

  auto objective = [&](const RealVector& x, RealVector& grad) {
    RealVector samples = RealVector::Zero(n);
    samples.segment(1, n - 2) = x;
    const FidelityGradient fg =
        fidelity_gradient(setup, ControlTrajectory(setup.duration, std::move(samples)), initial, target);
    grad = -fg.gradient.segment(1, n - 2);
    return 1.0 - fg.fidelity;
  };
  const Real bound = setup.max_excursion;
  auto project = [bound](RealVector& x) { x = x.cwiseMax(-bound).cwiseMin(bound); };
  const Real goal = 1.0 - options.target_fidelity;
  auto done = [goal](Real f) { return f <= goal; };

  const LbfgsResult r = minimize_lbfgs(objective, project, seed.samples().segment(1, n - 2), options.max_iterations,
                                       options.memory, done);
  RealVector samples = RealVector::Zero(n);
  samples.segment(1, n - 2) = r.x;
  OptimalControlResult result{ControlTrajectory(setup.duration, std::move(samples)), 1.0 - r.value, r.iterations,
                              false};
  result.converged = result.fidelity >= options.target_fidelity;
  return result;
}

}  // namespace nlgate

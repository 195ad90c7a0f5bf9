#ifndef NLGATE_GPE_HPP
#define NLGATE_GPE_HPP

#include <optional>
#include <vector>

#include "nlgate/potential.hpp"
#include "nlgate/trajectory.hpp"
#include "nlgate/wavefunction.hpp"

namespace nlgate {

/// Solves (1 + i a H) y = r for a real symmetric tridiagonal H with constant
/// off-diagonal `off` and diagonal `diag`. Thomas algorithm, no pivoting.
template <typename Scalar>
void solve_shifted_tridiagonal(Scalar shift, const RealVector& diag, Real off,
                               const VectorX<Scalar>& rhs, VectorX<Scalar>& out,
                               VectorX<Scalar>& scratch) {
  const Eigen::Index n = diag.size();
  out.resize(n);
  scratch.resize(n);
  const Scalar e = shift * off;
  Scalar denom = Scalar(1) + shift * diag[0];
  scratch[0] = e / denom;
  out[0] = rhs[0] / denom;
  for (Eigen::Index j = 1; j < n; ++j) {
    denom = Scalar(1) + shift * diag[j] - e * scratch[j - 1];
    scratch[j] = e / denom;
    out[j] = (rhs[j] - e * out[j - 1]) / denom;
  }
  for (Eigen::Index j = n - 2; j >= 0; --j) out[j] -= scratch[j] * out[j + 1];
}

/// Data retained by a forward step for reverse-mode differentiation.
struct StepTape {
  Real offset = 0.0;
  Real dt = 0.0;
  ComplexVector input;
  ComplexVector predictor;
  ComplexVector output;
};

/// Crank-Nicolson integrator for i dpsi/dt = 2 pi H psi with H = E/h in kHz.
///
/// The cubic term is closed with one predictor (density of the current state)
/// and one corrector (mean of current and predicted densities). Both solves
/// use a real Hamiltonian, so every step is exactly norm preserving.
/// Vectors passed here hold the interior points only (walls excluded).
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const SpatialGrid& grid, const TrapPotential& trap, Nonlinearity g);

  const SpatialGrid& grid() const { return grid_; }
  int interior_size() const { return static_cast<int>(x_.size()); }

  void advance(ComplexVector& psi, Real offset, Real dt, StepTape* tape = nullptr);

  /// Pulls the gradient of a real cost back through one recorded step.
  /// grad holds dJ/dRe(psi) + i dJ/dIm(psi) of the step output on entry and
  /// of its input on exit; returns dJ/d(offset).
  Real adjoint(const StepTape& tape, ComplexVector& grad);

 private:
  void fill_diagonal(Real offset, const RealVector* density, RealVector& diag) const;
  void apply_explicit(Real a, const RealVector& diag, const ComplexVector& in, ComplexVector& out) const;
  void accumulate_adjoint(Real a, const RealVector& diag, const ComplexVector& in,
                          const ComplexVector& out, const ComplexVector& grad_out,
                          ComplexVector& grad_in, RealVector& grad_diag);

  SpatialGrid grid_;
  TrapPotential trap_;
  Real g_khz_um_;
  RealVector x_;
  Real off_;
  Real kinetic_diag_;
  RealVector diag_;
  RealVector density_;
  ComplexVector rhs_;
  ComplexVector tmp_;
  ComplexVector scratch_;
  RealVector grad_diag_;
};

/// Single step of duration dt (ms) with the trap displaced by offset (um).
Wavefunction step(const Wavefunction& psi, const TrapPotential& trap, Real offset, Nonlinearity g,
                  Real dt);

struct EvolveOptions {
  /// Crank-Nicolson steps per control interval; the offset is interpolated
  /// linearly and evaluated at each substep midpoint.
  int substeps = 4;
  /// Store the state at every control sample time.
  bool record = false;
};

struct Evolution {
  Wavefunction final_state;
  std::vector<Wavefunction> snapshots;
  std::vector<Real> times;
};

Evolution evolve(const Wavefunction& psi0, const TrapPotential& trap,
                 const ControlTrajectory& trajectory, Nonlinearity g,
                 const EvolveOptions& options = {});

/// Evolution in the static trap for tau ms, using steps no longer than max_dt.
Evolution evolve_static(const Wavefunction& psi0, const TrapPotential& trap, Nonlinearity g,
                        Real tau, Real max_dt, bool record = false, Real record_interval = 0.0);

/// E[psi]/h in kHz. Gradients are differences on the half-grid, which makes
/// the kinetic term consistent with the three-point Laplacian in the stepper.
Real energy(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g);

/// <psi|H[psi]|psi> in kHz; equals the chemical potential for stationary psi.
Real chemical_potential(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g);

/// H[rho] psi in kHz on the full grid (wall entries zero), trap undisplaced.
ComplexVector apply_hamiltonian(const Wavefunction& psi, const TrapPotential& trap,
                                Nonlinearity g, const RealVector& density);

}  // namespace nlgate

#endif  // NLGATE_GPE_HPP

#include "nlgate/gpe.hpp"

#include <cmath>

namespace nlgate {

namespace {

Real kinetic_coefficient(const SpatialGrid& grid) {
  return units::kKineticKHz / (grid.dx() * grid.dx());
}

}  // namespace

CrankNicolsonStepper::CrankNicolsonStepper(const SpatialGrid& grid, const TrapPotential& trap,
                                           Nonlinearity g)
    : grid_(grid), trap_(trap), g_khz_um_(g.khz_um()) {
  const int m = grid.size() - 2;
  x_.resize(m);
  for (int j = 0; j < m; ++j) x_[j] = grid.x(j + 1);
  const Real c = kinetic_coefficient(grid);
  off_ = -c;
  kinetic_diag_ = 2.0 * c;
  diag_.resize(m);
  density_.resize(m);
}

void CrankNicolsonStepper::fill_diagonal(Real offset, const RealVector* density, RealVector& diag) const {
  diag.resize(x_.size());
  for (Eigen::Index j = 0; j < x_.size(); ++j) diag[j] = kinetic_diag_ + trap_.value_khz(x_[j], offset);
  if (density != nullptr && g_khz_um_ != 0.0) diag += g_khz_um_ * (*density);
}

void CrankNicolsonStepper::apply_explicit(Real a, const RealVector& diag, const ComplexVector& in,
                                          ComplexVector& out) const {
  // out = (1 - i a H) in
  const Eigen::Index m = in.size();
  out.resize(m);
  const Complex ia(0.0, a);
  for (Eigen::Index j = 0; j < m; ++j) {
    Complex h = diag[j] * in[j];
    if (j > 0) h += off_ * in[j - 1];
    if (j + 1 < m) h += off_ * in[j + 1];
    out[j] = in[j] - ia * h;
  }
}

void CrankNicolsonStepper::advance(ComplexVector& psi, Real offset, Real dt, StepTape* tape) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (psi.size() != x_.size()) throw std::invalid_argument("stepper expects interior amplitudes");
  const Real a = kPi * dt;
  const Complex shift(0.0, a);

  if (tape != nullptr) {
    tape->offset = offset;
    tape->dt = dt;
    tape->input = psi;
  }

  if (g_khz_um_ != 0.0) {
    density_ = psi.cwiseAbs2();
    fill_diagonal(offset, &density_, diag_);
    apply_explicit(a, diag_, psi, rhs_);
    solve_shifted_tridiagonal(shift, diag_, off_, rhs_, tmp_, scratch_);
    if (tape != nullptr) tape->predictor = tmp_;
    density_ = 0.5 * (psi.cwiseAbs2() + tmp_.cwiseAbs2());
    fill_diagonal(offset, &density_, diag_);
  } else {
    fill_diagonal(offset, nullptr, diag_);
  }
  apply_explicit(a, diag_, psi, rhs_);
  solve_shifted_tridiagonal(shift, diag_, off_, rhs_, psi, scratch_);
  if (!psi.allFinite()) throw SolverError("Crank-Nicolson step produced non-finite amplitudes", 0.0);
  if (tape != nullptr) tape->output = psi;
}

void CrankNicolsonStepper::accumulate_adjoint(Real a, const RealVector& diag, const ComplexVector& in,
                                              const ComplexVector& out, const ComplexVector& grad_out,
                                              ComplexVector& grad_in, RealVector& grad_diag) {
  // Forward: (1 + i a H) out = (1 - i a H) in. With z = (1 - i a H)^{-1} grad_out,
  // grad_in += (1 + i a H) z and dJ/dH_jj = a Im(conj(z_j) (in_j + out_j)).
  ComplexVector z;
  solve_shifted_tridiagonal(Complex(0.0, -a), diag, off_, grad_out, z, scratch_);
  apply_explicit(-a, diag, z, tmp_);
  grad_in += tmp_;
  grad_diag.resize(in.size());
  for (Eigen::Index j = 0; j < in.size(); ++j) grad_diag[j] = a * (std::conj(z[j]) * (in[j] + out[j])).imag();
}

Real CrankNicolsonStepper::adjoint(const StepTape& tape, ComplexVector& grad) {
  const Real a = kPi * tape.dt;
  const ComplexVector grad_out = grad;
  ComplexVector grad_in = ComplexVector::Zero(grad.size());
  Real d_offset = 0.0;

  auto offset_term = [&](const RealVector& gd) {
    Real acc = 0.0;
    for (Eigen::Index j = 0; j < gd.size(); ++j) acc -= gd[j] * trap_.slope_khz(x_[j], tape.offset);
    return acc;
  };

  if (g_khz_um_ != 0.0) {
    RealVector dens_c = 0.5 * (tape.input.cwiseAbs2() + tape.predictor.cwiseAbs2());
    RealVector diag_c;
    fill_diagonal(tape.offset, &dens_c, diag_c);
    accumulate_adjoint(a, diag_c, tape.input, tape.output, grad_out, grad_in, grad_diag_);
    d_offset += offset_term(grad_diag_);
    const RealVector rho_bar_c = g_khz_um_ * grad_diag_;
    grad_in += (rho_bar_c.cast<Complex>().array() * tape.input.array()).matrix();
    ComplexVector grad_pred = (rho_bar_c.cast<Complex>().array() * tape.predictor.array()).matrix();

    RealVector dens_p = tape.input.cwiseAbs2();
    RealVector diag_p;
    fill_diagonal(tape.offset, &dens_p, diag_p);
    accumulate_adjoint(a, diag_p, tape.input, tape.predictor, grad_pred, grad_in, grad_diag_);
    d_offset += offset_term(grad_diag_);
    const RealVector rho_bar_p = g_khz_um_ * grad_diag_;
    grad_in += (2.0 * rho_bar_p.cast<Complex>().array() * tape.input.array()).matrix();
  } else {
    RealVector diag;
    fill_diagonal(tape.offset, nullptr, diag);
    accumulate_adjoint(a, diag, tape.input, tape.output, grad_out, grad_in, grad_diag_);
    d_offset += offset_term(grad_diag_);
  }
  grad = std::move(grad_in);
  return d_offset;
}

Wavefunction step(const Wavefunction& psi, const TrapPotential& trap, Real offset, Nonlinearity g, Real dt) {
  CrankNicolsonStepper stepper(psi.grid(), trap, g);
  const int m = psi.size() - 2;
  ComplexVector interior = psi.amplitudes().segment(1, m);
  stepper.advance(interior, offset, dt);
  Wavefunction out(psi.grid());
  out.amplitudes().segment(1, m) = interior;
  return out;
}

namespace {

Wavefunction from_interior(const SpatialGrid& grid, const ComplexVector& interior) {
  Wavefunction out(grid);
  out.amplitudes().segment(1, interior.size()) = interior;
  return out;
}

}  // namespace

Evolution evolve(const Wavefunction& psi0, const TrapPotential& trap, const ControlTrajectory& trajectory,
                 Nonlinearity g, const EvolveOptions& options) {
  if (options.substeps < 1) throw std::invalid_argument("substeps must be at least 1");
  const SpatialGrid& grid = psi0.grid();
  CrankNicolsonStepper stepper(grid, trap, g);
  const int m = grid.size() - 2;
  ComplexVector psi = psi0.amplitudes().segment(1, m);
  const int s = options.substeps;
  const Real dt = trajectory.dt() / s;

  Evolution result{psi0, {}, {}};
  if (options.record) {
    result.snapshots.reserve(trajectory.size());
    result.times.reserve(trajectory.size());
    result.snapshots.push_back(from_interior(grid, psi));
    result.times.push_back(0.0);
  }
  for (int j = 0; j + 1 < trajectory.size(); ++j) {
    const Real l0 = trajectory[j];
    const Real l1 = trajectory[j + 1];
    for (int k = 0; k < s; ++k) {
      const Real w = (k + 0.5) / s;
      stepper.advance(psi, l0 + (l1 - l0) * w, dt);
    }
    if (options.record) {
      result.snapshots.push_back(from_interior(grid, psi));
      result.times.push_back(trajectory.time(j + 1));
    }
  }
  result.final_state = from_interior(grid, psi);
  return result;
}

Evolution evolve_static(const Wavefunction& psi0, const TrapPotential& trap, Nonlinearity g, Real tau,
                        Real max_dt, bool record, Real record_interval) {
  if (!(tau >= 0.0)) throw std::invalid_argument("free evolution time must be non-negative");
  if (!(max_dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const SpatialGrid& grid = psi0.grid();
  Evolution result{psi0, {}, {}};
  if (record) {
    result.snapshots.push_back(psi0);
    result.times.push_back(0.0);
  }
  if (tau == 0.0) return result;
  const int steps = static_cast<int>(std::ceil(tau / max_dt - 1e-9));
  const Real dt = tau / steps;
  const int every = record_interval > 0.0 ? std::max(1, static_cast<int>(std::lround(record_interval / dt))) : 1;
  CrankNicolsonStepper stepper(grid, trap, g);
  const int m = grid.size() - 2;
  ComplexVector psi = psi0.amplitudes().segment(1, m);
  for (int k = 1; k <= steps; ++k) {
    stepper.advance(psi, 0.0, dt);
    if (record && (k % every == 0 || k == steps)) {
      result.snapshots.push_back(from_interior(grid, psi));
      result.times.push_back(dt * k);
    }
  }
  result.final_state = from_interior(grid, psi);
  return result;
}

Real energy(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g) {
  const SpatialGrid& grid = psi.grid();
  const Real dx = grid.dx();
  const auto& a = psi.amplitudes();
  Real kinetic = 0.0;
  for (int j = 0; j + 1 < grid.size(); ++j) kinetic += std::norm(a[j + 1] - a[j]);
  kinetic *= units::kKineticKHz / dx;
  Real local = 0.0;
  const Real gk = g.khz_um();
  for (int j = 0; j < grid.size(); ++j) {
    const Real rho = std::norm(a[j]);
    local += (trap.value_khz(grid.x(j)) + 0.5 * gk * rho) * rho;
  }
  return kinetic + local * dx;
}

Real chemical_potential(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g) {
  const Real gk = g.khz_um();
  const auto& a = psi.amplitudes();
  Real extra = 0.0;
  for (int j = 0; j < psi.size(); ++j) extra += std::norm(a[j]) * std::norm(a[j]);
  return energy(psi, trap, g) + 0.5 * gk * extra * psi.grid().dx();
}

ComplexVector apply_hamiltonian(const Wavefunction& psi, const TrapPotential& trap, Nonlinearity g,
                                const RealVector& density) {
  const SpatialGrid& grid = psi.grid();
  const Real c = kinetic_coefficient(grid);
  const Real gk = g.khz_um();
  const auto& a = psi.amplitudes();
  ComplexVector out = ComplexVector::Zero(grid.size());
  for (int j = 1; j + 1 < grid.size(); ++j) {
    out[j] = c * (2.0 * a[j] - a[j - 1] - a[j + 1]) + (trap.value_khz(grid.x(j)) + gk * density[j]) * a[j];
  }
  return out;
}

}  // namespace nlgate

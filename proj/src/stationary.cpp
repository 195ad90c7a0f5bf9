#include "nlgate/stationary.hpp"

#include <cmath>

#include <Eigen/LU>
#include <string>

namespace nlgate {

Wavefunction hermite_seed(const SpatialGrid& grid, Real length, int order) {
  Wavefunction seed(grid);
  for (int j = 1; j + 1 < grid.size(); ++j) {
    const Real u = grid.x(j) / length;
    // physicists' Hermite recurrence
    Real h_prev = 1.0;
    Real h = 2.0 * u;
    if (order == 0) h = 1.0;
    for (int k = 2; k <= order; ++k) {
      const Real next = 2.0 * u * h - 2.0 * (k - 1) * h_prev;
      h_prev = h;
      h = next;
    }
    seed.amplitudes()[j] = h * std::exp(-0.5 * u * u);
  }
  return seed.normalize();
}

namespace {

void deflate(ComplexVector& phi, const std::vector<Wavefunction>& below, Real dx) {
  for (const auto& b : below) {
    const Complex c = b.amplitudes().dot(phi) * dx;
    phi -= c * b.amplitudes();
  }
}

Real projected_residual(const Wavefunction& phi, const TrapPotential& trap, Nonlinearity g,
                        const std::vector<Wavefunction>& below, Real mu) {
  ComplexVector r = apply_hamiltonian(phi, trap, g, phi.density()) - mu * phi.amplitudes();
  deflate(r, below, phi.grid().dx());
  return std::sqrt(r.squaredNorm() * phi.grid().dx());
}

StationaryState imaginary_time_flow(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid,
                                    const std::vector<Wavefunction>& below, const StationaryOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("stationary-state tolerance must be positive");
  if (!(options.imaginary_dt > 0.0)) throw std::invalid_argument("imaginary time step must be positive");
  for (const auto& b : below) require_same_grid(b.grid(), grid);

  const int order = static_cast<int>(below.size());
  Wavefunction seed = hermite_seed(grid, trap.char_length(), order);
  const Real dx = grid.dx();
  const int m = grid.size() - 2;
  const Real kin = units::kKineticKHz / (dx * dx);
  const Real gk = g.khz_um();
  const Real shift = kTwoPi * options.imaginary_dt;

  RealVector diag_static(m);
  for (int j = 0; j < m; ++j) diag_static[j] = 2.0 * kin + trap.value_khz(grid.x(j + 1));

  ComplexVector phi = seed.amplitudes();
  deflate(phi, below, dx);
  phi /= std::sqrt(phi.squaredNorm() * dx);

  // Lower modes restricted to the interior, as real vectors.
  const int k_below = static_cast<int>(below.size());
  Eigen::MatrixXd lower(m, k_below);
  for (int k = 0; k < k_below; ++k) lower.col(k) = below[k].amplitudes().segment(1, m).real();

  RealVector scratch;
  RealVector next;
  RealVector column;
  Eigen::MatrixXd solved(m, k_below);
  Wavefunction current(grid, phi);
  Real e_prev = energy(current, trap, g);
  Real residual = 0.0;
  Real mu = 0.0;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    RealVector diag = diag_static;
    RealVector rhs(m);
    for (int j = 0; j < m; ++j) {
      const Real p = phi[j + 1].real();
      diag[j] += gk * p * p;
      rhs[j] = p;
    }
    solve_shifted_tridiagonal(shift, diag, -kin, rhs, next, scratch);
    if (k_below > 0) {
      // (1 + s P H P) y = phi on range(P): y = A^-1 phi - A^-1 Q (Q^T A^-1 Q)^-1 Q^T A^-1 phi
      for (int k = 0; k < k_below; ++k) {
        solve_shifted_tridiagonal(shift, diag, -kin, RealVector(lower.col(k)), column, scratch);
        solved.col(k) = column;
      }
      const Eigen::MatrixXd gram = lower.transpose() * solved;
      const RealVector w = gram.partialPivLu().solve(lower.transpose() * next);
      next -= solved * w;
    }
    for (int j = 0; j < m; ++j) phi[j + 1] = next[j];
    deflate(phi, below, dx);
    phi /= std::sqrt(phi.squaredNorm() * dx);

    current.amplitudes() = phi;
    const Real e = energy(current, trap, g);
    const Real de = std::abs(e - e_prev);
    e_prev = e;
    if (de < options.energy_tolerance || it % 64 == 0) {
      mu = chemical_potential(current, trap, g);
      residual = projected_residual(current, trap, g, below, mu);
      if (de < options.energy_tolerance && residual < options.tolerance) break;
    }
  }
  if (it >= options.max_iterations) {
    throw SolverError("stationary state did not converge in " + std::to_string(options.max_iterations) +
                          " iterations (residual " + std::to_string(residual) + ")",
                      residual);
  }
  // Fix the sign so that the overlap with the seed is positive.
  if (seed.amplitudes().dot(phi).real() < 0.0) phi = -phi;
  current.amplitudes() = phi;
  mu = chemical_potential(current, trap, g);
  return StationaryState{current, energy(current, trap, g), mu,
                         projected_residual(current, trap, g, below, mu), it + 1};
}

}  // namespace

StationaryState ground_state(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid,
                             const StationaryOptions& options) {
  return imaginary_time_flow(trap, g, grid, {}, options);
}

StationaryState excited_state(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid,
                              const std::vector<Wavefunction>& below, const StationaryOptions& options) {
  if (below.empty()) throw std::invalid_argument("excited_state needs the lower modes");
  if (static_cast<int>(below.size()) >= grid.size() - 2)
    throw std::invalid_argument("grid has no room for another orthogonal mode");
  return imaginary_time_flow(trap, g, grid, below, options);
}

ModeBasis mode_basis(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid, int count,
                     const StationaryOptions& options) {
  if (count < 2) throw std::invalid_argument("a mode basis needs at least two modes");
  ModeBasis basis{grid, trap, g, {}, {}, {}};
  for (int k = 0; k < count; ++k) {
    StationaryState s = k == 0 ? ground_state(trap, g, grid, options)
                               : excited_state(trap, g, grid, basis.modes, options);
    basis.modes.push_back(std::move(s.mode));
    basis.energies.push_back(s.energy_khz);
    basis.chemical_potentials.push_back(s.chemical_potential_khz);
  }
  return basis;
}

}  // namespace nlgate

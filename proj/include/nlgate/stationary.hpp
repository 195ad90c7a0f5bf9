#ifndef NLGATE_STATIONARY_HPP
#define NLGATE_STATIONARY_HPP

#include <vector>

#include "nlgate/gpe.hpp"

namespace nlgate {

struct StationaryOptions {
  /// Imaginary-time step in ms.
  Real imaginary_dt = 1e-3;
  /// Residual target ||P (H phi - mu phi)|| in kHz.
  Real tolerance = 1e-6;
  /// Energy change per iteration below which the flow counts as settled (kHz).
  Real energy_tolerance = 1e-10;
  int max_iterations = 400000;
};

struct StationaryState {
  Wavefunction mode;
  Real energy_khz;
  Real chemical_potential_khz;
  Real residual;
  int iterations;
};

/// Normalized backward-Euler imaginary-time flow towards the minimum of E[phi].
StationaryState ground_state(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid,
                             const StationaryOptions& options = {});

/// Minimizer of E[phi] on the orthogonal complement of `below`. Each implicit
/// step uses the projected Hamiltonian P H P (P removes `below`), followed by
/// Gram-Schmidt against `below` to clear roundoff, so the fixed point obeys
/// P (H phi - mu phi) = 0. The residual is measured after projecting out `below`.
StationaryState excited_state(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid,
                              const std::vector<Wavefunction>& below,
                              const StationaryOptions& options = {});

/// Stationary modes phi_0 .. phi_{K-1} for one (trap, g).
struct ModeBasis {
  SpatialGrid grid;
  TrapPotential trap;
  Nonlinearity g;
  std::vector<Wavefunction> modes;
  std::vector<Real> energies;            // E_i / h, kHz
  std::vector<Real> chemical_potentials; // mu_i / h, kHz

  int size() const { return static_cast<int>(modes.size()); }
  const Wavefunction& operator[](int i) const { return modes[i]; }
  /// E_1 - E_0 in kHz.
  Real qubit_splitting() const { return energies.at(1) - energies.at(0); }
};

ModeBasis mode_basis(const TrapPotential& trap, Nonlinearity g, const SpatialGrid& grid, int count = 4,
                     const StationaryOptions& options = {});

/// Hermite-Gaussian seed of order k with width set by the trap length.
Wavefunction hermite_seed(const SpatialGrid& grid, Real length, int order);

}  // namespace nlgate

#endif  // NLGATE_STATIONARY_HPP

#ifndef NLGATE_WAVEFUNCTION_HPP
#define NLGATE_WAVEFUNCTION_HPP

#include "nlgate/grid.hpp"

namespace nlgate {

/// Complex amplitudes psi(x_j) on a SpatialGrid. The endpoints are hard walls.
class Wavefunction {
 public:
  Wavefunction(SpatialGrid grid, ComplexVector amplitudes);
  explicit Wavefunction(SpatialGrid grid);

  const SpatialGrid& grid() const { return grid_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexVector& amplitudes() { return amplitudes_; }
  Complex operator[](int j) const { return amplitudes_[j]; }
  int size() const { return grid_.size(); }

  /// sum |psi_j|^2 dx
  Real norm_squared() const;
  Wavefunction& normalize();
  Wavefunction normalized() const;

  RealVector density() const;

  Wavefunction& operator*=(Complex c);
  Wavefunction& operator+=(const Wavefunction& other);

 private:
  SpatialGrid grid_;
  ComplexVector amplitudes_;
};

Wavefunction operator*(Complex c, Wavefunction psi);
Wavefunction operator+(Wavefunction a, const Wavefunction& b);

/// <a|b> = sum conj(a_j) b_j dx, linear in the second argument.
Complex inner(const Wavefunction& a, const Wavefunction& b);

/// Throws std::invalid_argument when the two grids differ.
void require_same_grid(const SpatialGrid& a, const SpatialGrid& b);

}  // namespace nlgate

#endif  // NLGATE_WAVEFUNCTION_HPP

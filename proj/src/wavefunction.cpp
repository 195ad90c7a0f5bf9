#include "nlgate/wavefunction.hpp"

#include <cmath>

namespace nlgate {

Wavefunction::Wavefunction(SpatialGrid grid, ComplexVector amplitudes)
    : grid_(grid), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != grid_.size())
    throw std::invalid_argument("amplitude count does not match the grid");
}

Wavefunction::Wavefunction(SpatialGrid grid)
    : grid_(grid), amplitudes_(ComplexVector::Zero(grid.size())) {}

Real Wavefunction::norm_squared() const { return amplitudes_.squaredNorm() * grid_.dx(); }

Wavefunction& Wavefunction::normalize() {
  const Real n2 = norm_squared();
  if (!(n2 > 0.0)) throw std::domain_error("cannot normalize a zero wavefunction");
  amplitudes_ /= std::sqrt(n2);
  return *this;
}

Wavefunction Wavefunction::normalized() const {
  Wavefunction out = *this;
  out.normalize();
  return out;
}

RealVector Wavefunction::density() const { return amplitudes_.cwiseAbs2(); }

Wavefunction& Wavefunction::operator*=(Complex c) {
  amplitudes_ *= c;
  return *this;
}

Wavefunction& Wavefunction::operator+=(const Wavefunction& other) {
  require_same_grid(grid_, other.grid_);
  amplitudes_ += other.amplitudes_;
  return *this;
}

Wavefunction operator*(Complex c, Wavefunction psi) {
  psi *= c;
  return psi;
}

Wavefunction operator+(Wavefunction a, const Wavefunction& b) {
  a += b;
  return a;
}

void require_same_grid(const SpatialGrid& a, const SpatialGrid& b) {
  if (!(a == b)) throw std::invalid_argument("wavefunctions live on different grids");
}

Complex inner(const Wavefunction& a, const Wavefunction& b) {
  require_same_grid(a.grid(), b.grid());
  return a.amplitudes().dot(b.amplitudes()) * a.grid().dx();
}

}  // namespace nlgate

#include "nlgate/potential.hpp"

#include <cmath>

namespace nlgate {

Real characteristic_length(Real alpha2_hz) {
  if (!(alpha2_hz > 0.0)) throw std::invalid_argument("alpha2 must be positive");
  // h/m = 4 pi (hbar/2m); alpha2 converted to 1/ms.
  const Real h_over_m = 2.0 * kTwoPi * units::kKineticPrefactor;
  return std::sqrt(h_over_m / units::hz_to_khz(alpha2_hz)) / kTwoPi;
}

TrapPotential::TrapPotential(Real alpha2_hz, Real alpha4_hz) : alpha2_(alpha2_hz), alpha4_(alpha4_hz) {
  if (!(alpha4_hz >= 0.0)) throw std::invalid_argument("alpha4 must be non-negative");
  length_ = characteristic_length(alpha2_hz);
}

void TrapPotential::set_alpha2(Real alpha2_hz) {
  length_ = characteristic_length(alpha2_hz);
  alpha2_ = alpha2_hz;
}

void TrapPotential::set_alpha4(Real alpha4_hz) {
  if (!(alpha4_hz >= 0.0)) throw std::invalid_argument("alpha4 must be non-negative");
  alpha4_ = alpha4_hz;
}

Real TrapPotential::value_khz(Real x, Real offset) const {
  const Real u = (x - offset) / length_;
  const Real u2 = u * u;
  return units::hz_to_khz(0.5 * alpha2_ * u2 + alpha4_ * u2 * u2);
}

Real TrapPotential::slope_khz(Real x, Real offset) const {
  const Real u = (x - offset) / length_;
  return units::hz_to_khz(alpha2_ * u + 4.0 * alpha4_ * u * u * u) / length_;
}

RealVector potential_values(const TrapPotential& trap, Real offset, const SpatialGrid& grid) {
  RealVector v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = units::khz_to_hz(trap.value_khz(grid.x(j), offset));
  return v;
}

}  // namespace nlgate

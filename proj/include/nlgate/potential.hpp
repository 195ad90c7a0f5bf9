#ifndef NLGATE_POTENTIAL_HPP
#define NLGATE_POTENTIAL_HPP

#include "nlgate/grid.hpp"

namespace nlgate {

/// Quartic trap V/h = (a2/2)(x/l)^2 + a4 (x/l)^4 with l the harmonic length.
class TrapPotential {
 public:
  TrapPotential(Real alpha2_hz, Real alpha4_hz);

  Real alpha2() const { return alpha2_; }
  Real alpha4() const { return alpha4_; }
  Real char_length() const { return length_; }

  void set_alpha2(Real alpha2_hz);
  void set_alpha4(Real alpha4_hz);

  /// V/h in kHz at position x for a trap centred at offset.
  Real value_khz(Real x, Real offset = 0.0) const;
  /// dV/dx / h in kHz/um.
  Real slope_khz(Real x, Real offset = 0.0) const;

  friend bool operator==(const TrapPotential&, const TrapPotential&) = default;

 private:
  Real alpha2_;
  Real alpha4_;
  Real length_;
};

/// l = sqrt(h / (m alpha2)) / (2 pi) in um, alpha2 in Hz.
Real characteristic_length(Real alpha2_hz);

/// V/h in Hz on every grid point, trap translated by offset (um).
RealVector potential_values(const TrapPotential& trap, Real offset, const SpatialGrid& grid);

/// Interaction strength g/h in Hz*um. g = 0 is the linear limit.
struct Nonlinearity {
  Real g_hz_um = 0.0;

  Nonlinearity() = default;
  explicit Nonlinearity(Real g) : g_hz_um(g) {
    if (!(g >= 0.0)) throw std::invalid_argument("nonlinearity g must be >= 0");
  }
  Real khz_um() const { return units::hz_to_khz(g_hz_um); }
};

}  // namespace nlgate

#endif  // NLGATE_POTENTIAL_HPP

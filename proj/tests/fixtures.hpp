#ifndef NLGATE_TEST_FIXTURES_HPP
#define NLGATE_TEST_FIXTURES_HPP

#include "nlgate/search.hpp"

namespace nlgate::testing {

inline SpatialGrid paper_grid() { return SpatialGrid(-1.5, 1.5, 101); }
inline TrapPotential paper_trap() { return TrapPotential(533.0, 7648.0); }
inline constexpr Real kPaperG = 223.0;

/// Stationary modes for the paper trap, built once per process.
inline const ModeBasis& paper_basis(Real g_hz_um = kPaperG) {
  static const ModeBasis linear = mode_basis(paper_trap(), Nonlinearity(0.0), paper_grid(), 4);
  static const ModeBasis nonlinear = mode_basis(paper_trap(), Nonlinearity(kPaperG), paper_grid(), 4);
  if (g_hz_um == 0.0) return linear;
  if (g_hz_um == kPaperG) return nonlinear;
  throw std::invalid_argument("no cached basis for this g");
}

inline ControlSetup paper_setup(Real g_hz_um = kPaperG) { return ControlSetup{paper_basis(g_hz_um)}; }

/// Smooth pinned test trajectory with a few low harmonics.
inline ControlTrajectory wiggle(int n = 101, Real amplitude = 0.1) {
  RealVector s(n);
  for (int j = 0; j < n; ++j) {
    const Real t = static_cast<Real>(j) / (n - 1);
    s[j] = amplitude * (std::sin(kTwoPi * 2.0 * t) + 0.5 * std::sin(kTwoPi * t) - 0.3 * std::sin(kTwoPi * 3.0 * t));
  }
  return ControlTrajectory(1.0, s);
}

}  // namespace nlgate::testing

#endif  // NLGATE_TEST_FIXTURES_HPP

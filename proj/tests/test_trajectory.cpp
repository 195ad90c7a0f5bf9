#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace nlgate;

TEST_CASE("synthesis then analysis returns the band coefficients") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Real> u(-0.2, 0.2);
  for (int n : {21, 101}) {
    const int first = 2;
    const int count = (n - 2) / 2 - first;  // stay below the top analysable bin
    ComplexVector c(count);
    for (auto& v : c) v = Complex(u(rng), u(rng));
    const ControlSpectrum in(1.0, first, c);
    const ControlTrajectory t = synthesize_trajectory(in, n);
    const ControlSpectrum out = analyze_trajectory(t);
    // Integer bins are periodic over the T grid, so pinning removes only a constant.
    for (int k = 0; k < count; ++k) CHECK(std::abs(out.coefficients()[first - 1 + k] - c[k]) < 1e-10);
    CHECK(std::abs(out.coefficients()[0]) < 1e-10);
  }
}

TEST_CASE("synthesized trajectories are pinned at both ends") {
  ComplexVector c(3);
  c << Complex(0.1, 0.05), Complex(-0.02, 0.2), Complex(0.0, -0.1);
  const ControlTrajectory t = synthesize_trajectory(ControlSpectrum(1.0, 1, c), 101);
  CHECK(t.pinned());
  CHECK(t[0] == 0.0);
  CHECK(std::abs(t[100]) < 1e-15);
  CHECK(t.duration() == 1.0);
  CHECK(t.dt() == doctest::Approx(0.01));
}

TEST_CASE("sampling bound for a band") {
  CHECK(min_samples_for_band(9) == 20);
  CHECK(min_samples_for_band(1) == 4);
  ComplexVector c = ComplexVector::Constant(9, Complex(0.01, 0.0));
  const ControlSpectrum s(1.0, 1, c);
  CHECK_NOTHROW(synthesize_trajectory(s, 20));
  CHECK_THROWS_AS(synthesize_trajectory(s, 19), std::invalid_argument);
}

TEST_CASE("a single bin synthesizes a cosine of modulus amplitude and phase") {
  const Real m = 0.13;
  const Real p = 0.7;
  RealVector mod(1), ph(1);
  mod << m;
  ph << p;
  const ControlSpectrum s = ControlSpectrum::from_polar(1.0, 2, mod, ph);
  CHECK(s.frequency(0) == doctest::Approx(2.0));
  const ControlTrajectory t = synthesize_trajectory(s, 101);
  for (int j = 0; j < 101; ++j) {
    const Real expected = m * std::cos(kTwoPi * 2.0 * t.time(j) + p) - m * std::cos(p);
    CHECK(t[j] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("trajectory and spectrum validation") {
  CHECK_THROWS_AS(ControlTrajectory(0.0, RealVector::Zero(5)), std::invalid_argument);
  CHECK_THROWS_AS(ControlTrajectory(1.0, RealVector::Zero(1)), std::invalid_argument);
  CHECK_THROWS_AS(ControlSpectrum(1.0, 0, ComplexVector::Zero(2)), std::invalid_argument);
  const ControlTrajectory z = ControlTrajectory::zero(1.0, 11);
  CHECK(z.max_excursion() == 0.0);
  CHECK(z.pinned());
}

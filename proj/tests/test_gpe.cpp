#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "fixtures.hpp"

using namespace nlgate;
using nlgate::testing::paper_basis;
using nlgate::testing::paper_grid;
using nlgate::testing::paper_trap;

namespace {

Wavefunction superposition(const ModeBasis& b, Complex c0, Complex c1) {
  return (c0 * b[0] + c1 * b[1]).normalized();
}

}  // namespace

TEST_CASE("shifted tridiagonal solve agrees with a dense solve") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  const int n = 40;
  RealVector diag(n);
  for (auto& d : diag) d = 3.0 + u(rng);
  const Real off = -1.2;
  ComplexVector rhs(n);
  for (auto& r : rhs) r = Complex(u(rng), u(rng));
  const Complex shift(0.0, 0.37);
  ComplexVector out, scratch;
  solve_shifted_tridiagonal(shift, diag, off, rhs, out, scratch);

  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    a(j, j) += shift * diag[j];
    if (j + 1 < n) a(j, j + 1) = a(j + 1, j) = shift * off;
  }
  const ComplexVector dense = a.partialPivLu().solve(rhs);
  CHECK((out - dense).norm() < 1e-12);
}

TEST_CASE("norm is conserved to 1e-7 over 100 shaken control intervals") {
  const ModeBasis& b = paper_basis();
  const Wavefunction psi0 = superposition(b, 0.6, Complex(0.0, 0.8));
  const Evolution e = evolve(psi0, paper_trap(), nlgate::testing::wiggle(101, 0.2), b.g);
  CHECK(std::abs(e.final_state.norm_squared() - 1.0) < 1e-7);
}

TEST_CASE("a stationary state only acquires the phase -2 pi mu t") {
  for (Real g : {0.0, nlgate::testing::kPaperG}) {
    const ModeBasis& b = paper_basis(g);
    for (int k : {0, 1}) {
      const Real t = 0.1;
      const Wavefunction psi = evolve_static(b[k], b.trap, b.g, t, 1e-4).final_state;
      const Complex overlap = inner(b[k], psi);
      CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-6));
      const Real expected = std::remainder(-kTwoPi * b.chemical_potentials[k] * t, kTwoPi);
      const Real drift = std::remainder(std::arg(overlap) - expected, kTwoPi);
      CHECK(std::abs(drift) < 1e-3);
    }
  }
}

TEST_CASE("evolution is linear without interactions and not with them") {
  const auto traj = nlgate::testing::wiggle(101, 0.15);
  auto deviation = [&](Real g) {
    const ModeBasis& b = paper_basis(g);
    const Wavefunction sum = (b[0] + b[1]).normalized();
    const Wavefunction u0 = evolve(b[0], b.trap, traj, b.g).final_state;
    const Wavefunction u1 = evolve(b[1], b.trap, traj, b.g).final_state;
    const Wavefunction usum = evolve(sum, b.trap, traj, b.g).final_state;
    const Wavefunction lin = Complex(1.0 / std::sqrt(2.0), 0.0) * (u0 + u1);
    return (usum.amplitudes() - lin.amplitudes()).norm() * std::sqrt(b.grid.dx());
  };
  CHECK(deviation(0.0) < 1e-12);
  CHECK(deviation(nlgate::testing::kPaperG) > 1e-3);
}

TEST_CASE("energy is conserved during free evolution of a superposition") {
  const ModeBasis& b = paper_basis();
  const Wavefunction psi0 = superposition(b, 1.0, 1.0);
  const Real e0 = energy(psi0, b.trap, b.g);
  const Evolution e = evolve_static(psi0, b.trap, b.g, 1.0, 2.5e-3, true, 0.1);
  for (const auto& s : e.snapshots) CHECK(std::abs(energy(s, b.trap, b.g) - e0) / e0 < 1e-5);
}

TEST_CASE("halving dx shifts the ground-state energy by less than 0.1 percent") {
  const SpatialGrid fine(-1.5, 1.5, 201);
  const ModeBasis coarse = paper_basis();
  const ModeBasis refined = mode_basis(paper_trap(), Nonlinearity(nlgate::testing::kPaperG), fine, 2);
  CHECK(std::abs(refined.energies[0] - coarse.energies[0]) / coarse.energies[0] < 1e-3);
  // The first excited mode has more curvature and converges more slowly.
  CHECK(std::abs(refined.energies[1] - coarse.energies[1]) / coarse.energies[1] < 5e-3);
}

TEST_CASE("single step matches the stepper and rejects bad input") {
  const ModeBasis& b = paper_basis();
  const Wavefunction a = step(b[0], b.trap, 0.1, b.g, 2.5e-3);
  CrankNicolsonStepper s(b.grid, b.trap, b.g);
  ComplexVector interior = b[0].amplitudes().segment(1, b.grid.size() - 2);
  s.advance(interior, 0.1, 2.5e-3);
  CHECK((a.amplitudes().segment(1, b.grid.size() - 2) - interior).norm() == 0.0);
  CHECK(a[0] == Complex(0.0, 0.0));
  CHECK_THROWS_AS(step(b[0], b.trap, 0.0, b.g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(evolve_static(b[0], b.trap, b.g, -1.0, 1e-3), std::invalid_argument);
  EvolveOptions bad;
  bad.substeps = 0;
  CHECK_THROWS_AS(evolve(b[0], b.trap, ControlTrajectory::zero(1.0, 11), b.g, bad), std::invalid_argument);
}

TEST_CASE("recorded evolution stores one snapshot per control sample") {
  const ModeBasis& b = paper_basis();
  EvolveOptions opts;
  opts.record = true;
  const Evolution e = evolve(b[0], b.trap, ControlTrajectory::zero(1.0, 11), b.g, opts);
  REQUIRE(e.snapshots.size() == 11);
  CHECK(e.times.back() == doctest::Approx(1.0));
  CHECK((e.snapshots.back().amplitudes() - e.final_state.amplitudes()).norm() == 0.0);
}

TEST_CASE("non-finite amplitudes surface as a solver error") {
  const ModeBasis& b = paper_basis();
  ComplexVector a = b[0].amplitudes();
  a[50] = Complex(std::numeric_limits<Real>::quiet_NaN(), 0.0);
  const Wavefunction bad(b.grid, a);
  CHECK_THROWS_AS(step(bad, b.trap, 0.0, b.g, 1e-3), SolverError);
}

#include "doctest.h"
#include "fixtures.hpp"

using namespace nlgate;
using nlgate::testing::paper_basis;

TEST_CASE("linear spectrum of the paper trap") {
  const ModeBasis& b = paper_basis(0.0);
  const Real expected[] = {0.90, 3.18, 6.19};
  for (int k = 0; k < 3; ++k) CHECK(b.energies[k] == doctest::Approx(expected[k]).epsilon(0.02));
  CHECK(b.energies[1] - b.energies[0] == doctest::Approx(2.28).epsilon(0.02));
  CHECK(b.energies[2] - b.energies[1] == doctest::Approx(3.01).epsilon(0.02));
  for (int k = 0; k < b.size(); ++k) CHECK(b.chemical_potentials[k] == doctest::Approx(b.energies[k]).epsilon(1e-12));
}

TEST_CASE("interacting spectrum of the paper trap") {
  const ModeBasis& b = paper_basis();
  const Real expected[] = {1.09, 3.35, 6.34};
  for (int k = 0; k < 3; ++k) CHECK(b.energies[k] == doctest::Approx(expected[k]).epsilon(0.02));
  CHECK(b.qubit_splitting() == doctest::Approx(2.26).epsilon(0.02));
  CHECK(b.energies[2] - b.energies[1] == doctest::Approx(2.99).epsilon(0.02));
  for (int k = 0; k < b.size(); ++k) CHECK(b.chemical_potentials[k] > b.energies[k]);
}

TEST_CASE("harmonic trap: ground energy alpha2/2 and spacing alpha2") {
  const SpatialGrid grid(-3.0, 3.0, 301);
  for (Real alpha2 : {533.0, 1000.0, 2000.0}) {
    const ModeBasis b = mode_basis(TrapPotential(alpha2, 0.0), Nonlinearity(0.0), grid, 2);
    CHECK(units::khz_to_hz(b.energies[0]) == doctest::Approx(alpha2 / 2).epsilon(0.005));
    CHECK(units::khz_to_hz(b.qubit_splitting()) == doctest::Approx(alpha2).epsilon(0.005));
  }
}

TEST_CASE("modes are orthonormal with wall zeros and definite parity") {
  for (Real g : {0.0, nlgate::testing::kPaperG}) {
    const ModeBasis& b = paper_basis(g);
    for (int i = 0; i < b.size(); ++i) {
      CHECK(b[i][0] == Complex(0.0, 0.0));
      CHECK(b[i][b.grid.size() - 1] == Complex(0.0, 0.0));
      for (int j = 0; j < b.size(); ++j) {
        const Real expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(inner(b[i], b[j]) - expected) < 1e-9);
      }
      const int n = b.grid.size();
      const Real sign = i % 2 == 0 ? 1.0 : -1.0;
      for (int j = 0; j < n; ++j) CHECK(std::abs(b[i][j] - sign * b[i][n - 1 - j]) < 1e-6);
    }
  }
}

TEST_CASE("chemical potential exceeds energy by the interaction term") {
  const ModeBasis& b = paper_basis();
  const Real gk = b.g.khz_um();
  for (int k = 0; k < b.size(); ++k) {
    Real quartic = 0.0;
    for (int j = 0; j < b.grid.size(); ++j) quartic += std::norm(b[k][j]) * std::norm(b[k][j]);
    quartic *= b.grid.dx();
    CHECK(b.chemical_potentials[k] - b.energies[k] == doctest::Approx(0.5 * gk * quartic).epsilon(1e-9));
  }
}

TEST_CASE("lowest two modes satisfy the stationary equation") {
  for (Real g : {0.0, nlgate::testing::kPaperG}) {
    const ModeBasis& b = paper_basis(g);
    const int top = g == 0.0 ? b.size() : 2;
    for (int k = 0; k < top; ++k) {
      const ComplexVector h = apply_hamiltonian(b[k], b.trap, b.g, b[k].density());
      const ComplexVector r = h - b.chemical_potentials[k] * b[k].amplitudes();
      CHECK(r.norm() * std::sqrt(b.grid.dx()) < 1e-4);
    }
  }
}

TEST_CASE("excited state needs lower modes and an adequate grid") {
  const auto trap = nlgate::testing::paper_trap();
  CHECK_THROWS_AS(excited_state(trap, Nonlinearity(0.0), nlgate::testing::paper_grid(), {}), std::invalid_argument);
  CHECK_THROWS_AS(mode_basis(trap, Nonlinearity(0.0), nlgate::testing::paper_grid(), 0), std::invalid_argument);
}

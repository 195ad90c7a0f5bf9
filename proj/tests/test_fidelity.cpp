#include "doctest.h"
#include "fixtures.hpp"

using namespace nlgate;
using nlgate::testing::paper_basis;
using nlgate::testing::paper_setup;

TEST_CASE("Hadamard is unitary, self-inverse and has the standard matrix") {
  const GateSpec h = GateSpec::hadamard();
  CHECK(h.unitarity_error() < 1e-15);
  CHECK((h.then(h).matrix() - Eigen::Matrix2cd::Identity()).norm() < 1e-15);
  CHECK((h.inverse().matrix() - h.matrix()).norm() < 1e-15);
  const Real r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(h.matrix()(0, 0) - r) < 1e-15);
  CHECK(std::abs(h.matrix()(1, 1) + r) < 1e-15);
}

TEST_CASE("non-unitary matrices are rejected") {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, 0.0, 1.001;
  CHECK_THROWS_AS(GateSpec{m}, std::invalid_argument);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(GateSpec{m}, std::invalid_argument);
}

TEST_CASE("gate target embeds U times the input amplitudes") {
  const ModeBasis& b = paper_basis();
  const Wavefunction t = gate_target(GateSpec::hadamard(), QubitState::zero(), b);
  CHECK((bloch_coords(t, b) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-9);
  CHECK(state_fidelity(t, embed(QubitState::plus(), b)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(state_fidelity(t, embed(QubitState::minus(), b)) < 1e-12);
}

TEST_CASE("stationary poles have unit fidelity under the identity with no shaking") {
  const ControlSetup setup = paper_setup();
  const ControlTrajectory rest = ControlTrajectory::zero(1.0, 101);
  CHECK(gate_fidelity(setup, rest, GateSpec::identity(), QubitState::zero()) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gate_fidelity(setup, rest, GateSpec::identity(), QubitState::one()) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("summaries are consistent with the per-input values") {
  const ControlSetup setup = paper_setup();
  const auto traj = nlgate::testing::wiggle(101, 0.1);
  const FibonacciLattice lat = fibonacci_lattice(8);
  const FidelityReport r = average_gate_fidelity(setup, traj, GateSpec::hadamard(), lat.states, "unit");
  REQUIRE(r.fidelities.size() == 8);
  CHECK(r.failed.empty());
  Real sum = 0.0;
  for (Real f : r.fidelities) {
    CHECK(f >= r.min);
    CHECK(f <= r.max);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-12);
    sum += f;
  }
  CHECK(r.mean == doctest::Approx(sum / 8).epsilon(1e-14));
  CHECK(r.provenance == "unit");
  for (int i = 0; i < 8; ++i)
    CHECK(r.fidelities[i] == gate_fidelity(setup, traj, GateSpec::hadamard(), lat.states[i]));
}

TEST_CASE("threaded and serial averages agree exactly") {
  ControlSetup serial = paper_setup();
  ControlSetup threaded = serial;
  threaded.threads = 4;
  const auto traj = nlgate::testing::wiggle(101, 0.1);
  const auto inputs = fibonacci_lattice(6).states;
  const FidelityReport a = average_gate_fidelity(serial, traj, GateSpec::hadamard(), inputs);
  const FidelityReport b = average_gate_fidelity(threaded, traj, GateSpec::hadamard(), inputs);
  CHECK(a.mean == b.mean);
  CHECK(a.fidelities == b.fidelities);
}

TEST_CASE("trajectory mesh must match the setup") {
  const ControlSetup setup = paper_setup();
  CHECK_THROWS_AS(average_gate_fidelity(setup, ControlTrajectory::zero(1.0, 51), GateSpec::hadamard(),
                                        fibonacci_lattice(2).states),
                  std::invalid_argument);
}

#include "doctest.h"
#include "fixtures.hpp"

#include "nlgate/interferometry.hpp"

using namespace nlgate;
using nlgate::testing::paper_basis;

TEST_CASE("contrast of simple series") {
  RealVector s(4);
  s << 0.0, 1.0, 0.5, 0.2;
  CHECK(contrast(s) == doctest::Approx(1.0));
  s << 0.25, 0.75, 0.5, 0.5;
  CHECK(contrast(s) == doctest::Approx(0.5));
  CHECK(contrast(RealVector::Constant(3, 0.4)) == 0.0);
  CHECK(contrast(RealVector::Zero(3)) == 0.0);
  CHECK_THROWS_AS(contrast(RealVector()), std::invalid_argument);
}

TEST_CASE("dominant frequency of a sampled cosine") {
  for (Real f : {2.27, 3.5, 5.0}) {
    RealVector s(401);
    for (int j = 0; j < 401; ++j) s[j] = std::pow(std::cos(kPi * f * 0.005 * j), 2);
    CAPTURE(f);
    CHECK(dominant_frequency(s, 0.005) == doctest::Approx(f).epsilon(2e-3));
  }
  CHECK_THROWS_AS(dominant_frequency(RealVector::Zero(3), 0.1), std::invalid_argument);
  CHECK_THROWS_AS(dominant_frequency(RealVector::Zero(10), 0.0), std::invalid_argument);
}

TEST_CASE("free evolution of a stationary mode only changes its phase") {
  const ModeBasis& b = paper_basis();
  const Wavefunction out = free_evolve(b[0], b.trap, b.g, 0.2);
  CHECK(state_fidelity(out, b[0]) == doctest::Approx(1.0).epsilon(1e-6));
  const Complex overlap = inner(b[0], out);
  // Phase advance 2 pi mu t at the chemical potential of the mode.
  const Real expected = -kTwoPi * b.chemical_potentials[0] * 0.2;
  CHECK(std::remainder(std::arg(overlap) - expected, kTwoPi) == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("zero delay with exact Hadamard pulses returns to |0>") {
  const RamseyResult r = ramsey_run(paper_basis(), RamseyPulse::exact(GateSpec::hadamard()), 0.0);
  CHECK(r.p0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.p1 < 1e-12);
  CHECK_THROWS_AS(ramsey_run(paper_basis(), RamseyPulse::exact(GateSpec::hadamard()), -0.1), std::invalid_argument);
}

TEST_CASE("linear Ramsey readout follows the two-level fringe") {
  const ModeBasis& b = paper_basis(0.0);
  const Real dnu = b.qubit_splitting();
  const FringeScan scan = ramsey_scan(b, RamseyPulse::exact(GateSpec::hadamard()), default_tau_grid());
  REQUIRE(scan.tau.size() == 401);
  Real worst = 0.0;
  for (int i = 0; i < scan.tau.size(); ++i)
    worst = std::max(worst, std::abs(scan.p0[i] - std::pow(std::cos(kPi * dnu * scan.tau[i]), 2)));
  CHECK(worst < 0.01);
  CHECK(scan.fringe_frequency_khz == doctest::Approx(dnu).epsilon(0.01));
  CHECK(scan.contrast_p1 > 0.99);
  CHECK(scan.max_leakage < 1e-6);
}

TEST_CASE("undersampled or irregular delay grids are rejected") {
  const ModeBasis& b = paper_basis(0.0);
  const RamseyPulse h = RamseyPulse::exact(GateSpec::hadamard());
  CHECK_THROWS_AS(ramsey_scan(b, h, RealVector::LinSpaced(41, 0.0, 2.0)), std::invalid_argument);
  CHECK_THROWS_AS(ramsey_scan(b, h, RealVector::LinSpaced(101, 0.0, 0.5)), std::invalid_argument);
  RealVector bent = RealVector::LinSpaced(401, 0.0, 2.0);
  bent[200] += 1e-3;
  CHECK_THROWS_AS(ramsey_scan(b, h, bent), std::invalid_argument);
  CHECK_THROWS_AS(ramsey_scan(b, h, RealVector::LinSpaced(1, 0.0, 0.0)), std::invalid_argument);
}

TEST_CASE("recorded Bloch path carries stage tags in order") {
  const ModeBasis& b = paper_basis(0.0);
  RamseyOptions opt;
  opt.record = true;
  const RamseyResult r = ramsey_run(b, RamseyPulse::exact(GateSpec::hadamard()), 0.1, opt);
  const auto& path = bloch_path(r);
  REQUIRE(path.size() > 4);
  CHECK((path.front().xyz - Eigen::Vector3d(0, 0, 1)).norm() < 1e-9);
  CHECK(path.front().stage == RamseyStage::Pulse1);
  CHECK(path.back().stage == RamseyStage::Pulse2);
  int order = 0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const int s = static_cast<int>(path[i].stage);
    CHECK(s >= order);
    order = s;
    if (i > 0) CHECK(path[i].time >= path[i - 1].time);
    if (path[i].stage == RamseyStage::Free) CHECK(std::abs(path[i].xyz.z()) < 1e-9);
  }
  CHECK(path.back().p0 == doctest::Approx(r.p0).epsilon(1e-12));
  CHECK(stage_name(RamseyStage::Free) == "free");
  CHECK_THROWS_AS(bloch_path(ramsey_run(b, RamseyPulse::exact(GateSpec::hadamard()), 0.1)), std::invalid_argument);
}

TEST_CASE("free segment precesses about z at the qubit splitting") {
  const ModeBasis& b = paper_basis(0.0);
  RamseyOptions opt;
  opt.record = true;
  opt.record_interval = 0.0;
  const Real tau = 0.2;
  const RamseyResult r = ramsey_run(b, RamseyPulse::exact(GateSpec::hadamard()), tau, opt);
  const auto& path = bloch_path(r);
  const auto last_free = std::find_if(path.rbegin(), path.rend(),
                                      [](const BlochSample& s) { return s.stage == RamseyStage::Free; });
  REQUIRE(last_free != path.rend());
  // Relative phase of phi_1 against phi_0 falls at 2 pi dnu per ms.
  const Real angle = std::atan2(last_free->xyz.y(), last_free->xyz.x());
  const Real expected = -kTwoPi * b.qubit_splitting() * tau;
  CHECK(std::abs(std::remainder(angle - expected, kTwoPi)) < 5e-3);
}

#include "doctest.h"
#include "fixtures.hpp"

#include "nlgate/characterization.hpp"

using namespace nlgate;
using nlgate::testing::paper_setup;
using nlgate::testing::wiggle;

TEST_CASE("cell states map latitude to the polar angle") {
  CHECK((cell_state(90.0, 0.0).bloch_vector() - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
  CHECK((cell_state(-90.0, 0.0).bloch_vector() - Eigen::Vector3d(0, 0, -1)).norm() < 1e-12);
  CHECK((cell_state(0.0, 90.0).bloch_vector() - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
}

TEST_CASE("Eckert IV maps centre, poles and edges") {
  const PlanarPoint c = eckert4_project(0.0, 0.0);
  CHECK(c.x == 0.0);
  CHECK(std::abs(c.y) < 1e-15);
  const Real cy = 2.0 * std::sqrt(kPi / (4.0 + kPi));
  const Real cx = 2.0 / std::sqrt(kPi * (4.0 + kPi));
  const PlanarPoint n = eckert4_project(90.0, 45.0);
  CHECK(n.y == doctest::Approx(cy));
  CHECK(n.x == doctest::Approx(cx * kPi / 4.0));  // pole line has half the equator width
  CHECK(eckert4_project(-90.0, 0.0).y == doctest::Approx(-cy));
  CHECK(eckert4_project(0.0, 180.0).x == doctest::Approx(2.0 * cx * kPi));
  CHECK(eckert4_project(30.0, -60.0).x == doctest::Approx(-eckert4_project(30.0, 60.0).x));
  CHECK(eckert4_project(-30.0, 60.0).y == doctest::Approx(-eckert4_project(30.0, 60.0).y));
  CHECK_THROWS_AS(eckert4_project(91.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(eckert4_project(0.0, 181.0), std::invalid_argument);
}

TEST_CASE("Eckert IV converges within the iteration cap and solves its equation") {
  for (Real lat = -89.5; lat <= 89.5; lat += 1.0) {
    const PlanarPoint p = eckert4_project(lat, 10.0);
    CHECK(p.iterations <= 50);
    const Real cy = 2.0 * std::sqrt(kPi / (4.0 + kPi));
    const Real theta = std::asin(p.y / cy);
    const Real residual =
        theta + std::sin(theta) * std::cos(theta) + 2.0 * std::sin(theta) - (2.0 + kPi / 2) * std::sin(lat * kPi / 180);
    CHECK(std::abs(residual) < 1e-9);
  }
}

TEST_CASE("Eckert IV preserves area") {
  // Area of a latitude band on the map, from the full-width outline, against
  // the band area on the unit sphere.
  auto map_area = [](Real lat1, Real lat2) {
    const int n = 4000;
    Real area = 0.0;
    PlanarPoint prev = eckert4_project(lat1, 180.0);
    for (int k = 1; k <= n; ++k) {
      const PlanarPoint cur = eckert4_project(lat1 + (lat2 - lat1) * k / n, 180.0);
      area += (prev.x + cur.x) * (cur.y - prev.y);  // width 2x, trapezoid
      prev = cur;
    }
    return area;
  };
  auto sphere_area = [](Real lat1, Real lat2) {
    return kTwoPi * (std::sin(lat2 * kPi / 180) - std::sin(lat1 * kPi / 180));
  };
  CHECK(map_area(-90.0, 90.0) == doctest::Approx(4.0 * kPi).epsilon(5e-3));
  for (auto [a, b] : std::vector<std::pair<Real, Real>>{{0, 30}, {30, 60}, {60, 90}, {-45, -10}}) {
    CAPTURE(a);
    CHECK(map_area(a, b) == doctest::Approx(sphere_area(a, b)).epsilon(5e-3));
  }
}

TEST_CASE("strided map has consistent summary statistics") {
  ControlSetup setup = paper_setup();
  setup.threads = 2;
  const ControlTrajectory traj = wiggle(101, 0.1);
  const SphereFidelityMap map = fidelity_heatmap(setup, traj, GateSpec::hadamard(), 60);
  REQUIRE(map.cells.size() == 18);
  CHECK(map.failures == 0);
  Real sum = 0.0, lo = 2.0, hi = -1.0;
  for (const auto& c : map.cells) {
    sum += c.fidelity;
    lo = std::min(lo, c.fidelity);
    hi = std::max(hi, c.fidelity);
  }
  CHECK(std::abs(map.mean - sum / 18) < 1e-12);
  CHECK(map.min == lo);
  CHECK(map.max == hi);
  CHECK(map.solid_angle_mean >= lo);
  CHECK(map.solid_angle_mean <= hi);
  CHECK(map.cells.front().latitude == -89.5);
  CHECK(map.cells.front().longitude == -179.5);
  CHECK(map.cells[1].longitude == -119.5);
  CHECK(map.cells[6].latitude == -29.5);
  // A cell agrees with a direct evaluation of its input state.
  const FidelityCell& c = map.cells[7];
  CHECK(std::abs(c.fidelity - gate_fidelity(setup, traj, GateSpec::hadamard(), cell_state(c.latitude, c.longitude))) <
        1e-10);
  CHECK_THROWS_AS(fidelity_heatmap(setup, traj, GateSpec::hadamard(), 0), std::invalid_argument);
}

TEST_CASE("g sweep needs at least two values") {
  CHECK_THROWS_AS(g_sweep(paper_setup(), nlgate::testing::paper_trap(), GateSpec::hadamard(), FrequencyBand{1, 3},
                          {223.0}, {}),
                  std::invalid_argument);
}

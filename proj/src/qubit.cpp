#include "nlgate/qubit.hpp"

#include <cmath>

namespace nlgate {

namespace {

Real wrap_azimuth(Real phi) {
  Real w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

QubitState::QubitState(Real theta, Real phi) : theta_(theta), phi_(wrap_azimuth(phi)) {
  if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("polar angle must lie in [0, pi]");
}

QubitState QubitState::from_amplitudes(const QubitAmplitudes& c) {
  const Real n = c.norm();
  if (!(n > 0.0)) throw std::invalid_argument("zero qubit amplitudes");
  const Real a0 = std::abs(c[0]) / n;
  const Real a1 = std::abs(c[1]) / n;
  const Real theta = 2.0 * std::atan2(a1, a0);
  const Real phi = a0 > 0.0 && a1 > 0.0 ? std::arg(c[1]) - std::arg(c[0]) : 0.0;
  return QubitState(theta, phi);
}

QubitAmplitudes QubitState::amplitudes() const {
  return {Complex(std::cos(0.5 * theta_), 0.0), std::polar(std::sin(0.5 * theta_), phi_)};
}

Eigen::Vector3d QubitState::bloch_vector() const {
  return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
}

FibonacciLattice fibonacci_lattice(int count) {
  if (count < 1) throw std::invalid_argument("Fibonacci lattice needs at least one point");
  FibonacciLattice lattice;
  lattice.count = count;
  lattice.points.reserve(count);
  lattice.states.reserve(count);
  for (int i = 1; i <= count; ++i) {
    const Real z = static_cast<Real>(2 * i - 1) / count - 1.0;
    const Real r = std::sqrt(std::max(0.0, 1.0 - z * z));
    // i * zeta reduced mod 1 before scaling keeps the angle accurate for large i.
    const Real turns = std::fmod(i * kGoldenConjugate, 1.0);
    const Real x = r * std::cos(kTwoPi * turns);
    const Real y = r * std::sin(kTwoPi * turns);
    lattice.points.emplace_back(x, y, z);
    lattice.states.emplace_back(std::acos(z), std::atan2(y, x));
  }
  return lattice;
}

Wavefunction embed(const QubitAmplitudes& c, const ModeBasis& basis) {
  if (basis.size() < 2) throw std::invalid_argument("embedding needs at least two modes");
  Wavefunction psi = c[0] * basis[0] + c[1] * basis[1];
  return psi.normalize();
}

Wavefunction embed(const QubitState& q, const ModeBasis& basis) { return embed(q.amplitudes(), basis); }

Projection project(const Wavefunction& psi, const ModeBasis& basis, Real time) {
  Projection out;
  out.coefficients.resize(basis.size());
  out.populations.p.resize(basis.size());
  out.populations.time = time;
  for (int i = 0; i < basis.size(); ++i) {
    out.coefficients[i] = inner(basis[i], psi);
    out.populations.p[i] = std::norm(out.coefficients[i]);
  }
  return out;
}

Eigen::Vector3d bloch_coords(const Wavefunction& psi, const ModeBasis& basis) {
  if (basis.size() < 2) throw std::invalid_argument("Bloch coordinates need at least two modes");
  const Complex a = inner(basis[0], psi);
  const Complex b = inner(basis[1], psi);
  const Complex ab = std::conj(a) * b;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

}  // namespace nlgate

#ifndef NLGATE_QUBIT_HPP
#define NLGATE_QUBIT_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "nlgate/stationary.hpp"

namespace nlgate {

using QubitAmplitudes = Eigen::Vector2cd;

/// |theta, phi> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>, c0 real >= 0.
class QubitState {
 public:
  QubitState(Real theta, Real phi);

  static QubitState zero() { return {0.0, 0.0}; }
  static QubitState one() { return {kPi, 0.0}; }
  static QubitState plus() { return {kPi / 2, 0.0}; }
  static QubitState minus() { return {kPi / 2, kPi}; }
  static QubitState plus_i() { return {kPi / 2, kPi / 2}; }
  static QubitState minus_i() { return {kPi / 2, 3 * kPi / 2}; }
  /// Gauge-fixes arbitrary amplitudes (global phase removed, renormalized).
  static QubitState from_amplitudes(const QubitAmplitudes& c);

  Real theta() const { return theta_; }
  Real phi() const { return phi_; }
  QubitAmplitudes amplitudes() const;
  Eigen::Vector3d bloch_vector() const;

 private:
  Real theta_;
  Real phi_;
};

/// Fibonacci lattice on S^2: z_i = (2i - 1)/M - 1, azimuth 2 pi i zeta.
struct FibonacciLattice {
  int count = 0;
  std::vector<Eigen::Vector3d> points;
  std::vector<QubitState> states;
};

/// Golden-ratio conjugate (sqrt 5 - 1)/2.
inline constexpr Real kGoldenConjugate = 0.6180339887498948482;

FibonacciLattice fibonacci_lattice(int count);

/// psi = c0 phi_0 + c1 phi_1, renormalized.
Wavefunction embed(const QubitAmplitudes& c, const ModeBasis& basis);
Wavefunction embed(const QubitState& q, const ModeBasis& basis);

struct LevelPopulations {
  RealVector p;
  Real time = 0.0;
  Real total() const { return p.sum(); }
};

struct Projection {
  ComplexVector coefficients;
  LevelPopulations populations;
};

/// Coefficients <phi_i|psi> and populations |<phi_i|psi>|^2 on every mode.
Projection project(const Wavefunction& psi, const ModeBasis& basis, Real time = 0.0);

/// (2 Re(a* b), 2 Im(a* b), |a|^2 - |b|^2) from a = <phi_0|psi>, b = <phi_1|psi>.
Eigen::Vector3d bloch_coords(const Wavefunction& psi, const ModeBasis& basis);

}  // namespace nlgate

#endif  // NLGATE_QUBIT_HPP

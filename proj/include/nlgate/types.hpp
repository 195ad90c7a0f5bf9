#ifndef NLGATE_TYPES_HPP
#define NLGATE_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace nlgate {

using Real = double;
using Complex = std::complex<Real>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using RealVector = VectorX<Real>;
using ComplexVector = VectorX<Complex>;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Real kTwoPi = 2.0 * kPi;

// Unit system: lengths in um, times in ms, frequencies (E/h) in kHz.
namespace units {

// hbar / (2 m) for 87Rb in um^2/ms, CODATA 2018, 6 significant digits.
inline constexpr Real kKineticPrefactor = 0.365369;

// Energies in the Hamiltonian are carried as E/h in kHz. The kinetic term
// -(hbar^2/2m) d_xx / h becomes -(hbar/2m)/(2 pi) d_xx.
inline constexpr Real kKineticKHz = kKineticPrefactor / kTwoPi;

inline constexpr Real hz_to_khz(Real hz) { return hz * 1e-3; }
inline constexpr Real khz_to_hz(Real khz) { return khz * 1e3; }

}  // namespace units

/// Raised when an iterative solver runs out of budget.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Real residual)
      : std::runtime_error(what), residual_(residual) {}
  Real residual() const { return residual_; }

 private:
  Real residual_;
};

}  // namespace nlgate

#endif  // NLGATE_TYPES_HPP

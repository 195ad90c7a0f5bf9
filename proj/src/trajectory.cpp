#include "nlgate/trajectory.hpp"

#include <cmath>

namespace nlgate {

ControlTrajectory::ControlTrajectory(Real duration_ms, RealVector samples)
    : duration_(duration_ms), samples_(std::move(samples)) {
  if (!(duration_ms > 0.0)) throw std::invalid_argument("trajectory duration must be positive");
  if (samples_.size() < 2) throw std::invalid_argument("trajectory needs at least two samples");
}

ControlTrajectory ControlTrajectory::zero(Real duration_ms, int n_samples) {
  return ControlTrajectory(duration_ms, RealVector::Zero(n_samples));
}

bool ControlTrajectory::pinned(Real tol) const {
  return std::abs(samples_[0]) <= tol && std::abs(samples_[size() - 1]) <= tol;
}

ControlSpectrum::ControlSpectrum(Real duration_ms, int first_bin, ComplexVector coefficients)
    : duration_(duration_ms), first_bin_(first_bin), coefficients_(std::move(coefficients)) {
  if (!(duration_ms > 0.0)) throw std::invalid_argument("spectrum duration must be positive");
  if (first_bin < 1) throw std::invalid_argument("spectrum band must exclude the DC bin");
}

ControlSpectrum ControlSpectrum::from_polar(Real duration_ms, int first_bin, const RealVector& moduli,
                                            const RealVector& phases) {
  if (moduli.size() != phases.size()) throw std::invalid_argument("modulus/phase length mismatch");
  ComplexVector c(moduli.size());
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = std::polar(moduli[k], phases[k]);
  return ControlSpectrum(duration_ms, first_bin, std::move(c));
}

int min_samples_for_band(int max_bin) { return 2 * max_bin + 2; }

ControlTrajectory synthesize_trajectory(const ControlSpectrum& spectrum, int n_samples) {
  if (n_samples < 2) throw std::invalid_argument("trajectory needs at least two samples");
  if (!spectrum.empty() && n_samples < min_samples_for_band(spectrum.last_bin()))
    throw std::invalid_argument("sample count below the sampling bound for this band");
  const int periods = n_samples - 1;
  RealVector lambda = RealVector::Zero(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    Real acc = 0.0;
    for (int k = 0; k < spectrum.size(); ++k) {
      const Real angle = kTwoPi * static_cast<Real>(static_cast<long>(spectrum.first_bin() + k) * j % periods) / periods;
      const Complex c = spectrum.coefficients()[k];
      acc += c.real() * std::cos(angle) - c.imag() * std::sin(angle);
    }
    lambda[j] = acc;
  }
  const Real start = lambda[0];
  const Real slope = (lambda[n_samples - 1] - start) / (n_samples - 1);
  for (int j = 0; j < n_samples; ++j) lambda[j] -= start + slope * j;
  return ControlTrajectory(spectrum.duration(), std::move(lambda));
}

ControlSpectrum analyze_trajectory(const ControlTrajectory& trajectory) {
  const int periods = trajectory.size() - 1;
  const int top = (periods - 1) / 2;
  ComplexVector c = ComplexVector::Zero(std::max(top, 0));
  for (int i = 1; i <= top; ++i) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < periods; ++j) {
      const Real angle = kTwoPi * static_cast<Real>(static_cast<long>(i) * j % periods) / periods;
      acc += trajectory[j] * Complex(std::cos(angle), -std::sin(angle));
    }
    c[i - 1] = acc * (2.0 / periods);
  }
  return ControlSpectrum(trajectory.duration(), 1, std::move(c));
}

}  // namespace nlgate

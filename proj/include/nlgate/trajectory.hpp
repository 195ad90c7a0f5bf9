#ifndef NLGATE_TRAJECTORY_HPP
#define NLGATE_TRAJECTORY_HPP

#include <vector>

#include "nlgate/types.hpp"

namespace nlgate {

/// Trap displacement lambda(t_j) in um sampled at t_j = j T / (n - 1).
class ControlTrajectory {
 public:
  ControlTrajectory(Real duration_ms, RealVector samples);

  static ControlTrajectory zero(Real duration_ms, int n_samples);

  Real duration() const { return duration_; }
  int size() const { return static_cast<int>(samples_.size()); }
  Real dt() const { return duration_ / (size() - 1); }
  Real time(int j) const { return dt() * j; }
  const RealVector& samples() const { return samples_; }
  RealVector& samples() { return samples_; }
  Real operator[](int j) const { return samples_[j]; }

  Real max_excursion() const { return samples_.cwiseAbs().maxCoeff(); }
  bool pinned(Real tol = 1e-12) const;

 private:
  Real duration_;
  RealVector samples_;
};

/// Complex coefficients on the band [first_bin, first_bin + size) of the
/// frequency mesh f_i = i / T.
class ControlSpectrum {
 public:
  ControlSpectrum(Real duration_ms, int first_bin, ComplexVector coefficients);

  static ControlSpectrum from_polar(Real duration_ms, int first_bin, const RealVector& moduli,
                                    const RealVector& phases);

  Real duration() const { return duration_; }
  int first_bin() const { return first_bin_; }
  int last_bin() const { return first_bin_ + size() - 1; }
  int size() const { return static_cast<int>(coefficients_.size()); }
  bool empty() const { return coefficients_.size() == 0; }
  Real frequency(int k) const { return (first_bin_ + k) / duration_; }
  const ComplexVector& coefficients() const { return coefficients_; }
  ComplexVector& coefficients() { return coefficients_; }

 private:
  Real duration_;
  int first_bin_;
  ComplexVector coefficients_;
};

/// Contiguous index range [first, last] of frequency bins, DC excluded.
struct FrequencyBand {
  int first = 1;
  int last = 0;
  int size() const { return last - first + 1; }
  bool empty() const { return last < first; }
  friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;
};

/// Band-limited inverse transform; endpoints pinned to zero by removing the
/// straight line through the first and last samples.
ControlTrajectory synthesize_trajectory(const ControlSpectrum& spectrum, int n_samples);

/// Forward transform over the n - 1 periodic samples, positive bins
/// 1 .. (n - 2) / 2, scaled so that synthesis inverts it.
ControlSpectrum analyze_trajectory(const ControlTrajectory& trajectory);

/// Smallest admissible sample count for a band whose top bin is max_bin.
int min_samples_for_band(int max_bin);

}  // namespace nlgate

#endif  // NLGATE_TRAJECTORY_HPP

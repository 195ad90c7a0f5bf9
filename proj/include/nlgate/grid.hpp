#ifndef NLGATE_GRID_HPP
#define NLGATE_GRID_HPP

#include "nlgate/types.hpp"

namespace nlgate {

/// Uniform 1D position mesh including both endpoints. Lengths in um.
class SpatialGrid {
 public:
  SpatialGrid(Real x_min, Real x_max, int n_points);

  Real x_min() const { return x_min_; }
  Real x_max() const { return x_max_; }
  int size() const { return n_points_; }
  Real dx() const { return dx_; }
  Real x(int j) const { return x_min_ + dx_ * j; }
  RealVector points() const;

  bool symmetric() const;

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  Real x_min_;
  Real x_max_;
  int n_points_;
  Real dx_;
};

SpatialGrid make_grid(Real x_min, Real x_max, int n_points);

}  // namespace nlgate

#endif  // NLGATE_GRID_HPP

#include "nlgate/grid.hpp"

#include <cmath>

namespace nlgate {

SpatialGrid::SpatialGrid(Real x_min, Real x_max, int n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (!(x_max > x_min)) throw std::invalid_argument("grid requires x_max > x_min");
  if (n_points < 3) throw std::invalid_argument("grid requires at least 3 points");
  dx_ = (x_max - x_min) / (n_points - 1);
}

RealVector SpatialGrid::points() const {
  RealVector xs(n_points_);
  for (int j = 0; j < n_points_; ++j) xs[j] = x(j);
  return xs;
}

bool SpatialGrid::symmetric() const { return std::abs(x_min_ + x_max_) <= 1e-12 * x_max_; }

SpatialGrid make_grid(Real x_min, Real x_max, int n_points) {
  return SpatialGrid(x_min, x_max, n_points);
}

}  // namespace nlgate

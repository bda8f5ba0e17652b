#pragma once

#include "gibbsperc/particles.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace gibbsperc {

/// Uniform cell grid over particle centres. Queries visit every centre within
/// a Euclidean radius of a point; with cell size >= radius only the one-ring
/// of neighbouring cells is scanned.
class CenterGrid {
 public:
  CenterGrid(std::span<const Particle> particles, double cell_size);

  template <class Fn>
  void for_each_near(const Point& p, double radius, Fn&& fn) const {
    if (cells_.empty()) return;
    const int reach = static_cast<int>(std::clamp(std::ceil(radius / cell_), 1.0, 1e6));
    int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      const int c = cell_coord(p[a], a);
      lo[a] = std::max(0, c - reach);
      hi[a] = std::min(extent_[a] - 1, c + reach);
      if (lo[a] > hi[a]) return;
    }
    const double r2 = radius * radius;
    for (int i = lo[0]; i <= hi[0]; ++i) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int k = lo[2]; k <= hi[2]; ++k) {
          const std::size_t cell = (static_cast<std::size_t>(i) * extent_[1] + j) * extent_[2] + k;
          for (std::size_t n = starts_[cell]; n < starts_[cell + 1]; ++n) {
            const std::size_t idx = cells_[n];
            if ((centers_[idx] - p).squaredNorm() <= r2) fn(idx);
          }
        }
      }
    }
  }

  std::vector<std::size_t> near(const Point& p, double radius) const;
  double cell_size() const { return cell_; }

 private:
  int cell_coord(double x, int axis) const {
    const double c = std::floor((x - origin_[axis]) / cell_);
    if (c < -1e9) return -1000000000;
    if (c > 1e9) return 1000000000;
    return static_cast<int>(c);
  }

  int dim_ = 1;
  double cell_ = 1.0;
  Point origin_ = Point::Zero();
  int extent_[3] = {1, 1, 1};
  std::vector<Point> centers_;
  std::vector<std::size_t> starts_;
  std::vector<std::size_t> cells_;
};

}  // namespace gibbsperc

#include "gibbsperc/spatial_grid.hpp"

#include <algorithm>

namespace gibbsperc {

CenterGrid::CenterGrid(std::span<const Particle> particles, double cell_size) {
  if (particles.empty()) return;
  dim_ = particles.front().dim();
  centers_.reserve(particles.size());
  Point lo = Point::Constant(kInfinity), hi = Point::Constant(-kInfinity);
  for (const auto& p : particles) {
    centers_.push_back(p.center());
    lo = lo.cwiseMin(p.center());
    hi = hi.cwiseMax(p.center());
  }
  // Keep the cell count within a small multiple of the particle count.
  cell_ = cell_size > 0.0 ? cell_size : 1.0;
  const double budget = 8.0 * static_cast<double>(particles.size()) + 64.0;
  for (;;) {
    double cells = 1.0;
    for (int a = 0; a < dim_; ++a) cells *= std::floor((hi[a] - lo[a]) / cell_) + 1.0;
    if (cells <= budget) break;
    cell_ *= 2.0;
  }
  origin_ = lo;
  std::size_t total = 1;
  for (int a = 0; a < dim_; ++a) {
    extent_[a] = static_cast<int>(std::floor((hi[a] - lo[a]) / cell_)) + 1;
    total *= static_cast<std::size_t>(extent_[a]);
  }

  std::vector<std::size_t> cell_of(centers_.size());
  starts_.assign(total + 1, 0);
  for (std::size_t n = 0; n < centers_.size(); ++n) {
    int c[3] = {0, 0, 0};
    for (int a = 0; a < dim_; ++a) c[a] = std::clamp(cell_coord(centers_[n][a], a), 0, extent_[a] - 1);
    cell_of[n] = (static_cast<std::size_t>(c[0]) * extent_[1] + c[1]) * extent_[2] + c[2];
    ++starts_[cell_of[n] + 1];
  }
  for (std::size_t i = 1; i < starts_.size(); ++i) starts_[i] += starts_[i - 1];
  cells_.resize(centers_.size());
  std::vector<std::size_t> fill(starts_.begin(), starts_.end() - 1);
  for (std::size_t n = 0; n < centers_.size(); ++n) cells_[fill[cell_of[n]]++] = n;
}

std::vector<std::size_t> CenterGrid::near(const Point& p, double radius) const {
  std::vector<std::size_t> out;
  for_each_near(p, radius, [&](std::size_t i) { out.push_back(i); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gibbsperc

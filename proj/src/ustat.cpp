#include "gibbsperc/ustat.hpp"

#include "gibbsperc/spatial_grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace gibbsperc {
namespace {

// Calls fn on every ordered tuple of `len` distinct entries of `pool`,
// written into tuple[first .. first + len).
template <class Fn>
void for_each_ordered(std::span<const Particle> pool, std::vector<Particle>& tuple, std::size_t first, std::size_t len,
                      std::vector<char>& used, Fn&& fn) {
  if (len == 0) {
    fn(std::span<const Particle>(tuple));
    return;
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = 1;
    tuple[first] = pool[i];
    for_each_ordered(pool, tuple, first + 1, len - 1, used, fn);
    used[i] = 0;
  }
}

double sum_anchored(const UStatSpec& spec, const Particle& anchor, std::span<const Particle> pool) {
  std::vector<Particle> tuple(static_cast<std::size_t>(spec.order), anchor);
  std::vector<char> used(pool.size(), 0);
  double sum = 0.0;
  for_each_ordered(pool, tuple, 1, tuple.size() - 1, used, [&](std::span<const Particle> t) { sum += spec.evaluate(t); });
  return sum;
}

}  // namespace

UStatSpec UStatSpec::facet_g(int j, double R) {
  if (j < 1 || j > 2) throw std::invalid_argument("facet_g supports j = 1, 2 in the plane");
  UStatSpec s;
  s.kind = Kind::FacetG;
  s.order = j;
  s.radius = 2.0 * R;
  s.sup_norm = j == 1 ? 2.0 * R : 1.0;
  return s;
}

UStatSpec UStatSpec::zero(int order) {
  UStatSpec s;
  s.kind = Kind::Zero;
  s.order = order;
  s.radius = 1.0;
  s.sup_norm = 0.0;
  return s;
}

UStatSpec UStatSpec::one() {
  UStatSpec s;
  s.kind = Kind::One;
  s.order = 1;
  s.radius = 1.0;
  s.sup_norm = 1.0;
  return s;
}

UStatSpec UStatSpec::close_pair(double r) {
  UStatSpec s;
  s.kind = Kind::ClosePair;
  s.order = 2;
  s.radius = r;
  s.sup_norm = 1.0;
  return s;
}

UStatSpec UStatSpec::tent(double r) {
  UStatSpec s;
  s.kind = Kind::Tent;
  s.order = 2;
  s.radius = r;
  s.sup_norm = r;
  return s;
}

UStatSpec UStatSpec::make_custom(int order, double radius, double sup_norm, std::function<double(std::span<const Particle>)> h) {
  if (order < 1) throw std::invalid_argument("kernel order must be >= 1");
  UStatSpec s;
  s.kind = Kind::Custom;
  s.order = order;
  s.radius = radius;
  s.sup_norm = sup_norm;
  s.custom = std::move(h);
  return s;
}

double UStatSpec::kernel(std::span<const Particle> t) const {
  switch (kind) {
    case Kind::FacetG: return q_measure(order, t);
    case Kind::Zero: return 0.0;
    case Kind::One: return 1.0;
    case Kind::ClosePair: return hausdorff_distance(t[0], t[1]) <= radius ? 1.0 : 0.0;
    case Kind::Tent: return std::max(0.0, radius - hausdorff_distance(t[0], t[1]));
    case Kind::Custom: return custom(t);
  }
  return 0.0;
}

double UStatSpec::evaluate(std::span<const Particle> t) const {
  if (t.size() != static_cast<std::size_t>(order)) throw std::invalid_argument("kernel arity mismatch");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] == t[0]) return 0.0;
    if (hausdorff_distance(t[i], t[0]) > radius) return 0.0;
  }
  return kernel(t);
}

std::string UStatSpec::name() const {
  switch (kind) {
    case Kind::FacetG: return "facet_g";
    case Kind::Zero: return "zero";
    case Kind::One: return "one";
    case Kind::ClosePair: return "close_pair";
    case Kind::Tent: return "tent";
    case Kind::Custom: return "custom";
  }
  return "unknown";
}

double UStatSpec::factorial() const {
  double f = 1.0;
  for (int i = 2; i <= order; ++i) f *= i;
  return f;
}

double u_statistic(const UStatSpec& spec, const Configuration& xi) {
  if (xi.size() < static_cast<std::size_t>(spec.order)) return 0.0;
  const auto particles = xi.particles();
  double sum = 0.0;
  if (spec.order == 1) {
    for (const auto& k : particles) sum += spec.evaluate(std::span<const Particle>(&k, 1));
    return sum;
  }
  const CenterGrid grid(particles, spec.radius);
  std::vector<Particle> pool;
  for (std::size_t i = 0; i < particles.size(); ++i) {
    pool.clear();
    grid.for_each_near(particles[i].center(), spec.radius, [&](std::size_t j) {
      if (j != i) pool.push_back(particles[j]);
    });
    if (pool.size() + 1 < static_cast<std::size_t>(spec.order)) continue;
    sum += sum_anchored(spec, particles[i], pool);
  }
  return sum / spec.factorial();
}

double score(const UStatSpec& spec, const Particle& k, const Configuration& xi) {
  if (spec.order == 1) return spec.evaluate(std::span<const Particle>(&k, 1));
  std::vector<Particle> pool;
  for (const auto& l : xi) {
    if (!(l == k) && (l.center() - k.center()).norm() <= spec.radius) pool.push_back(l);
  }
  if (pool.size() + 1 < static_cast<std::size_t>(spec.order)) return 0.0;
  return sum_anchored(spec, k, pool) / spec.factorial();
}

}  // namespace gibbsperc

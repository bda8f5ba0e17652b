#include "gibbsperc/particles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace gibbsperc {
namespace {

double cross2(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double segment_segment_distance(const Particle& s, const Particle& t) {
  const Point a = s.endpoint_a(), b = s.endpoint_b();
  const Point c = t.endpoint_a(), d = t.endpoint_b();
  const double o1 = cross2(b - a, c - a);
  const double o2 = cross2(b - a, d - a);
  const double o3 = cross2(d - c, a - c);
  const double o4 = cross2(d - c, b - c);
  const bool straddle_ab = (o1 > kGeomEps && o2 < -kGeomEps) || (o1 < -kGeomEps && o2 > kGeomEps);
  const bool straddle_cd = (o3 > kGeomEps && o4 < -kGeomEps) || (o3 < -kGeomEps && o4 > kGeomEps);
  if (straddle_ab && straddle_cd) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

// Support-function form d_H = max_u |h_B(u) - h_S(u)| for a ball B(c, r) and
// a segment m + [-l, l] e. The difference is a sinusoid on each half circle
// split by the normal of e, so the maximum sits at a split point or at a
// stationary point of one of the two sinusoids.
double ball_segment_hausdorff(const Particle& ball, const Particle& seg) {
  const Point dc = ball.center() - seg.center();
  const Point e = seg.direction();
  const double r = ball.radius();
  const double l = seg.half_length();
  auto gap = [&](const Point& u) { return std::abs(dc.dot(u) + r - l * std::abs(e.dot(u))); };

  const Point normal(-e.y(), e.x(), 0.0);
  double best = std::max(gap(normal), gap(-normal));
  for (const double sign : {1.0, -1.0}) {
    const Point w = dc - sign * l * e;
    const double wn = w.norm();
    if (wn == 0.0) continue;
    for (const double dir : {1.0, -1.0}) {
      const Point u = dir * w / wn;
      if (sign * e.dot(u) >= 0.0) best = std::max(best, gap(u));
    }
  }
  return best;
}

void require_same_dim(const Particle& k, const Particle& l) {
  if (k.dim() != l.dim()) throw GeometryError("particles of different dimension");
}

}  // namespace

Particle Particle::ball(int dim, const Point& center, double radius) {
  if (dim < 1 || dim > 3) throw GeometryError("ball dimension must be 1, 2 or 3");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("ball radius must be positive and finite");
  if (!center.allFinite()) throw GeometryError("ball centre must be finite");
  Point c = Point::Zero();
  c.head(dim) = center.head(dim);
  return Particle(Shape::Ball, dim, c, radius, 0.0);
}

Particle Particle::segment(double x, double y, double orientation, double half_length) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) throw GeometryError("segment half length must be positive and finite");
  if (!(orientation >= 0.0 && orientation < std::numbers::pi)) throw GeometryError("segment orientation must lie in [0, pi)");
  if (!std::isfinite(x) || !std::isfinite(y)) throw GeometryError("segment centre must be finite");
  return Particle(Shape::Segment, 2, Point(x, y, 0.0), half_length, orientation);
}

Point Particle::direction() const {
  if (shape_ == Shape::Ball) return Point::UnitX();
  return Point(std::cos(orientation_), std::sin(orientation_), 0.0);
}

Particle Particle::translated(const Point& shift) const {
  Particle out = *this;
  out.center_.head(dim_) += shift.head(dim_);
  return out;
}

double Particle::max_norm() const {
  if (shape_ == Shape::Ball) return center_.norm() + size_;
  return std::max(endpoint_a().norm(), endpoint_b().norm());
}

double Particle::min_coord(int axis) const {
  if (shape_ == Shape::Ball) return center_[axis] - size_;
  return std::min(endpoint_a()[axis], endpoint_b()[axis]);
}

double Particle::max_coord(int axis) const {
  if (shape_ == Shape::Ball) return center_[axis] + size_;
  return std::max(endpoint_a()[axis], endpoint_b()[axis]);
}

std::strong_ordering compare(const Particle& a, const Particle& b) {
  auto cmp = [](double x, double y) {
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  };
  for (int i = 0; i < 3; ++i) {
    if (auto c = cmp(a.center()[i], b.center()[i]); c != 0) return c;
  }
  if (auto c = a.shape() <=> b.shape(); c != 0) return c;
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  if (auto c = cmp(a.size(), b.size()); c != 0) return c;
  return cmp(a.orientation(), b.orientation());
}

double hausdorff_distance(const Particle& k, const Particle& l) {
  require_same_dim(k, l);
  if (k == l) return 0.0;
  if (k.shape() == Shape::Ball && l.shape() == Shape::Ball) {
    return (k.center() - l.center()).norm() + std::abs(k.radius() - l.radius());
  }
  if (k.shape() == Shape::Segment && l.shape() == Shape::Segment) {
    const Point a = k.endpoint_a(), b = k.endpoint_b();
    const Point c = l.endpoint_a(), d = l.endpoint_b();
    return std::max({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
  }
  return k.shape() == Shape::Ball ? ball_segment_hausdorff(k, l) : ball_segment_hausdorff(l, k);
}

bool intersects(const Particle& k, const Particle& l) {
  require_same_dim(k, l);
  if (k.shape() == Shape::Ball && l.shape() == Shape::Ball) {
    return (k.center() - l.center()).norm() <= k.radius() + l.radius();
  }
  if (k.shape() == Shape::Segment && l.shape() == Shape::Segment) {
    return segment_segment_distance(k, l) <= kGeomEps;
  }
  const Particle& ball = k.shape() == Shape::Ball ? k : l;
  const Particle& seg = k.shape() == Shape::Ball ? l : k;
  return point_segment_distance(ball.center(), seg.endpoint_a(), seg.endpoint_b()) <= ball.radius();
}

double q_measure(int j, std::span<const Particle> particles) {
  if (j < 1 || j > 2) throw GeometryError("q_measure supports j = 1 and j = 2 only");
  if (particles.size() != static_cast<std::size_t>(j)) throw GeometryError("q_measure needs exactly j particles");
  for (const auto& p : particles) {
    if (p.shape() != Shape::Segment) throw GeometryError("q_measure is defined for segments");
  }
  if (j == 1) return 2.0 * particles[0].half_length();

  const Particle& s = particles[0];
  const Particle& t = particles[1];
  if (!intersects(s, t)) return 0.0;
  const Point e = s.direction();
  if (std::abs(cross2(e, t.direction())) >= kGeomEps) return 1.0;
  // Parallel and touching: collinear. One common point counts, an overlap
  // of positive length has infinite H^0 and is assigned 0.
  const double ta = (t.endpoint_a() - s.center()).dot(e);
  const double tb = (t.endpoint_b() - s.center()).dot(e);
  const double lo = std::max(-s.half_length(), std::min(ta, tb));
  const double hi = std::min(s.half_length(), std::max(ta, tb));
  return hi - lo <= kGeomEps ? 1.0 : 0.0;
}

double config_distance(std::span<const Particle> psi, std::span<const Particle> gamma) {
  double best = kInfinity;
  for (const auto& a : psi) {
    for (const auto& b : gamma) best = std::min(best, hausdorff_distance(a, b));
  }
  return best;
}

Window::Window(int dim, double volume) : dim_(dim), volume_(volume), side_(0.0) {
  if (dim < 1 || dim > 3) throw GeometryError("window dimension must be 1, 2 or 3");
  if (!(volume > 0.0) || !std::isfinite(volume)) throw GeometryError("window volume must be positive");
  side_ = dim == 1 ? volume : dim == 2 ? std::sqrt(volume) : std::cbrt(volume);
}

Window Window::from_side(int dim, double side) {
  if (!(side >= 0.0)) throw GeometryError("window side must be non-negative");
  return Window(dim, std::pow(side, dim), side);
}

bool Window::contains(const Point& p) const {
  for (int i = 0; i < dim_; ++i) {
    if (std::abs(p[i]) > half_side()) return false;
  }
  return true;
}

double Window::distance_to(const Point& p) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double excess = std::abs(p[i]) - half_side();
    if (excess > 0.0) s += excess * excess;
  }
  return std::sqrt(s);
}

Window Window::eroded(double margin) const { return from_side(dim_, std::max(0.0, side_ - 2.0 * margin)); }

Configuration::Configuration(std::vector<Particle> particles) : particles_(std::move(particles)) {
  std::sort(particles_.begin(), particles_.end(), ParticleLess{});
  for (std::size_t i = 1; i < particles_.size(); ++i) {
    if (particles_[i] == particles_[i - 1]) throw GeometryError("configuration must be simple (duplicate particle)");
  }
  for (const auto& p : particles_) {
    if (p.dim() != particles_.front().dim()) throw GeometryError("configuration mixes dimensions");
  }
}

bool Configuration::contains(const Particle& k) const {
  return std::binary_search(particles_.begin(), particles_.end(), k, ParticleLess{});
}

bool Configuration::insert(const Particle& k) {
  auto it = std::lower_bound(particles_.begin(), particles_.end(), k, ParticleLess{});
  if (it != particles_.end() && *it == k) return false;
  particles_.insert(it, k);
  return true;
}

bool Configuration::erase(const Particle& k) {
  auto it = std::lower_bound(particles_.begin(), particles_.end(), k, ParticleLess{});
  if (it == particles_.end() || !(*it == k)) return false;
  particles_.erase(it);
  return true;
}

Configuration Configuration::plus(const Particle& k) const {
  Configuration out = *this;
  if (!out.insert(k)) throw GeometryError("particle already present");
  return out;
}

Configuration Configuration::plus(const Configuration& other) const {
  std::vector<Particle> merged;
  merged.reserve(size() + other.size());
  std::merge(begin(), end(), other.begin(), other.end(), std::back_inserter(merged), ParticleLess{});
  return Configuration(std::move(merged));
}

Configuration Configuration::minus(const Particle& k) const {
  Configuration out = *this;
  out.erase(k);
  return out;
}

Configuration Configuration::below(const Particle& k) const {
  Configuration out;
  auto it = std::lower_bound(particles_.begin(), particles_.end(), k, ParticleLess{});
  out.particles_.assign(particles_.begin(), it);
  return out;
}

Configuration Configuration::translated(const Point& shift) const {
  std::vector<Particle> moved;
  moved.reserve(size());
  for (const auto& p : particles_) moved.push_back(p.translated(shift));
  return Configuration(std::move(moved));
}

Configuration restrict(const Configuration& xi, const Window& w) {
  std::vector<Particle> kept;
  for (const auto& p : xi) {
    if (w.contains(p.center())) kept.push_back(p);
  }
  return Configuration(std::move(kept));
}

Configuration symmetric_difference(const Configuration& a, const Configuration& b) {
  std::vector<Particle> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), ParticleLess{});
  return Configuration(std::move(out));
}

bool is_subset(const Configuration& a, const Configuration& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end(), ParticleLess{});
}

FactorialTuples::iterator::iterator(std::size_t n, std::size_t m, bool done) : n_(n), done_(done) {
  if (done_) return;
  idx_.resize(m);
  for (std::size_t i = 0; i < m; ++i) idx_[i] = i;
}

bool FactorialTuples::iterator::distinct() const {
  for (std::size_t i = 0; i < idx_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (idx_[i] == idx_[j]) return false;
    }
  }
  return true;
}

bool FactorialTuples::iterator::advance() {
  for (std::size_t pos = idx_.size(); pos-- > 0;) {
    if (++idx_[pos] < n_) return true;
    idx_[pos] = 0;
  }
  return false;
}

FactorialTuples::iterator& FactorialTuples::iterator::operator++() {
  do {
    if (!advance()) {
      done_ = true;
      idx_.clear();
      return *this;
    }
  } while (!distinct());
  return *this;
}

FactorialTuples::FactorialTuples(std::size_t n, std::size_t m) : n_(n), m_(m) {}

FactorialTuples factorial_tuples(const Configuration& xi, std::size_t m) {
  if (m == 0) throw GeometryError("factorial_tuples needs m >= 1");
  return FactorialTuples(xi.size(), m);
}

std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t m) {
  if (m > n) return 0;
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < m; ++i) out *= n - i;
  return out;
}

}  // namespace gibbsperc

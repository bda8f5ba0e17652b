#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace gibbsperc {

/// Absolute tolerance for segment predicates (collinearity, touching).
inline constexpr double kGeomEps = 1e-9;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Points are stored in three coordinates; coordinates beyond the particle
/// dimension are kept at zero.
using Point = Eigen::Vector3d;

enum class Shape : std::uint8_t { Ball = 0, Segment = 1 };

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A compact particle: a closed ball in R^d (d = 1, 2, 3) or a closed segment
/// in the plane. The stored centre is the centre of the circumscribed ball.
class Particle {
 public:
  static Particle ball(int dim, const Point& center, double radius);
  static Particle ball(double x, double y, double radius) { return ball(2, Point(x, y, 0.0), radius); }
  /// Segment centred at (x, y) with direction angle in [0, pi).
  static Particle segment(double x, double y, double orientation, double half_length);

  Shape shape() const { return shape_; }
  int dim() const { return dim_; }
  const Point& center() const { return center_; }
  /// Radius for balls, half length for segments; both equal the circumradius.
  double size() const { return size_; }
  double radius() const { return size_; }
  double half_length() const { return size_; }
  double orientation() const { return orientation_; }

  /// Unit direction of a segment (undefined for balls, returns e_x).
  Point direction() const;
  Point endpoint_a() const { return center_ - size_ * direction(); }
  Point endpoint_b() const { return center_ + size_ * direction(); }

  Particle translated(const Point& shift) const;

  /// Largest Euclidean norm of a point of the particle.
  double max_norm() const;
  /// Smallest and largest value of the coordinate `axis` over the particle.
  double min_coord(int axis) const;
  double max_coord(int axis) const;

  friend bool operator==(const Particle& a, const Particle& b) = default;

 private:
  Particle(Shape shape, int dim, const Point& center, double size, double orientation)
      : center_(center), size_(size), orientation_(orientation), dim_(dim), shape_(shape) {}

  Point center_;
  double size_;
  double orientation_;
  int dim_;
  Shape shape_;
};

/// Lexicographic total order: centre coordinates, shape, size, orientation.
std::strong_ordering compare(const Particle& a, const Particle& b);

struct ParticleLess {
  bool operator()(const Particle& a, const Particle& b) const { return compare(a, b) < 0; }
};

double hausdorff_distance(const Particle& k, const Particle& l);
bool intersects(const Particle& k, const Particle& l);

/// Q_j for planar segments: j = 1 gives the length, j = 2 the number of
/// intersection points (0 when the intersection is an overlap of positive length).
double q_measure(int j, std::span<const Particle> particles);

/// Infimum of pairwise Hausdorff distances, +inf if either set is empty.
double config_distance(std::span<const Particle> psi, std::span<const Particle> gamma);

/// Centred cube [-s/2, s/2]^d of volume n.
class Window {
 public:
  Window(int dim, double volume);
  static Window from_side(int dim, double side);

  int dim() const { return dim_; }
  double volume() const { return volume_; }
  double side() const { return side_; }
  double half_side() const { return 0.5 * side_; }

  bool contains(const Point& p) const;
  /// Euclidean distance from p to the cube (0 inside).
  double distance_to(const Point& p) const;
  /// Cube with each face moved inwards by `margin` (side >= 0).
  Window eroded(double margin) const;

 private:
  Window(int dim, double volume, double side) : dim_(dim), volume_(volume), side_(side) {}
  int dim_;
  double volume_;
  double side_;
};

/// Finite simple counting measure, stored sorted by the total order.
class Configuration {
 public:
  using const_iterator = std::vector<Particle>::const_iterator;

  Configuration() = default;
  /// Sorts; throws GeometryError on duplicates or mixed dimensions.
  explicit Configuration(std::vector<Particle> particles);

  std::size_t size() const { return particles_.size(); }
  bool empty() const { return particles_.empty(); }
  const_iterator begin() const { return particles_.begin(); }
  const_iterator end() const { return particles_.end(); }
  const Particle& operator[](std::size_t i) const { return particles_[i]; }
  std::span<const Particle> particles() const { return particles_; }

  bool contains(const Particle& k) const;
  /// Returns false (and leaves the configuration unchanged) if k is present.
  bool insert(const Particle& k);
  bool erase(const Particle& k);

  /// xi + delta_K; throws if K is already present.
  Configuration plus(const Particle& k) const;
  /// Sum of two configurations with disjoint supports; throws otherwise.
  Configuration plus(const Configuration& other) const;
  Configuration minus(const Particle& k) const;
  /// Particles strictly below k in the total order.
  Configuration below(const Particle& k) const;
  Configuration translated(const Point& shift) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Particle> particles_;
};

Configuration restrict(const Configuration& xi, const Window& w);
/// Support-level symmetric difference.
Configuration symmetric_difference(const Configuration& a, const Configuration& b);
bool is_subset(const Configuration& a, const Configuration& b);

/// Ordered m-tuples of pairwise distinct particles of a configuration,
/// enumerated lexicographically by index.
class FactorialTuples {
 public:
  class iterator {
   public:
    using value_type = std::vector<std::size_t>;
    using difference_type = std::ptrdiff_t;

    const std::vector<std::size_t>& operator*() const { return idx_; }
    iterator& operator++();
    bool operator==(const iterator& o) const { return done_ == o.done_ && (done_ || idx_ == o.idx_); }

   private:
    friend class FactorialTuples;
    iterator(std::size_t n, std::size_t m, bool done);
    bool advance();
    bool distinct() const;
    std::vector<std::size_t> idx_;
    std::size_t n_ = 0;
    bool done_ = true;
  };

  FactorialTuples(std::size_t n, std::size_t m);
  iterator begin() const { return iterator(n_, m_, n_ < m_ || m_ == 0); }
  iterator end() const { return iterator(n_, m_, true); }

 private:
  std::size_t n_;
  std::size_t m_;
};

FactorialTuples factorial_tuples(const Configuration& xi, std::size_t m);
/// N (N-1) ... (N-m+1).
std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t m);

}  // namespace gibbsperc

#pragma once

#include "gibbsperc/particles.hpp"

#include <functional>
#include <span>
#include <string>

namespace gibbsperc {

/// Symmetric, translation invariant, bounded kernel h of order k that vanishes
/// once max_i d_H(K_i, K_1) > radius.
struct UStatSpec {
  enum class Kind { FacetG, Zero, One, ClosePair, Tent, Custom };

  Kind kind = Kind::FacetG;
  int order = 2;
  /// Locality radius r.
  double radius = 1.0;
  /// sup |h|.
  double sup_norm = 1.0;
  /// Custom kernel; receives exactly `order` pairwise distinct particles.
  std::function<double(std::span<const Particle>)> custom;

  /// G_j: h = Q_j, r = 2R.
  static UStatSpec facet_g(int j, double R);
  /// h == 0 of the given order.
  static UStatSpec zero(int order);
  /// k = 1, h == 1 (F counts particles).
  static UStatSpec one();
  /// k = 2, h = 1{d_H <= r}.
  static UStatSpec close_pair(double r);
  /// k = 2, h = max(0, r - d_H); continuous in the configuration.
  static UStatSpec tent(double r);
  static UStatSpec make_custom(int order, double radius, double sup_norm, std::function<double(std::span<const Particle>)> h);

  /// h on distinct particles, without the locality cut-off applied.
  double kernel(std::span<const Particle> tuple) const;
  /// h with the admissibility conventions enforced (0 on repeats and beyond r).
  double evaluate(std::span<const Particle> tuple) const;

  std::string name() const;
  double factorial() const;

  friend bool operator==(const UStatSpec& a, const UStatSpec& b) {
    return a.kind == b.kind && a.order == b.order && a.radius == b.radius && a.sup_norm == b.sup_norm;
  }
};

/// F_h(xi) = (1/k!) sum over ordered k-tuples of distinct particles of h.
/// Uses a centre grid with cell size r, so only local tuples are visited.
double u_statistic(const UStatSpec& spec, const Configuration& xi);

/// T(K, xi) = (1/k!) sum over ordered (k-1)-tuples of xi of h(K, ...);
/// h(K) for k = 1.
double score(const UStatSpec& spec, const Particle& k, const Configuration& xi);

}  // namespace gibbsperc

#pragma once

#include "gibbsperc/particles.hpp"
#include "gibbsperc/rng.hpp"

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gibbsperc {

/// Orientation distribution of segments: uniform on [0, pi) when `angles` is
/// empty, otherwise a finite law over `angles` with the given weights.
struct OrientationLaw {
  std::vector<double> angles;
  std::vector<double> weights;

  bool uniform() const { return angles.empty(); }
  double draw(RngStream& rng) const;
  friend bool operator==(const OrientationLaw&, const OrientationLaw&) = default;
};

/// Particle distribution Q: centred balls of radius R, or centred segments of
/// half length R with an orientation law.
struct ParticleLaw {
  Shape shape = Shape::Ball;
  OrientationLaw orientation;

  friend bool operator==(const ParticleLaw&, const ParticleLaw&) = default;
};

/// Energy of a pair (or a configuration). Infinite energies are flagged so
/// that hard-core exclusions give exactly zero Boltzmann weight.
struct Energy {
  double value = 0.0;
  bool infinite = false;

  static Energy hard() { return {0.0, true}; }
  Energy& operator+=(const Energy& o) {
    infinite = infinite || o.infinite;
    value += o.value;
    return *this;
  }
  bool is_zero() const { return !infinite && value == 0.0; }
  double boltzmann() const;
  /// +inf for infinite energies.
  double as_double() const { return infinite ? kInfinity : value; }
};

struct NoInteraction {
  friend bool operator==(const NoInteraction&, const NoInteraction&) = default;
};
/// phi_2(K, L) = inf * 1{K and L intersect}.
struct Hardcore {
  friend bool operator==(const Hardcore&, const Hardcore&) = default;
};
/// phi_2(K, L) = a2 * Q_2(K, L) for segments.
struct Facet {
  double a2 = 0.0;
  friend bool operator==(const Facet&, const Facet&) = default;
};
/// Step function of the Hausdorff distance: phi_2 = values[i] on
/// (edges[i-1], edges[i]], zero beyond edges.back(). Values may be +inf.
struct PairTable {
  std::vector<double> edges;
  std::vector<double> values;
  friend bool operator==(const PairTable&, const PairTable&) = default;
};
/// User-supplied non-negative pair potential with a declared finite range
/// (in Hausdorff distance).
struct PairCallback {
  std::function<Energy(const Particle&, const Particle&)> phi;
  double range = 0.0;
  std::string name = "callback";
  friend bool operator==(const PairCallback& a, const PairCallback& b) { return a.name == b.name && a.range == b.range; }
};

using Potential = std::variant<NoInteraction, Hardcore, Facet, PairTable, PairCallback>;

struct ModelSpec {
  int dim = 2;
  double lambda = 1.0;
  /// Deterministic particle size bound R.
  double R = 0.5;
  ParticleLaw law;
  Potential potential;

  /// Finite interaction range R_phi in Hausdorff distance.
  double interaction_range() const;
  bool interacting() const { return !std::holds_alternative<NoInteraction>(potential); }
  /// Draw a particle with the given centre from Q.
  Particle draw_particle(const Point& center, RngStream& rng) const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  /// lambda < 1 / (v_d 2^d R^d), the sufficient subcriticality bound.
  bool subcritical_by_bound = false;
  double percolation_bound = 0.0;

  bool ok() const { return errors.empty(); }
};

ValidationReport validate(const ModelSpec& model);

Energy pair_energy(const ModelSpec& model, const Particle& k, const Particle& l);

/// kappa(K, xi) = exp(-sum_L phi_2(K, L)); zero if K is in xi or a hard-core
/// overlap occurs.
double papangelou(const ModelSpec& model, const Particle& k, const Configuration& xi);
/// Energy whose Boltzmann weight is papangelou(model, K, xi) when K is not in xi.
Energy local_energy(const ModelSpec& model, const Particle& k, std::span<const Particle> xi);

/// kappa_p(K_1..K_p, xi) = kappa(K_1, xi) kappa(K_2, xi + K_1) ...
double papangelou_p(const ModelSpec& model, std::span<const Particle> tuple, const Configuration& xi);

/// H(xi, chi) for disjoint supports; throws GeometryError on overlap.
Energy hamiltonian(const ModelSpec& model, const Configuration& xi, const Configuration& chi);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

}  // namespace gibbsperc

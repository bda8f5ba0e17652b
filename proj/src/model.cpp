#include "gibbsperc/model.hpp"

#include "gibbsperc/spatial_grid.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace gibbsperc {

double OrientationLaw::draw(RngStream& rng) const {
  if (uniform()) {
    const double a = rng.uniform(0.0, std::numbers::pi);
    return a < std::numbers::pi ? a : 0.0;
  }
  if (angles.size() == 1) return angles.front();
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (u < weights[i]) return angles[i];
    u -= weights[i];
  }
  return angles.back();
}

double Energy::boltzmann() const { return infinite ? 0.0 : std::exp(-value); }

double ModelSpec::interaction_range() const {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoInteraction>) return 0.0;
        else if constexpr (std::is_same_v<T, Hardcore> || std::is_same_v<T, Facet>) return 2.0 * R;
        else if constexpr (std::is_same_v<T, PairTable>) return p.edges.empty() ? 0.0 : p.edges.back();
        else return p.range;
      },
      potential);
}

Particle ModelSpec::draw_particle(const Point& center, RngStream& rng) const {
  if (law.shape == Shape::Ball) return Particle::ball(dim, center, R);
  return Particle::segment(center.x(), center.y(), law.orientation.draw(rng), R);
}

double unit_ball_volume(int d) { return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

ValidationReport validate(const ModelSpec& model) {
  ValidationReport report;
  auto& err = report.errors;
  if (model.dim < 1 || model.dim > 3) err.push_back("model.dimension: must be 1, 2 or 3");
  if (!(model.lambda > 0.0) || !std::isfinite(model.lambda)) err.push_back("model.lambda: must be a positive finite number");
  if (!(model.R > 0.0) || !std::isfinite(model.R)) err.push_back("model.radius: must be a positive finite number");

  const auto& o = model.law.orientation;
  if (model.law.shape == Shape::Segment) {
    if (model.dim != 2) err.push_back("model.shape: segments require dimension 2");
    if (o.angles.size() != o.weights.size()) err.push_back("model.weights: one weight per angle required");
    for (double a : o.angles) {
      if (!(a >= 0.0 && a < std::numbers::pi)) err.push_back("model.angles: angles must lie in [0, pi)");
    }
    double total = 0.0;
    for (double w : o.weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) err.push_back("model.weights: weights must be non-negative");
      total += w;
    }
    if (!o.angles.empty() && !(total > 0.0)) err.push_back("model.weights: weights must not all be zero");
  }

  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Facet>) {
          if (model.law.shape != Shape::Segment) err.push_back("model.potential: facet potential requires segment particles");
          if (!(p.a2 >= 0.0) || !std::isfinite(p.a2)) err.push_back("model.a2: must be non-negative (repulsive potentials only)");
        } else if constexpr (std::is_same_v<T, PairTable>) {
          if (p.edges.empty() || p.edges.size() != p.values.size()) err.push_back("model.table: edges and values must be non-empty and of equal length");
          for (std::size_t i = 0; i < p.edges.size(); ++i) {
            if (!(p.edges[i] > 0.0) || !std::isfinite(p.edges[i]) || (i > 0 && !(p.edges[i] > p.edges[i - 1])))
              err.push_back("model.table_edges: must be positive, finite and strictly increasing");
          }
          for (double v : p.values) {
            if (!(v >= 0.0)) err.push_back("model.table_values: must be non-negative (repulsive potentials only)");
          }
        } else if constexpr (std::is_same_v<T, PairCallback>) {
          if (!p.phi) err.push_back("model.potential: callback missing");
          if (!(p.range >= 0.0) || !std::isfinite(p.range)) err.push_back("model.potential: callback range must be finite");
        }
      },
      model.potential);

  if (report.errors.empty()) {
    report.percolation_bound = 1.0 / (unit_ball_volume(model.dim) * std::pow(2.0 * model.R, model.dim));
    report.subcritical_by_bound = model.lambda < report.percolation_bound;
  }
  return report;
}

Energy pair_energy(const ModelSpec& model, const Particle& k, const Particle& l) {
  return std::visit(
      [&](const auto& p) -> Energy {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoInteraction>) {
          return {};
        } else if constexpr (std::is_same_v<T, Hardcore>) {
          return intersects(k, l) ? Energy::hard() : Energy{};
        } else if constexpr (std::is_same_v<T, Facet>) {
          if (p.a2 == 0.0) return {};
          const Particle pair[2] = {k, l};
          return {p.a2 * q_measure(2, pair), false};
        } else if constexpr (std::is_same_v<T, PairTable>) {
          const double d = hausdorff_distance(k, l);
          for (std::size_t i = 0; i < p.edges.size(); ++i) {
            if (d <= p.edges[i]) return std::isinf(p.values[i]) ? Energy::hard() : Energy{p.values[i], false};
          }
          return {};
        } else {
          return p.phi(k, l);
        }
      },
      model.potential);
}

Energy local_energy(const ModelSpec& model, const Particle& k, std::span<const Particle> xi) {
  Energy e;
  if (!model.interacting()) return e;
  const double range = model.interaction_range();
  for (const auto& l : xi) {
    // d_H >= centre distance, so the centre test never drops an interacting pair.
    if ((l.center() - k.center()).norm() > range) continue;
    e += pair_energy(model, k, l);
    if (e.infinite) break;
  }
  return e;
}

double papangelou(const ModelSpec& model, const Particle& k, const Configuration& xi) {
  if (xi.contains(k)) return 0.0;
  return local_energy(model, k, xi.particles()).boltzmann();
}

double papangelou_p(const ModelSpec& model, std::span<const Particle> tuple, const Configuration& xi) {
  Configuration current = xi;
  double product = 1.0;
  for (const auto& k : tuple) {
    const double kappa = papangelou(model, k, current);
    if (kappa == 0.0) return 0.0;
    product *= kappa;
    current.insert(k);
  }
  return product;
}

Energy hamiltonian(const ModelSpec& model, const Configuration& xi, const Configuration& chi) {
  for (const auto& k : xi) {
    if (chi.contains(k)) throw GeometryError("hamiltonian: xi and chi must have disjoint supports");
  }
  Energy total;
  if (xi.empty() || !model.interacting()) return total;
  const double range = model.interaction_range();
  const auto inner = xi.particles();
  const CenterGrid inner_grid(inner, range);
  for (std::size_t i = 0; i < inner.size() && !total.infinite; ++i) {
    inner_grid.for_each_near(inner[i].center(), range, [&](std::size_t j) {
      if (j > i) total += pair_energy(model, inner[i], inner[j]);
    });
  }
  if (!chi.empty() && !total.infinite) {
    const auto outer = chi.particles();
    const CenterGrid outer_grid(outer, range);
    for (const auto& k : inner) {
      outer_grid.for_each_near(k.center(), range, [&](std::size_t j) { total += pair_energy(model, k, outer[j]); });
      if (total.infinite) break;
    }
  }
  return total;
}

}  // namespace gibbsperc

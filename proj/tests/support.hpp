#pragma once

#include "gibbsperc/model.hpp"
#include "gibbsperc/particles.hpp"
#include "gibbsperc/rng.hpp"

#include <numbers>
#include <vector>

namespace gibbsperc::testing {

inline Particle random_ball(RngStream& rng, int dim, double spread, double rmax = 1.0) {
  Point c = Point::Zero();
  for (int a = 0; a < dim; ++a) c[a] = rng.uniform(-spread, spread);
  return Particle::ball(dim, c, rng.uniform(0.05, rmax));
}

inline Particle random_segment(RngStream& rng, double spread, double hmax = 1.0) {
  return Particle::segment(rng.uniform(-spread, spread), rng.uniform(-spread, spread), rng.uniform(0.0, std::numbers::pi),
                           rng.uniform(0.05, hmax));
}

inline Configuration random_segments(RngStream& rng, std::size_t n, double spread, double h = 0.5) {
  std::vector<Particle> ps;
  for (std::size_t i = 0; i < n; ++i) {
    ps.push_back(Particle::segment(rng.uniform(-spread, spread), rng.uniform(-spread, spread),
                                   rng.uniform(0.0, std::numbers::pi), h));
  }
  return Configuration(std::move(ps));
}

inline Configuration random_balls(RngStream& rng, std::size_t n, double spread, double r = 0.5) {
  std::vector<Particle> ps;
  for (std::size_t i = 0; i < n; ++i) ps.push_back(Particle::ball(rng.uniform(-spread, spread), rng.uniform(-spread, spread), r));
  return Configuration(std::move(ps));
}

inline ModelSpec poisson_balls(double lambda, double R = 0.5) {
  ModelSpec m;
  m.lambda = lambda;
  m.R = R;
  return m;
}

inline ModelSpec hardcore_balls(double lambda, double R = 0.5) {
  ModelSpec m = poisson_balls(lambda, R);
  m.potential = Hardcore{};
  return m;
}

/// Facet model with orientations {0, pi/2} at equal weight.
inline ModelSpec facet_cross(double lambda, double a2, double R = 0.5) {
  ModelSpec m;
  m.lambda = lambda;
  m.R = R;
  m.law.shape = Shape::Segment;
  m.law.orientation.angles = {0.0, std::numbers::pi / 2};
  m.law.orientation.weights = {1.0, 1.0};
  m.potential = Facet{a2};
  return m;
}

}  // namespace gibbsperc::testing

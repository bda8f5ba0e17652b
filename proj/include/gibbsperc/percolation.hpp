#pragma once

#include "gibbsperc/model.hpp"
#include "gibbsperc/particles.hpp"
#include "gibbsperc/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gibbsperc {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t i);
  bool unite(std::size_t a, std::size_t b);

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

/// Connected components of the intersection graph. Cluster ids are numbered
/// in order of first appearance, so they do not depend on the union order.
struct ClusterPartition {
  std::vector<std::size_t> cluster_of;
  std::vector<std::size_t> sizes;

  std::size_t count() const { return sizes.size(); }
  bool same(std::size_t i, std::size_t j) const { return cluster_of[i] == cluster_of[j]; }
};

ClusterPartition clusters(std::span<const Particle> particles);
inline ClusterPartition clusters(const Configuration& xi) { return clusters(xi.particles()); }

/// True iff some K in psi and L in gamma are joined by a path of pairwise
/// intersecting particles of xi + K + L.
bool connects(const Configuration& xi, std::span<const Particle> psi, std::span<const Particle> gamma);

/// Indices (into `particles`) of the cluster containing particles[seed].
std::vector<std::size_t> cluster_of(std::span<const Particle> particles, std::size_t seed);

struct ExponentialFit {
  double c1 = 0.0;
  /// Decay rate: log p(s) ~ log c1 - c2 s.
  double c2 = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

struct DecaySeries {
  std::vector<double> distances;
  std::vector<double> estimates;
  std::vector<double> ci_lo;
  std::vector<double> ci_hi;
  /// Per-point standard errors of the estimates.
  std::vector<double> sigma;
  std::vector<std::uint64_t> replicates;
  /// False where no data exists for a distance (reported as missing).
  std::vector<bool> present;
  ExponentialFit fit;
};

/// Weighted log-linear fit over points with positive estimates; weights are
/// inverse delta-method variances of log p.
ExponentialFit fit_exponential(std::span<const double> s, std::span<const double> p, std::span<const double> sigma);

struct ProbeGeometry {
  /// Probe particle; defaults to a ball of radius R at the origin.
  Particle probe = Particle::ball(2, Point::Zero(), 0.5);
  std::vector<double> radii;
};

ProbeGeometry default_probe(const ModelSpec& model, std::vector<double> radii);

/// Monte-Carlo estimate of P(probe is connected to the complement of B(0, s))
/// in Poisson(lambda mu) + probe. One Poisson sample on B(0, s_max + 4R) per
/// replicate is shared across all radii.
DecaySeries estimate_connection_decay(const ModelSpec& model, const ProbeGeometry& geometry, std::uint64_t replicates,
                                      const RngStream& rng, int threads = 1);

/// 1 / (v_d 2^d R^d).
double percolation_lower_bound(int d, double R);
/// 1 / (v_d (1 + 2R)^d).
double sy13_bound(int d, double R);

struct CrossingRow {
  double lambda = 0.0;
  double n = 0.0;
  double estimate = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t replicates = 0;
};

/// True iff a cluster of xi touches both faces x_0 = -s/2 and x_0 = s/2 of w.
bool crosses(const Configuration& xi, const Window& w);

/// Left-right crossing probabilities of Poisson(lambda mu) on W_n. Each
/// replicate draws one Poisson sample at the largest lambda and thins it with
/// independent uniform marks, so estimates are monotone in lambda per replicate.
std::vector<CrossingRow> estimate_lambda_c(const ModelSpec& family, std::span<const double> windows,
                                           std::span<const double> lambdas, std::uint64_t replicates,
                                           const RngStream& rng, int threads = 1);

}  // namespace gibbsperc

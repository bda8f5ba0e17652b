#include "gibbsperc/percolation.hpp"

#include "gibbsperc/parallel.hpp"
#include "gibbsperc/sampler.hpp"
#include "gibbsperc/spatial_grid.hpp"
#include "gibbsperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gibbsperc {
namespace {

double max_size(std::span<const Particle> particles) {
  double m = 0.0;
  for (const auto& p : particles) m = std::max(m, p.size());
  return m;
}

// Calls fn(i, j) for every intersecting pair i < j.
template <class Fn>
void for_each_intersecting_pair(std::span<const Particle> particles, Fn&& fn) {
  if (particles.size() < 2) return;
  const double reach = 2.0 * max_size(particles);
  const CenterGrid grid(particles, reach);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    grid.for_each_near(particles[i].center(), reach, [&](std::size_t j) {
      if (j > i && intersects(particles[i], particles[j])) fn(i, j);
    });
  }
}

}  // namespace

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

std::size_t UnionFind::find(std::size_t i) {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

ClusterPartition clusters(std::span<const Particle> particles) {
  UnionFind uf(particles.size());
  for_each_intersecting_pair(particles, [&](std::size_t i, std::size_t j) { uf.unite(i, j); });
  ClusterPartition out;
  out.cluster_of.resize(particles.size());
  std::vector<std::size_t> id_of_root(particles.size(), SIZE_MAX);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const std::size_t root = uf.find(i);
    if (id_of_root[root] == SIZE_MAX) {
      id_of_root[root] = out.sizes.size();
      out.sizes.push_back(0);
    }
    out.cluster_of[i] = id_of_root[root];
    ++out.sizes[id_of_root[root]];
  }
  return out;
}

bool connects(const Configuration& xi, std::span<const Particle> psi, std::span<const Particle> gamma) {
  if (psi.empty() || gamma.empty()) return false;
  std::vector<Particle> all(xi.begin(), xi.end());
  const std::size_t psi_first = all.size();
  all.insert(all.end(), psi.begin(), psi.end());
  const std::size_t gamma_first = all.size();
  all.insert(all.end(), gamma.begin(), gamma.end());
  const ClusterPartition part = clusters(all);
  for (std::size_t i = psi_first; i < gamma_first; ++i) {
    for (std::size_t j = gamma_first; j < all.size(); ++j) {
      if (part.same(i, j)) return true;
    }
  }
  return false;
}

std::vector<std::size_t> cluster_of(std::span<const Particle> particles, std::size_t seed) {
  if (seed >= particles.size()) throw std::out_of_range("cluster_of: seed index");
  const double reach = 2.0 * max_size(particles);
  const CenterGrid grid(particles, reach);
  std::vector<char> seen(particles.size(), 0);
  std::vector<std::size_t> out{seed};
  seen[seed] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    const Particle& p = particles[out[head]];
    grid.for_each_near(p.center(), reach, [&](std::size_t j) {
      if (!seen[j] && intersects(p, particles[j])) {
        seen[j] = 1;
        out.push_back(j);
      }
    });
  }
  return out;
}

ExponentialFit fit_exponential(std::span<const double> s, std::span<const double> p, std::span<const double> sigma) {
  std::vector<double> x, y, w;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(p[i] > 0.0)) continue;
    x.push_back(s[i]);
    y.push_back(std::log(p[i]));
    const double rel = sigma[i] / p[i];
    w.push_back(rel > 0.0 ? 1.0 / (rel * rel) : 1e12);
  }
  ExponentialFit fit;
  const stats::LineFit line = stats::weighted_line_fit(x, y, w);
  fit.points = line.points;
  if (line.points < 2) return fit;
  fit.c1 = std::exp(line.intercept);
  fit.c2 = -line.slope;
  fit.r2 = line.r2;
  return fit;
}

ProbeGeometry default_probe(const ModelSpec& model, std::vector<double> radii) {
  return {Particle::ball(model.dim, Point::Zero(), model.R), std::move(radii)};
}

DecaySeries estimate_connection_decay(const ModelSpec& model, const ProbeGeometry& geometry, std::uint64_t replicates,
                                      const RngStream& rng, int threads) {
  if (replicates == 0) throw std::invalid_argument("estimate_connection_decay: replicates must be positive");
  const auto& radii = geometry.radii;
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw std::invalid_argument("estimate_connection_decay: radii must increase");
  }
  const double s_max = radii.empty() ? 0.0 : radii.back();
  const double sample_radius = s_max + 4.0 * model.R;

  // Largest distance from the origin reached by the probe's cluster.
  std::vector<double> reach(replicates, 0.0);
  parallel_for(replicates, threads, [&](std::size_t r) {
    const Configuration poisson = sample_poisson_in_ball(model, sample_radius, rng.split(r));
    std::vector<Particle> all(poisson.begin(), poisson.end());
    all.push_back(geometry.probe);
    double m = 0.0;
    for (const auto idx : cluster_of(all, all.size() - 1)) m = std::max(m, all[idx].max_norm());
    reach[r] = m;
  });

  DecaySeries out;
  for (const double s : radii) {
    std::uint64_t hits = 0;
    for (const double m : reach) hits += m > s ? 1 : 0;
    const double p = static_cast<double>(hits) / static_cast<double>(replicates);
    const auto [lo, hi] = stats::wilson_interval(hits, replicates);
    out.distances.push_back(s);
    out.estimates.push_back(p);
    out.ci_lo.push_back(lo);
    out.ci_hi.push_back(hi);
    out.sigma.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(replicates)));
    out.replicates.push_back(replicates);
    out.present.push_back(true);
  }
  out.fit = fit_exponential(out.distances, out.estimates, out.sigma);
  return out;
}

double percolation_lower_bound(int d, double R) {
  if (d < 1 || d > 3 || !(R > 0.0)) throw std::invalid_argument("percolation_lower_bound: need d in {1,2,3} and R > 0");
  return 1.0 / (unit_ball_volume(d) * std::pow(2.0 * R, d));
}

double sy13_bound(int d, double R) {
  if (d < 1 || d > 3 || !(R > 0.0)) throw std::invalid_argument("sy13_bound: need d in {1,2,3} and R > 0");
  return 1.0 / (unit_ball_volume(d) * std::pow(1.0 + 2.0 * R, d));
}

bool crosses(const Configuration& xi, const Window& w) {
  const auto particles = xi.particles();
  if (particles.empty()) return false;
  const ClusterPartition part = clusters(particles);
  std::vector<char> left(part.count(), 0), right(part.count(), 0);
  for (std::size_t i = 0; i < particles.size(); ++i) {
    const auto c = part.cluster_of[i];
    if (particles[i].min_coord(0) <= -w.half_side()) left[c] = 1;
    if (particles[i].max_coord(0) >= w.half_side()) right[c] = 1;
    if (left[c] && right[c]) return true;
  }
  return false;
}

std::vector<CrossingRow> estimate_lambda_c(const ModelSpec& family, std::span<const double> windows,
                                           std::span<const double> lambdas, std::uint64_t replicates,
                                           const RngStream& rng, int threads) {
  if (replicates == 0) throw std::invalid_argument("estimate_lambda_c: replicates must be positive");
  if (lambdas.empty() || windows.empty()) return {};
  const double lambda_max = *std::max_element(lambdas.begin(), lambdas.end());
  std::vector<CrossingRow> rows;
  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    const Window w(family.dim, windows[wi]);
    // hits[r * L + l]: replicate r crosses at lambdas[l].
    std::vector<char> hits(replicates * lambdas.size(), 0);
    parallel_for(replicates, threads, [&](std::size_t r) {
      RngStream stream = rng.split(stream_id(wi, r, 0));
      std::vector<Particle> base;
      std::vector<double> marks;
      if (lambda_max > 0.0) {
        ModelSpec top = family;
        top.lambda = lambda_max;
        const Configuration poisson = sample_poisson(top, w, stream.split(0));
        RngStream mark_stream = stream.split(1);
        for (const auto& p : poisson) {
          base.push_back(p);
          marks.push_back(mark_stream.uniform());
        }
      }
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        const double keep = lambda_max > 0.0 ? lambdas[l] / lambda_max : 0.0;
        std::vector<Particle> thinned;
        for (std::size_t i = 0; i < base.size(); ++i) {
          if (marks[i] < keep) thinned.push_back(base[i]);
        }
        hits[r * lambdas.size() + l] = crosses(Configuration(std::move(thinned)), w) ? 1 : 0;
      }
    });
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
      CrossingRow row;
      row.lambda = lambdas[l];
      row.n = windows[wi];
      for (std::uint64_t r = 0; r < replicates; ++r) row.successes += hits[r * lambdas.size() + l];
      row.replicates = replicates;
      row.estimate = static_cast<double>(row.successes) / static_cast<double>(replicates);
      std::tie(row.ci_lo, row.ci_hi) = stats::wilson_interval(row.successes, replicates);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace gibbsperc

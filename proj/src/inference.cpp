#include "gibbsperc/inference.hpp"

#include "gibbsperc/parallel.hpp"
#include "gibbsperc/spatial_grid.hpp"
#include "gibbsperc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gibbsperc {
namespace {

constexpr std::uint64_t kMassStream = 0x6d617373;  // fixed so that all models share it

// Largest margin m such that p lies in the window eroded by m.
double inner_margin(const Window& w, const Point& p) {
  double m = kInfinity;
  for (int a = 0; a < w.dim(); ++a) m = std::min(m, w.half_side() - std::abs(p[a]));
  return m;
}

double eroded_volume(const Window& w, double margin) {
  const double side = w.side() - 2.0 * margin;
  return side > 0.0 ? std::pow(side, w.dim()) : 0.0;
}

struct Terms {
  double value = 0.0;
  double scale = 0.0;
};

Terms difference_terms(const Functional& psi, std::span<const Particle> ls, const Configuration& xi) {
  if (ls.empty()) {
    const double v = psi(Configuration{});
    return {v, std::abs(v)};
  }
  if (ls.size() > 24) throw std::invalid_argument("difference_operator: l too large");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    for (std::size_t j = i + 1; j < ls.size(); ++j) {
      if (ls[i] == ls[j]) throw std::invalid_argument("difference_operator: particles must be distinct");
    }
  }
  const Particle& lowest = *std::min_element(ls.begin(), ls.end(), ParticleLess{});
  const Configuration base = xi.below(lowest);
  const std::size_t l = ls.size();
  Terms out;
  for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
    Configuration c = base;
    int members = 0;
    for (std::size_t j = 0; j < l; ++j) {
      if (mask & (1u << j)) {
        c.insert(ls[j]);
        ++members;
      }
    }
    const double v = psi(c);
    out.value += ((l - members) % 2 == 0) ? v : -v;
    out.scale = std::max(out.scale, std::abs(v));
  }
  return out;
}

double central_moment4(std::span<const double> xs, double m) {
  double s = 0.0;
  for (double x : xs) s += std::pow(x - m, 4);
  return s / static_cast<double>(xs.size());
}

double relative_change(double prev, double last) {
  if (prev == 0.0) return last == 0.0 ? 0.0 : kInfinity;
  return std::abs(last - prev) / std::abs(prev);
}

}  // namespace

Configuration observe_gibbs(const ModelSpec& model, const Window& w, const RngStream& rng, const ExperimentOptions& options) {
  if (options.padding <= 0.0) return sample_gibbs(model, w, {}, rng, options.sampler);
  const Window grown = Window::from_side(w.dim(), w.side() + 2.0 * options.padding);
  return restrict(sample_gibbs(model, grown, {}, rng, options.sampler), w);
}

CorrelationEstimate estimate_rho(const ModelSpec& model, const Window& w, std::uint64_t replicates, const RngStream& rng,
                                 const RhoOptions& options) {
  const auto& edges = options.bin_edges;
  if (edges.size() < 2) throw std::invalid_argument("estimate_rho: need at least one bin");
  if (edges.front() < 0.0) throw std::invalid_argument("estimate_rho: bin edges must be non-negative");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw std::invalid_argument("estimate_rho: bin edges must increase");
  }
  if (replicates < 2) throw std::invalid_argument("estimate_rho: need at least two replicates");

  const std::size_t bins = edges.size() - 1;
  const double range = model.interaction_range();
  const double reach = edges.back();
  std::vector<double> margin(bins), volume(bins);
  CorrelationEstimate out;
  out.replicates = replicates;
  for (std::size_t b = 0; b < bins; ++b) {
    margin[b] = std::max(range, edges[b + 1]);
    volume[b] = eroded_volume(w, margin[b]);
    out.bin_lo.push_back(edges[b]);
    out.bin_hi.push_back(edges[b + 1]);
    out.present.push_back(volume[b] > 0.0);
  }
  const double min_margin = *std::min_element(margin.begin(), margin.end());
  const double volume1 = eroded_volume(w, range);

  // Per replicate: anchors in each eroded window, ordered pairs per bin, and
  // the count used for rho_1.
  std::vector<double> anchors(replicates * bins, 0.0), pairs(replicates * bins, 0.0), counts(replicates, 0.0);
  parallel_for(replicates, options.experiment.threads, [&](std::size_t r) {
    const Configuration xi = observe_gibbs(model, w, rng.split(r), options.experiment);
    const auto particles = xi.particles();
    if (particles.empty()) return;
    const CenterGrid grid(particles, reach);
    double* a = &anchors[r * bins];
    double* p = &pairs[r * bins];
    for (std::size_t i = 0; i < particles.size(); ++i) {
      const double inner = inner_margin(w, particles[i].center());
      if (inner >= range) counts[r] += 1.0;
      if (inner < min_margin) continue;
      for (std::size_t b = 0; b < bins; ++b) {
        if (inner >= margin[b]) a[b] += 1.0;
      }
      grid.for_each_near(particles[i].center(), reach, [&](std::size_t j) {
        if (j == i) return;
        const double dh = hausdorff_distance(particles[i], particles[j]);
        const auto it = std::upper_bound(edges.begin(), edges.end(), dh);
        if (it == edges.begin() || it == edges.end()) return;
        const auto b = static_cast<std::size_t>(it - edges.begin()) - 1;
        if (inner >= margin[b]) p[b] += 1.0;
      });
    }
  });

  // mu^2 mass of each bin: E_Q over K_0 at the origin of the Lebesgue-Q mass
  // of partners L with d_H(K_0, L) in the bin.
  std::vector<double> hits(bins, 0.0);
  RngStream mass_rng = rng.split(kMassStream);
  const double box = std::pow(2.0 * reach, w.dim());
  for (std::uint64_t s = 0; s < options.mass_samples; ++s) {
    const Particle k0 = model.draw_particle(Point::Zero(), mass_rng);
    Point c = Point::Zero();
    for (int a = 0; a < w.dim(); ++a) c[a] = mass_rng.uniform(-reach, reach);
    const Particle l = model.draw_particle(c, mass_rng);
    const double dh = hausdorff_distance(k0, l);
    const auto it = std::upper_bound(edges.begin(), edges.end(), dh);
    if (it == edges.begin() || it == edges.end()) continue;
    hits[static_cast<std::size_t>(it - edges.begin()) - 1] += 1.0;
  }

  const double nrep = static_cast<double>(replicates);
  if (volume1 > 0.0) {
    out.rho1 = stats::mean(counts) / volume1;
    out.rho1_sigma = std::sqrt(stats::variance(counts) / nrep) / volume1;
  }
  std::vector<double> a_col(replicates), p_col(replicates);
  for (std::size_t b = 0; b < bins; ++b) {
    const double f = hits[b] / static_cast<double>(options.mass_samples);
    const double mass = box * f;
    const double mass_sigma = box * std::sqrt(f * (1.0 - f) / static_cast<double>(options.mass_samples));
    out.pair_mass.push_back(mass);
    out.pair_mass_sigma.push_back(mass_sigma);
    for (std::size_t r = 0; r < replicates; ++r) {
      a_col[r] = anchors[r * bins + b];
      p_col[r] = pairs[r * bins + b];
    }
    const double pbar = stats::mean(p_col);
    out.mean_pairs.push_back(pbar);
    if (!out.present[b] || mass <= 0.0) {
      out.present[b] = false;
      out.rho2.push_back(0.0);
      out.rho2_sigma.push_back(0.0);
      out.diff.push_back(0.0);
      out.diff_sigma.push_back(0.0);
      continue;
    }
    const double v = volume[b];
    const double abar = stats::mean(a_col);
    const double s_pp = stats::variance(p_col);
    const double s_aa = stats::variance(a_col);
    const double s_pa = stats::covariance(p_col, a_col);

    const double rho2 = pbar / (v * mass);
    const double rel2 = (pbar > 0.0 ? s_pp / (nrep * pbar * pbar) : 0.0) + std::pow(mass_sigma / mass, 2);
    out.rho2.push_back(rho2);
    out.rho2_sigma.push_back(rho2 * std::sqrt(rel2));

    // rho1^2 with the small-sample bias of abar^2 removed.
    const double rho1_sq = (abar * abar - s_aa / nrep) / (v * v);
    out.diff.push_back(rho2 - rho1_sq);
    const double g_p = 1.0 / (v * mass);
    const double g_a = -2.0 * abar / (v * v);
    const double g_m = -pbar / (v * mass * mass);
    const double var = (g_p * g_p * s_pp + 2.0 * g_p * g_a * s_pa + g_a * g_a * s_aa) / nrep + g_m * g_m * mass_sigma * mass_sigma;
    out.diff_sigma.push_back(std::sqrt(std::max(0.0, var)));
  }
  return out;
}

DecorrelationReport decorrelation_test(const ModelSpec& model, const Window& w, std::uint64_t replicates,
                                       const RngStream& rng, const RhoOptions& options) {
  DecorrelationReport out;
  out.rho = estimate_rho(model, w, replicates, rng, options);
  const auto& rho = out.rho;
  auto& series = out.series;
  std::vector<double> fit_s, fit_p, fit_sigma;
  for (std::size_t b = 0; b < rho.rho2.size(); ++b) {
    const double s = 0.5 * (rho.bin_lo[b] + rho.bin_hi[b]);
    const double d = std::abs(rho.diff[b]);
    const double sigma = rho.diff_sigma[b];
    series.distances.push_back(s);
    series.estimates.push_back(d);
    series.sigma.push_back(sigma);
    series.ci_lo.push_back(std::max(0.0, d - 1.96 * sigma));
    series.ci_hi.push_back(d + 1.96 * sigma);
    series.replicates.push_back(replicates);
    series.present.push_back(rho.present[b]);
    if (!rho.present[b]) continue;
    const double z = sigma > 0.0 ? d / sigma : (d > 0.0 ? kInfinity : 0.0);
    out.max_z = std::max(out.max_z, z);
    if (z > 2.0) {
      fit_s.push_back(s);
      fit_p.push_back(d);
      fit_sigma.push_back(sigma);
    }
  }
  series.fit = fit_exponential(fit_s, fit_p, fit_sigma);
  return out;
}

MonteCarloValue gnz_weighted_moment(const ModelSpec& model, const UStatSpec& spec, const Particle& k,
                                    const std::optional<Particle>& l, const Window& w, std::uint64_t replicates,
                                    const RngStream& rng, const ExperimentOptions& options) {
  if (replicates == 0) throw std::invalid_argument("gnz_weighted_moment: replicates must be positive");
  const double margin = std::max(model.interaction_range(), spec.radius);
  const Window inner = w.eroded(margin);
  if (!inner.contains(k.center()) || (l && !inner.contains(l->center()))) {
    throw GeometryError("gnz_weighted_moment: particles must lie in the window eroded by max(R_phi, r)");
  }
  if (l && *l == k) throw GeometryError("gnz_weighted_moment: K and L must differ");

  std::vector<double> values(replicates, 0.0);
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    const Configuration xi = observe_gibbs(model, w, rng.split(r), options);
    if (!l) {
      const double kappa = papangelou(model, k, xi);
      values[r] = kappa > 0.0 ? model.lambda * kappa * score(spec, k, xi) : 0.0;
      return;
    }
    const Particle pair[2] = {k, *l};
    const double kappa2 = papangelou_p(model, pair, xi);
    if (kappa2 <= 0.0) return;
    const Configuration with_l = xi.plus(*l);
    const Configuration with_k = xi.plus(k);
    values[r] = model.lambda * model.lambda * kappa2 * score(spec, k, with_l) * score(spec, *l, with_k);
  });
  return {stats::mean(values), std::sqrt(stats::variance(values) / static_cast<double>(replicates)), replicates};
}

double CenterBox::volume(int dim) const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= std::max(0.0, hi[a] - lo[a]);
  return v;
}

bool CenterBox::contains(const Point& p, int dim) const {
  for (int a = 0; a < dim; ++a) {
    if (p[a] < lo[a] || p[a] > hi[a]) return false;
  }
  return true;
}

MomentBoundReport moment_bound_check(const ModelSpec& model, const Window& w, std::span<const CenterBox> regions,
                                     std::uint64_t replicates, const RngStream& rng, const ExperimentOptions& options) {
  if (replicates < 2) throw std::invalid_argument("moment_bound_check: need at least two replicates");
  const int dim = w.dim();
  for (std::size_t i = 0; i < regions.size(); ++i) {
    for (int a = 0; a < dim; ++a) {
      if (regions[i].lo[a] > regions[i].hi[a]) throw std::invalid_argument("moment_bound_check: region with lo > hi");
      if (regions[i].lo[a] < -w.half_side() || regions[i].hi[a] > w.half_side()) {
        throw std::invalid_argument("moment_bound_check: region outside the window");
      }
    }
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      bool overlap = true;
      for (int a = 0; a < dim; ++a) {
        overlap = overlap && std::min(regions[i].hi[a], regions[j].hi[a]) > std::max(regions[i].lo[a], regions[j].lo[a]);
      }
      if (overlap) throw std::invalid_argument("moment_bound_check: regions overlap");
    }
  }

  MomentBoundReport out;
  out.replicates = replicates;
  out.bound = std::pow(model.lambda, static_cast<double>(regions.size()));
  for (const auto& box : regions) out.bound *= box.volume(dim);

  std::vector<double> products(replicates, 0.0);
  parallel_for(replicates, options.threads, [&](std::size_t r) {
    const Configuration xi = observe_gibbs(model, w, rng.split(r), options);
    double prod = 1.0;
    for (const auto& box : regions) {
      double n = 0.0;
      if (box.volume(dim) > 0.0) {
        for (const auto& p : xi) n += box.contains(p.center(), dim) ? 1.0 : 0.0;
      }
      prod *= n;
    }
    products[r] = prod;
  });
  out.moment = stats::mean(products);
  out.sigma = std::sqrt(stats::variance(products) / static_cast<double>(replicates));
  out.holds = out.moment <= out.bound + 3.0 * out.sigma;
  out.strict = out.moment < out.bound - 3.0 * out.sigma;
  return out;
}

double difference_operator(const Functional& psi, std::span<const Particle> ls, const Configuration& xi) {
  return difference_terms(psi, ls, xi).value;
}

double difference_operator(const UStatSpec& spec, std::span<const Particle> ls, const Configuration& xi) {
  return difference_operator([&](const Configuration& c) { return u_statistic(spec, c); }, ls, xi);
}

int MixedProduct::total_power() const {
  int t = 0;
  for (int k : powers) t += k;
  return t;
}

double MixedProduct::operator()(const Configuration& xi) const {
  if (ks.size() != powers.size()) throw std::invalid_argument("MixedProduct: one power per particle");
  Configuration full = xi;
  for (const auto& k : ks) {
    if (!full.insert(k)) throw GeometryError("MixedProduct: K_i must not belong to xi");
  }
  double value = 1.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double t = score(spec, ks[i], full);
    if (t == 0.0) return 0.0;
    value *= std::pow(t, powers[i]);
  }
  return value;
}

FmeReport fme_truncation_check(const UStatSpec& spec, const ModelSpec& model, std::uint64_t trials, const RngStream& rng) {
  FmeReport out;
  const double half = 0.5 * spec.radius;
  const int dim = model.dim;
  auto near_particle = [&](RngStream& s) {
    Point c = Point::Zero();
    for (int a = 0; a < dim; ++a) c[a] = s.uniform(-half, half);
    return model.draw_particle(c, s);
  };

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    RngStream s = rng.split(trial);
    MixedProduct psi{spec, {}, {}};
    const int p = 1 + static_cast<int>(s.below(2));
    for (int i = 0; i < p; ++i) {
      psi.ks.push_back(near_particle(s));
      psi.powers.push_back(1 + static_cast<int>(s.below(2)));
    }
    std::vector<Particle> xi_particles;
    const auto xi_size = s.below(5);
    for (std::uint64_t i = 0; i < xi_size; ++i) xi_particles.push_back(near_particle(s));
    const Configuration xi(std::move(xi_particles));
    const int degree = psi.total_power() * (spec.order - 1);
    const Functional f = [&](const Configuration& c) { return psi(c); };

    // l = t (k - 1) + 1 must vanish.
    std::vector<Particle> ls;
    for (int i = 0; i <= degree; ++i) ls.push_back(near_particle(s));
    ++out.trials;
    const Terms high = difference_terms(f, ls, xi);
    out.max_abs_high_order = std::max(out.max_abs_high_order, std::abs(high.value));
    if (std::abs(high.value) > 1e-9 * std::max(1.0, high.scale)) ++out.vanishing_failures;

    // Some l in [1, t (k - 1)] is generically non-zero.
    if (degree >= 1) {
      ++out.low_order_trials;
      const auto l = 1 + s.below(static_cast<std::uint64_t>(degree));
      const std::span<const Particle> low(ls.data(), l);
      if (difference_operator(f, low, xi) != 0.0) ++out.low_order_nonzero;
    }

    // Locality: one L beyond 2r (in centre distance, hence in d_H) from every K_i.
    const auto l = 1 + s.below(static_cast<std::uint64_t>(std::max(1, degree)));
    std::vector<Particle> local(ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(l));
    Point far = Point::Zero();
    far[0] = 3.0 * spec.radius + 2.0 * half + s.uniform(0.0, spec.radius);
    for (int a = 1; a < dim; ++a) far[a] = s.uniform(-half, half);
    local[s.below(l)] = model.draw_particle(far, s);
    ++out.locality_trials;
    if (difference_operator(f, local, xi) != 0.0) ++out.locality_failures;
  }
  return out;
}

CltReport clt_experiment(const ModelSpec& model, const UStatSpec& spec, std::span<const double> windows,
                         std::span<const std::uint64_t> replicates, const RngStream& rng, const ExperimentOptions& options) {
  if (windows.empty()) throw std::invalid_argument("clt_experiment: no windows");
  if (replicates.size() != 1 && replicates.size() != windows.size()) {
    throw std::invalid_argument("clt_experiment: give one replicate count or one per window");
  }
  CltReport out;
  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    const std::uint64_t reps = replicates.size() == 1 ? replicates[0] : replicates[wi];
    if (reps < 2) throw std::invalid_argument("clt_experiment: need at least two replicates per window");
    const double n = windows[wi];
    const Window w(model.dim, n);
    std::vector<double> f(reps, 0.0);
    parallel_for(reps, options.threads, [&](std::size_t r) {
      f[r] = u_statistic(spec, observe_gibbs(model, w, rng.split(stream_id(wi, r, 0)), options));
    });
    CltRow row;
    row.n = n;
    row.replicates = reps;
    const double m = stats::mean(f);
    const double v = stats::variance(f);
    const double nr = static_cast<double>(reps);
    row.mean_over_n = m / n;
    row.mean_sigma = std::sqrt(v / nr) / n;
    row.var_over_n = v / n;
    const double m4 = central_moment4(f, m);
    row.var_sigma = std::sqrt(std::max(0.0, (m4 - v * v * (nr - 3.0) / (nr - 1.0)) / nr)) / n;
    out.rows.push_back(row);
    if (wi + 1 == windows.size()) {
      out.largest_sample = f;
      if (reps < 100) out.warnings.push_back("fewer than 100 replicates at the largest window");
      if (v == 0.0) {
        out.degenerate = true;
        out.warnings.push_back("degenerate variance: F_n is constant over replicates");
      } else {
        out.ks = stats::ks_distance_to_normal(f);
        out.skewness = stats::skewness(f);
        out.excess_kurtosis = stats::excess_kurtosis(f);
      }
    }
  }
  if (out.rows.size() >= 2) {
    const auto& prev = out.rows[out.rows.size() - 2];
    const auto& last = out.rows.back();
    out.mean_change = relative_change(prev.mean_over_n, last.mean_over_n);
    out.var_change = relative_change(prev.var_over_n, last.var_over_n);
  }
  return out;
}

DominationReport domination_check(const ModelSpec& model, const Window& w, std::uint64_t replicates,
                                  const RngStream& rng, double alpha, const ExperimentOptions& options) {
  if (replicates < 2) throw std::invalid_argument("domination_check: need at least two replicates");
  std::vector<std::uint64_t> counts(replicates, 0);
  parallel_for(replicates, options.threads, [&](std::size_t r) { counts[r] = observe_gibbs(model, w, rng.split(r), options).size(); });

  DominationReport out;
  out.replicates = replicates;
  out.poisson_mean = model.lambda * w.volume();
  out.dkw_epsilon = stats::dkw_epsilon(replicates, alpha);
  const std::uint64_t top = *std::max_element(counts.begin(), counts.end());
  std::vector<std::uint64_t> histogram(top + 1, 0);
  double sum = 0.0;
  for (auto c : counts) {
    ++histogram[c];
    sum += static_cast<double>(c);
  }
  out.gibbs_mean = sum / static_cast<double>(replicates);
  out.max_violation = -kInfinity;
  std::uint64_t cumulative = 0;
  for (std::uint64_t k = 0; k <= top; ++k) {
    cumulative += histogram[k];
    const double g = static_cast<double>(cumulative) / static_cast<double>(replicates);
    const double p = stats::poisson_cdf(k, out.poisson_mean);
    out.counts.push_back(k);
    out.gibbs_cdf.push_back(g);
    out.poisson_cdf.push_back(p);
    out.max_violation = std::max(out.max_violation, p - g);
  }
  out.holds = out.max_violation <= out.dkw_epsilon;
  return out;
}

}  // namespace gibbsperc

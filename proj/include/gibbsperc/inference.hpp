#pragma once

#include "gibbsperc/model.hpp"
#include "gibbsperc/particles.hpp"
#include "gibbsperc/percolation.hpp"
#include "gibbsperc/rng.hpp"
#include "gibbsperc/sampler.hpp"
#include "gibbsperc/ustat.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gibbsperc {

/// Shared Monte-Carlo settings for the experiments. Samples are drawn on the
/// window grown by `padding` on each side (empty boundary) and observed on
/// the window itself.
struct ExperimentOptions {
  double padding = 0.0;
  int threads = 1;
  SamplerOptions sampler;
};

/// Gibbs sample on w grown by options.padding, restricted to w.
Configuration observe_gibbs(const ModelSpec& model, const Window& w, const RngStream& rng, const ExperimentOptions& options);

// ---------------------------------------------------------------------------
// Correlation functions

struct CorrelationEstimate {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  double rho1 = 0.0;
  double rho1_sigma = 0.0;
  std::vector<double> rho2;
  std::vector<double> rho2_sigma;
  /// rho2 - rho1^2 with rho1 measured on the same eroded window as the bin.
  std::vector<double> diff;
  std::vector<double> diff_sigma;
  /// False for bins whose eroded window is empty.
  std::vector<bool> present;
  /// mu^2 mass of the bin per unit centre volume, by Monte-Carlo integration.
  std::vector<double> pair_mass;
  std::vector<double> pair_mass_sigma;
  /// Mean number of ordered pairs per replicate.
  std::vector<double> mean_pairs;
  std::uint64_t replicates = 0;
};

struct RhoOptions {
  /// Bins are [edges[i], edges[i+1]) in Hausdorff distance.
  std::vector<double> bin_edges;
  std::uint64_t mass_samples = 2'000'000;
  ExperimentOptions experiment;
};

/// Binned estimates of rho_1 and of the orientation-pooled rho_2 as a
/// function of the Hausdorff distance, with minus-sampling: for a bin with
/// upper edge b the anchor particle is taken in the window eroded by
/// max(R_phi, b).
CorrelationEstimate estimate_rho(const ModelSpec& model, const Window& w, std::uint64_t replicates, const RngStream& rng,
                                 const RhoOptions& options);

struct DecorrelationReport {
  CorrelationEstimate rho;
  /// |rho2(s) - rho1^2| at bin midpoints; the fit uses bins where the
  /// difference exceeds two standard errors.
  DecaySeries series;
  /// Largest |diff| / sigma over present bins.
  double max_z = 0.0;
};

DecorrelationReport decorrelation_test(const ModelSpec& model, const Window& w, std::uint64_t replicates,
                                       const RngStream& rng, const RhoOptions& options);

// ---------------------------------------------------------------------------
// GNZ plug-in estimators

struct MonteCarloValue {
  double value = 0.0;
  double sigma = 0.0;
  std::uint64_t replicates = 0;
};

/// m_(1)(K) = lambda E[kappa(K, Xi) T(K, Xi + K)], or with L given
/// m_(2)(K, L) = lambda^2 E[kappa_2(K, L, Xi) T(K, Xi + K + L) T(L, Xi + K + L)].
/// Throws GeometryError if K or L is not inside w eroded by max(R_phi, r).
MonteCarloValue gnz_weighted_moment(const ModelSpec& model, const UStatSpec& spec, const Particle& k,
                                    const std::optional<Particle>& l, const Window& w, std::uint64_t replicates,
                                    const RngStream& rng, const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// Moment bound

/// Region of particles whose centres lie in the box [lo, hi].
struct CenterBox {
  Point lo = Point::Zero();
  Point hi = Point::Zero();

  double volume(int dim) const;
  bool contains(const Point& p, int dim) const;
  friend bool operator==(const CenterBox&, const CenterBox&) = default;
};

struct MomentBoundReport {
  double moment = 0.0;
  double sigma = 0.0;
  /// lambda^p prod mu(Psi_i).
  double bound = 0.0;
  /// moment <= bound + 3 sigma.
  bool holds = false;
  /// moment < bound - 3 sigma.
  bool strict = false;
  std::uint64_t replicates = 0;
};

/// E[prod Xi(Psi_i)] against lambda^p prod mu(Psi_i). Regions must be
/// disjoint and inside w.
MomentBoundReport moment_bound_check(const ModelSpec& model, const Window& w, std::span<const CenterBox> regions,
                                     std::uint64_t replicates, const RngStream& rng,
                                     const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// Difference operators

using Functional = std::function<double(const Configuration&)>;

/// D^l_{L_1..L_l} psi(xi); psi(o) for l = 0. Throws on repeated particles.
double difference_operator(const Functional& psi, std::span<const Particle> ls, const Configuration& xi);
double difference_operator(const UStatSpec& spec, std::span<const Particle> ls, const Configuration& xi);

/// psi^!_{k_1..k_p}(K_1..K_p; xi) = prod_i T(K_i, xi + sum_j K_j)^{k_i}.
struct MixedProduct {
  UStatSpec spec;
  std::vector<Particle> ks;
  std::vector<int> powers;

  /// t = sum of the powers.
  int total_power() const;
  double operator()(const Configuration& xi) const;
};

struct FmeReport {
  std::uint64_t trials = 0;
  /// Trials with l = t(k - 1) + 1 whose value was not zero.
  std::uint64_t vanishing_failures = 0;
  double max_abs_high_order = 0.0;
  std::uint64_t locality_trials = 0;
  std::uint64_t locality_failures = 0;
  /// Trials with 1 <= l <= t(k - 1), and how many gave a non-zero value.
  std::uint64_t low_order_trials = 0;
  std::uint64_t low_order_nonzero = 0;
  bool pass() const {
    return vanishing_failures == 0 && locality_failures == 0 && (low_order_trials == 0 || low_order_nonzero > 0);
  }
};

/// Random checks of D^l psi^! = 0 for l > t(k - 1) and of the locality
/// vanishing when some L is farther than 2r from every K_i. Mixed products use
/// p in {1, 2} and k_i in {1, 2}.
FmeReport fme_truncation_check(const UStatSpec& spec, const ModelSpec& model, std::uint64_t trials, const RngStream& rng);

// ---------------------------------------------------------------------------
// CLT

struct CltRow {
  double n = 0.0;
  std::uint64_t replicates = 0;
  double mean_over_n = 0.0;
  double mean_sigma = 0.0;
  double var_over_n = 0.0;
  double var_sigma = 0.0;
};

struct CltReport {
  std::vector<CltRow> rows;
  /// Relative change of mean/n and var/n between the last two windows.
  double mean_change = 0.0;
  double var_change = 0.0;
  /// Normality of the standardised sample at the largest window.
  double ks = 1.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  bool degenerate = false;
  std::vector<std::string> warnings;
  /// F_n values at the largest window.
  std::vector<double> largest_sample;
};

CltReport clt_experiment(const ModelSpec& model, const UStatSpec& spec, std::span<const double> windows,
                         std::span<const std::uint64_t> replicates, const RngStream& rng,
                         const ExperimentOptions& options = {});

// ---------------------------------------------------------------------------
// Stochastic domination

struct DominationReport {
  std::vector<std::uint64_t> counts;
  std::vector<double> gibbs_cdf;
  std::vector<double> poisson_cdf;
  double dkw_epsilon = 0.0;
  /// max_k (poisson_cdf - gibbs_cdf); negative when Gibbs dominates everywhere.
  double max_violation = 0.0;
  double gibbs_mean = 0.0;
  double poisson_mean = 0.0;
  /// gibbs_cdf >= poisson_cdf - dkw_epsilon at every count.
  bool holds = false;
  std::uint64_t replicates = 0;
};

/// Compares the Gibbs particle-count CDF on w with the Poisson(lambda |w|) CDF
/// using a one-sided DKW band at level 1 - alpha.
DominationReport domination_check(const ModelSpec& model, const Window& w, std::uint64_t replicates,
                                  const RngStream& rng, double alpha = 0.001, const ExperimentOptions& options = {});

}  // namespace gibbsperc

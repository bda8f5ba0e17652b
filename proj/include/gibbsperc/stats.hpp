#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gibbsperc::stats {

/// Welford accumulator.
class Running {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  /// Standard error of the mean.
  double sem() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double mean(std::span<const double> xs);
double variance(std::span<const double> xs);
double covariance(std::span<const double> xs, std::span<const double> ys);
double skewness(std::span<const double> xs);
double excess_kurtosis(std::span<const double> xs);

double normal_cdf(double x);
/// Kolmogorov-Smirnov distance of the standardised sample to N(0, 1).
double ks_distance_to_normal(std::span<const double> xs);

/// Wilson score interval for k successes out of n at z standard deviations.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.96);

/// One-sided Dvoretzky-Kiefer-Wolfowitz band half-width at confidence 1 - alpha.
double dkw_epsilon(std::size_t n, double alpha);

double poisson_cdf(std::uint64_t k, double mean);

/// Total variation distance between two empirical count distributions.
double tv_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Weighted least squares fit y = intercept + slope * x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  /// Weighted coefficient of determination.
  double r2 = 0.0;
  std::size_t points = 0;
};
LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w);

}  // namespace gibbsperc::stats

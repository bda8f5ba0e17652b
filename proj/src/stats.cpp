#include "gibbsperc/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace gibbsperc::stats {

double Running::sem() const { return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0; }

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

double covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("covariance: length mismatch");
  if (xs.size() < 2) return 0.0;
  const double mx = mean(xs), my = mean(ys);
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (xs[i] - mx) * (ys[i] - my);
  return s / static_cast<double>(xs.size() - 1);
}

namespace {

double central_moment(std::span<const double> xs, int order) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += std::pow(x - m, order);
  return s / static_cast<double>(xs.size());
}

}  // namespace

double skewness(std::span<const double> xs) {
  const double m2 = central_moment(xs, 2);
  return m2 > 0.0 ? central_moment(xs, 3) / std::pow(m2, 1.5) : 0.0;
}

double excess_kurtosis(std::span<const double> xs) {
  const double m2 = central_moment(xs, 2);
  return m2 > 0.0 ? central_moment(xs, 4) / (m2 * m2) - 3.0 : 0.0;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance_to_normal(std::span<const double> xs) {
  if (xs.size() < 2) return 1.0;
  const double m = mean(xs);
  const double sd = std::sqrt(variance(xs));
  if (!(sd > 0.0)) return 1.0;
  std::vector<double> z(xs.begin(), xs.end());
  for (double& v : z) v = (v - m) / sd;
  std::sort(z.begin(), z.end());
  const double n = static_cast<double>(z.size());
  double d = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double f = normal_cdf(z[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double dkw_epsilon(std::size_t n, double alpha) { return std::sqrt(std::log(1.0 / alpha) / (2.0 * static_cast<double>(n))); }

double poisson_cdf(std::uint64_t k, double mean) {
  if (mean == 0.0) return 1.0;
  double log_term = -mean;
  double sum = std::exp(log_term);
  for (std::uint64_t i = 1; i <= k; ++i) {
    log_term += std::log(mean) - std::log(static_cast<double>(i));
    sum += std::exp(log_term);
  }
  return std::min(1.0, sum);
}

double tv_distance(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("tv_distance: empty sample");
  std::map<std::uint64_t, double> diff;
  for (auto x : a) diff[x] += 1.0 / static_cast<double>(a.size());
  for (auto x : b) diff[x] -= 1.0 / static_cast<double>(b.size());
  double s = 0.0;
  for (const auto& [k, v] : diff) s += std::abs(v);
  return 0.5 * s;
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
  if (x.size() != y.size() || x.size() != w.size()) throw std::invalid_argument("weighted_line_fit: length mismatch");
  LineFit fit;
  fit.points = x.size();
  if (x.size() < 2) return fit;
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sw = std::sqrt(w[i]);
    design(i, 0) = sw;
    design(i, 1) = sw * x[i];
    rhs(i) = sw * y[i];
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(rhs);
  fit.intercept = beta(0);
  fit.slope = beta(1);

  double wsum = 0.0, ybar = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    wsum += w[i];
    ybar += w[i] * y[i];
  }
  ybar /= wsum;
  double ss_res = 0.0, ss_tot = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += w[i] * r * r;
    ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace gibbsperc::stats

#include "gibbsperc/inference.hpp"
#include "gibbsperc/stats.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gibbsperc;
using namespace gibbsperc::testing;

namespace {

const double kPi = std::numbers::pi;

CenterBox box(double x0, double y0, double x1, double y1) { return {Point(x0, y0, 0), Point(x1, y1, 0)}; }

/// Expected G_2 of Poisson facets with orientations {0, pi/2}, half length
/// 1/2, on the window of volume n: (lambda^2 / 4) g(s)^2 with
/// g(s) = s^2 - (s - 1/2)^2, integrated here by the midpoint rule.
double poisson_g2_mean(double lambda, double n) {
  const double s = std::sqrt(n);
  const int m = 4000;
  const double h = s / m;
  double g = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = (i + 0.5) * h;
    g += (std::min(s, u + 0.5) - std::max(0.0, u - 0.5)) * h;
  }
  return 0.25 * lambda * lambda * g * g;
}

}  // namespace

TEST_CASE("poisson correlation functions are powers of lambda") {
  const auto m = poisson_balls(0.3);
  RhoOptions o;
  o.bin_edges = {0.0, 0.5, 1.0, 1.5, 2.0};
  o.mass_samples = 200'000;
  const auto est = estimate_rho(m, Window(2, 25.0), 3000, RngStream(41, 0), o);
  CHECK(std::abs(est.rho1 - 0.3) < 3 * est.rho1_sigma);
  for (std::size_t b = 0; b < est.rho2.size(); ++b) {
    REQUIRE(est.present[b]);
    CHECK(std::abs(est.rho2[b] - 0.09) < 3 * std::hypot(est.rho2_sigma[b], 0.09 * est.pair_mass_sigma[b] / est.pair_mass[b]));
    CHECK(std::abs(est.diff[b]) < 3 * est.diff_sigma[b]);
  }
}

TEST_CASE("hard core correlations vanish below contact and obey the cap") {
  const auto m = hardcore_balls(0.25);
  RhoOptions o;
  o.bin_edges = {0.0, 0.9, 1.2, 1.6, 2.0};
  o.mass_samples = 200'000;
  o.experiment.padding = 1.0;
  const auto est = estimate_rho(m, Window(2, 25.0), 1500, RngStream(42, 0), o);
  CHECK(est.rho2[0] == 0.0);
  CHECK(est.mean_pairs[0] == 0.0);
  for (std::size_t b = 0; b < est.rho2.size(); ++b) CHECK(est.rho2[b] <= 0.0625 + 3 * est.rho2_sigma[b]);
}

TEST_CASE("bins beyond the window are reported missing") {
  RhoOptions o;
  o.bin_edges = {0.0, 1.0, 5.0, 6.0};
  o.mass_samples = 10'000;
  const auto report = decorrelation_test(poisson_balls(0.3), Window(2, 9.0), 50, RngStream(43, 0), o);
  CHECK(report.rho.present[0]);
  CHECK_FALSE(report.rho.present[2]);
  CHECK_FALSE(report.series.present[2]);
  CHECK_THROWS(estimate_rho(poisson_balls(0.3), Window(2, 9.0), 1, RngStream(43, 0), o));
}

TEST_CASE("poisson decorrelation differences are null") {
  RhoOptions o;
  o.bin_edges = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  o.mass_samples = 200'000;
  const auto report = decorrelation_test(poisson_balls(0.3), Window(2, 25.0), 2000, RngStream(44, 0), o);
  CHECK_FALSE(report.rho.present.back());
  for (std::size_t b = 0; b + 1 < report.rho.diff.size(); ++b) {
    REQUIRE(report.rho.present[b]);
    CHECK(std::abs(report.rho.diff[b]) < 3 * report.rho.diff_sigma[b]);
  }
}

TEST_CASE("estimators do not depend on the thread count") {
  RhoOptions o;
  o.bin_edges = {0.0, 1.0, 2.0};
  o.mass_samples = 20'000;
  const auto a = estimate_rho(hardcore_balls(0.2), Window(2, 16.0), 40, RngStream(45, 0), o);
  o.experiment.threads = 3;
  const auto b = estimate_rho(hardcore_balls(0.2), Window(2, 16.0), 40, RngStream(45, 0), o);
  CHECK(a.rho2 == b.rho2);
  CHECK(a.rho1 == b.rho1);
}

TEST_CASE("gnz weighted moments") {
  const Window w(2, 25.0);
  const auto k = Particle::segment(0, 0, 0, 0.5);
  auto poisson = facet_cross(0.15, 1.0);
  poisson.potential = NoInteraction{};

  const auto one = gnz_weighted_moment(poisson, UStatSpec::one(), k, std::nullopt, w, 100, RngStream(46, 0));
  CHECK(one.value == doctest::Approx(0.15).epsilon(1e-14));
  CHECK(one.sigma < 1e-15);

  // crossing partners of K: vertical segments with centres in a unit square
  const auto g2 = UStatSpec::facet_g(2, 0.5);
  const auto m1 = gnz_weighted_moment(poisson, g2, k, std::nullopt, w, 40'000, RngStream(47, 0));
  CHECK(std::abs(m1.value - 0.15 * 0.15 * 0.5 / 2) < 3 * m1.sigma);

  // the Palm process Poisson + K simulated directly, crossings counted by hand
  RngStream palm(48, 0);
  stats::Running direct;
  for (std::uint64_t r = 0; r < 40'000; ++r) {
    const auto xi = sample_poisson(poisson, w, palm.split(r));
    double crossings = 0.0;
    for (const auto& p : xi) {
      const Particle pair[] = {k, p};
      if (!(p == k)) crossings += q_measure(2, pair);
    }
    direct.add(0.15 * crossings / 2);
  }
  CHECK(std::abs(m1.value - direct.mean()) < 3 * std::hypot(m1.sigma, direct.sem()));

  const auto hc = hardcore_balls(0.2);
  const auto overlap = gnz_weighted_moment(hc, UStatSpec::close_pair(1.0), Particle::ball(0, 0, 0.5),
                                           Particle::ball(0.5, 0, 0.5), w, 50, RngStream(49, 0));
  CHECK(overlap.value == 0.0);

  CHECK_THROWS_AS(gnz_weighted_moment(hc, g2, Particle::ball(2.4, 0, 0.5), std::nullopt, w, 10, RngStream(50, 0)), GeometryError);
}

TEST_CASE("one point gnz identity matches rho1") {
  const auto hc = hardcore_balls(0.25);
  const Window w(2, 25.0);
  ExperimentOptions opt;
  opt.padding = 1.0;
  const auto gnz = gnz_weighted_moment(hc, UStatSpec::one(), Particle::ball(0, 0, 0.5), std::nullopt, w, 20'000,
                                       RngStream(51, 0), opt);
  RhoOptions o;
  o.bin_edges = {0.0, 1.0};
  o.mass_samples = 10'000;
  o.experiment = opt;
  const auto est = estimate_rho(hc, w, 5000, RngStream(52, 0), o);
  CHECK(std::abs(gnz.value - est.rho1) < 3 * std::hypot(gnz.sigma, est.rho1_sigma));
}

TEST_CASE("moment bound") {
  const Window w(2, 25.0);
  const CenterBox single[] = {box(-0.5, -0.5, 0.5, 0.5)};
  const auto p1 = moment_bound_check(poisson_balls(0.2), w, single, 20'000, RngStream(53, 0));
  CHECK(std::abs(p1.moment - p1.bound) < 3 * p1.sigma);
  CHECK(p1.bound == doctest::Approx(0.2));

  const CenterBox empty[] = {box(0, 0, 0, 1)};
  const auto p0 = moment_bound_check(hardcore_balls(0.2), w, empty, 100, RngStream(54, 0));
  CHECK(p0.moment == 0.0);
  CHECK(p0.bound == 0.0);

  const CenterBox pair[] = {box(-1.5, -0.5, -0.5, 0.5), box(0.5, -0.5, 1.5, 0.5)};
  const auto p2 = moment_bound_check(hardcore_balls(0.3), w, pair, 20'000, RngStream(55, 0));
  CHECK(p2.holds);
  CHECK(p2.strict);

  const CenterBox overlapping[] = {box(-1, -1, 0.5, 0.5), box(0, 0, 1, 1)};
  CHECK_THROWS(moment_bound_check(hardcore_balls(0.2), w, overlapping, 10, RngStream(56, 0)));
  const CenterBox outside[] = {box(2, 2, 3, 3)};
  CHECK_THROWS(moment_bound_check(hardcore_balls(0.2), w, outside, 10, RngStream(56, 0)));
}

TEST_CASE("difference operator") {
  const auto g2 = UStatSpec::facet_g(2, 0.5);
  const Functional psi = [&](const Configuration& xi) { return u_statistic(g2, xi) + 0.5; };
  RngStream rng(57, 0);
  CHECK(difference_operator(psi, {}, random_segments(rng, 5, 1.0)) == 0.5);

  for (int t = 0; t < 300; ++t) {
    const auto xi = random_segments(rng, rng.below(8), 1.0);
    const auto k = random_segment(rng, 1.0, 0.5);
    if (xi.contains(k)) continue;
    const Particle ls[] = {k};
    const auto below = xi.below(k);
    CHECK(difference_operator(psi, ls, xi) == psi(below.plus(k)) - psi(below));

    const Particle two[] = {random_segment(rng, 1.0, 0.5), random_segment(rng, 1.0, 0.5)};
    const MixedProduct single{g2, {k}, {1}};
    if (!xi.contains(two[0]) && !xi.contains(two[1]) && !(two[0] == k) && !(two[1] == k)) {
      CHECK(difference_operator(single, two, xi) == 0.0);
      const Particle pair[] = {two[0], two[1]};
      CHECK(difference_operator(g2, two, xi) == g2.evaluate(pair));
    }

    const auto cp = UStatSpec::close_pair(0.7);
    const Functional sum = [&](const Configuration& c) { return u_statistic(g2, c) + u_statistic(cp, c); };
    CHECK(difference_operator(sum, ls, xi) == difference_operator(g2, ls, xi) + difference_operator(cp, ls, xi));
  }
  const Particle dup[] = {Particle::segment(0, 0, 0, 0.5), Particle::segment(0, 0, 0, 0.5)};
  CHECK_THROWS(difference_operator(psi, dup, Configuration{}));
}

TEST_CASE("fme truncation check") {
  const auto report = fme_truncation_check(UStatSpec::facet_g(2, 0.5), facet_cross(0.15, 1.0), 1000, RngStream(58, 0));
  CHECK(report.trials == 1000);
  CHECK(report.vanishing_failures == 0);
  CHECK(report.locality_trials == 1000);
  CHECK(report.locality_failures == 0);
  CHECK(report.low_order_nonzero > 0);
  CHECK(report.pass());

  MixedProduct mp{UStatSpec::facet_g(2, 0.5), {Particle::segment(0, 0, 0, 0.5)}, {2}};
  CHECK(mp.total_power() == 2);
  CHECK(mp(Configuration({Particle::segment(0, 0.1, kPi / 2, 0.5)})) == 0.25);
  CHECK_THROWS(mp(Configuration({Particle::segment(0, 0, 0, 0.5)})));
}

TEST_CASE("clt with a zero kernel is degenerate") {
  const double windows[] = {9.0, 25.0};
  const std::uint64_t reps[] = {20};
  const auto report = clt_experiment(facet_cross(0.15, 1.0), UStatSpec::zero(2), windows, reps, RngStream(59, 0));
  CHECK(report.degenerate);
  for (const auto& row : report.rows) {
    CHECK(row.mean_over_n == 0.0);
    CHECK(row.var_over_n == 0.0);
  }
  CHECK(report.warnings.size() == 2);
}

TEST_CASE("poisson G2 mean matches the Mecke oracle") {
  auto m = facet_cross(0.15, 1.0);
  m.potential = NoInteraction{};
  const double windows[] = {25.0, 100.0};
  const std::uint64_t reps[] = {20'000};
  const auto report = clt_experiment(m, UStatSpec::facet_g(2, 0.5), windows, reps, RngStream(60, 0));
  for (const auto& row : report.rows) {
    const double oracle = poisson_g2_mean(0.15, row.n) / row.n;
    CHECK(std::abs(row.mean_over_n - oracle) < 3 * row.mean_sigma);
  }
}

TEST_CASE("clt pipeline reproduces normality on poisson input") {
  const double windows[] = {100.0, 400.0};
  const std::uint64_t reps[] = {1000};
  const auto report = clt_experiment(poisson_balls(1.0), UStatSpec::close_pair(1.0), windows, reps, RngStream(61, 0));
  CHECK_FALSE(report.degenerate);
  CHECK(report.ks < 0.05);
  CHECK(report.mean_change < 0.15);
  CHECK(report.var_change < 0.15);
  CHECK(report.largest_sample.size() == 1000);
}

TEST_CASE("domination") {
  const Window w(2, 9.0);
  const auto poisson = domination_check(poisson_balls(0.3), w, 20'000, RngStream(62, 0));
  CHECK(poisson.holds);
  for (std::size_t i = 0; i < poisson.counts.size(); ++i)
    CHECK(std::abs(poisson.gibbs_cdf[i] - poisson.poisson_cdf[i]) <= poisson.dkw_epsilon);

  const auto hc = domination_check(hardcore_balls(0.3), w, 20'000, RngStream(63, 0));
  CHECK(hc.holds);
  CHECK(hc.gibbs_mean < hc.poisson_mean);
  CHECK(hc.max_violation < -hc.dkw_epsilon);
  CHECK_THROWS(domination_check(hardcore_balls(0.3), w, 1, RngStream(63, 0)));
}

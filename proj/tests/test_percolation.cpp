#include "gibbsperc/percolation.hpp"
#include "gibbsperc/sampler.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace gibbsperc;
using namespace gibbsperc::testing;

namespace {

const double kPi = std::numbers::pi;

/// Connected components by depth-first search over all pairs.
std::vector<std::size_t> naive_labels(std::span<const Particle> ps) {
  std::vector<std::size_t> label(ps.size(), ps.size());
  std::size_t next = 0;
  for (std::size_t s = 0; s < ps.size(); ++s) {
    if (label[s] != ps.size()) continue;
    std::vector<std::size_t> stack = {s};
    label[s] = next;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < ps.size(); ++j) {
        if (label[j] == ps.size() && intersects(ps[i], ps[j])) {
          label[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

TEST_CASE("cluster examples") {
  const Configuration chain({Particle::ball(0, 0, 0.5), Particle::ball(0.9, 0, 0.5), Particle::ball(1.8, 0, 0.5)});
  auto c = clusters(chain);
  CHECK(c.count() == 1);
  CHECK(c.sizes[0] == 3);

  const Configuration apart({Particle::ball(0, 0, 0.5), Particle::ball(3, 0, 0.5), Particle::ball(6, 0, 0.5)});
  c = clusters(apart);
  CHECK(c.count() == 3);

  const Configuration pairs({Particle::ball(0, 0, 0.5), Particle::ball(0.5, 0, 0.5), Particle::ball(5, 0, 0.5),
                             Particle::ball(5.5, 0, 0.5)});
  c = clusters(pairs);
  CHECK(c.count() == 2);
  CHECK(c.sizes == std::vector<std::size_t>{2, 2});
}

TEST_CASE("clusters match naive search and ignore input order") {
  RngStream rng(31, 0);
  for (int t = 0; t < 300; ++t) {
    std::vector<Particle> ps;
    const auto n = rng.below(40);
    for (std::uint64_t i = 0; i < n; ++i) ps.push_back(t % 2 ? random_segment(rng, 3.0, 0.8) : random_ball(rng, 2, 3.0, 0.8));
    const auto part = clusters(std::span<const Particle>(ps));
    const auto label = naive_labels(ps);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = 0; j < ps.size(); ++j) CHECK(part.same(i, j) == (label[i] == label[j]));

    auto shuffled = ps;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    auto sizes_a = part.sizes;
    auto sizes_b = clusters(std::span<const Particle>(shuffled)).sizes;
    std::sort(sizes_a.begin(), sizes_a.end());
    std::sort(sizes_b.begin(), sizes_b.end());
    CHECK(sizes_a == sizes_b);
  }
}

TEST_CASE("connects examples") {
  const std::vector<Particle> chain = {Particle::ball(0, 0, 0.5), Particle::ball(0.9, 0, 0.5), Particle::ball(1.8, 0, 0.5)};
  const Configuration xi(chain);
  const Particle first[] = {chain.front()};
  const Particle last[] = {chain.back()};
  CHECK(connects(xi, first, last));

  const Particle a[] = {Particle::ball(0, 0, 0.5)};
  const Particle b[] = {Particle::ball(5, 0, 0.5)};
  const Particle touching[] = {Particle::ball(0.9, 0, 0.5)};
  CHECK_FALSE(connects(Configuration{}, a, b));
  CHECK(connects(Configuration{}, a, touching));
}

TEST_CASE("connects is symmetric and monotone") {
  RngStream rng(32, 0);
  for (int t = 0; t < 300; ++t) {
    const auto xi = random_balls(rng, rng.below(20), 3.0, 0.45);
    const Particle psi[] = {Particle::ball(-3.5, 0, 0.5)};
    const Particle gamma[] = {Particle::ball(3.5, 0, 0.5)};
    const bool before = connects(xi, psi, gamma);
    CHECK(before == connects(xi, gamma, psi));
    const auto extra = random_ball(rng, 2, 3.0, 0.6);
    if (!xi.contains(extra) && before) CHECK(connects(xi.plus(extra), psi, gamma));
  }
}

TEST_CASE("threshold bounds") {
  CHECK(std::abs(percolation_lower_bound(2, 0.5) - 1 / kPi) < 1e-12);
  CHECK(std::abs(percolation_lower_bound(1, 0.5) - 0.5) < 1e-12);
  CHECK(std::abs(percolation_lower_bound(3, 1.0) - 3 / (32 * kPi)) < 1e-12);
  CHECK(std::abs(sy13_bound(2, 0.5) - 1 / (4 * kPi)) < 1e-12);
  CHECK(std::abs(sy13_bound(1, 0.5) - 0.25) < 1e-12);
  CHECK(percolation_lower_bound(2, 0.5) > sy13_bound(2, 0.5));
  CHECK_THROWS(percolation_lower_bound(4, 0.5));
  CHECK_THROWS(sy13_bound(2, -1.0));
}

TEST_CASE("connection decay edge cases") {
  auto m = poisson_balls(0.0);
  auto s = estimate_connection_decay(m, default_probe(m, {2, 4, 6}), 200, RngStream(1, 0));
  for (double p : s.estimates) CHECK(p == 0.0);
  CHECK(s.fit.points == 0);

  m = poisson_balls(0.1);
  s = estimate_connection_decay(m, default_probe(m, {0.25, 0.4, 3.0}), 200, RngStream(2, 0));
  CHECK(s.estimates[0] == 1.0);
  CHECK(s.estimates[1] == 1.0);
  CHECK(s.estimates[2] < 1.0);
  CHECK_THROWS(estimate_connection_decay(m, default_probe(m, {3, 2}), 10, RngStream(2, 0)));
}

TEST_CASE("connection probabilities decrease with distance") {
  const auto m = poisson_balls(0.15);
  const auto s = estimate_connection_decay(m, default_probe(m, {1, 2, 3, 4, 5}), 20'000, RngStream(3, 0));
  for (std::size_t i = 1; i < s.estimates.size(); ++i) {
    CHECK(s.estimates[i] <= s.estimates[i - 1] + 2 * std::hypot(s.sigma[i], s.sigma[i - 1]));
    CHECK(s.ci_lo[i] <= s.estimates[i]);
    CHECK(s.estimates[i] <= s.ci_hi[i]);
  }
  CHECK(s.fit.c2 > 0.0);
}

TEST_CASE("exponential fit recovers an exact decay") {
  const std::vector<double> s = {1, 2, 3, 4};
  std::vector<double> p, sigma;
  for (double x : s) {
    p.push_back(0.7 * std::exp(-0.9 * x));
    sigma.push_back(0.01 * p.back());
  }
  const auto fit = fit_exponential(s, p, sigma);
  CHECK(fit.c1 == doctest::Approx(0.7));
  CHECK(fit.c2 == doctest::Approx(0.9));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("crossing sweep") {
  CHECK(crosses(Configuration({Particle::ball(-0.5, 0, 0.6), Particle::ball(0.5, 0, 0.6)}), Window(2, 4.0)));
  CHECK_FALSE(crosses(Configuration({Particle::ball(-0.5, 0, 0.4), Particle::ball(0.5, 0, 0.4)}), Window(2, 4.0)));

  const std::vector<double> windows = {16.0};
  const std::vector<double> lambdas = {0.0, 0.1, 0.3, 0.6, 1.2};
  const auto rows = estimate_lambda_c(poisson_balls(1.0), windows, lambdas, 2000, RngStream(4, 0));
  REQUIRE(rows.size() == lambdas.size());
  CHECK(rows.front().estimate == 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double sd = std::sqrt((rows[i].estimate * (1 - rows[i].estimate) + rows[i - 1].estimate * (1 - rows[i - 1].estimate)) / 2000);
    CHECK(rows[i].estimate >= rows[i - 1].estimate - 2 * sd);
  }

  const std::vector<double> dense = {5.0};
  const auto big = estimate_lambda_c(poisson_balls(1.0, 2.0), windows, dense, 200, RngStream(5, 0));
  CHECK(big.front().estimate > 0.99);
}

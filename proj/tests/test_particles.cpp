#include "gibbsperc/particles.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace gibbsperc;
using gibbsperc::testing::random_ball;
using gibbsperc::testing::random_segment;

namespace {

const double kPi = std::numbers::pi;

/// Discrete Hausdorff distance between m-point samples of two segments. The
/// nearest sample on a segment is found by projecting and rounding.
double sampled_hausdorff(const Particle& a, const Particle& b, int m) {
  auto sample = [m](const Particle& s, int i) {
    return Point(s.endpoint_a() + (s.endpoint_b() - s.endpoint_a()) * (static_cast<double>(i) / (m - 1)));
  };
  auto directed = [&](const Particle& from, const Particle& to) {
    const Point a0 = to.endpoint_a();
    const Point span = to.endpoint_b() - a0;
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      const Point p = sample(from, i);
      const double t = std::clamp((p - a0).dot(span) / span.squaredNorm(), 0.0, 1.0);
      const int j = static_cast<int>(std::lround(t * (m - 1)));
      double best = kInfinity;
      for (int k = std::max(0, j - 1); k <= std::min(m - 1, j + 1); ++k) best = std::min(best, (p - sample(to, k)).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace

TEST_CASE("hausdorff distance examples") {
  const auto k = Particle::ball(0, 0, 1);
  const auto l = Particle::ball(3, 0, 1);
  CHECK(hausdorff_distance(k, l) == doctest::Approx(3.0));
  CHECK(hausdorff_distance(k, k) == 0.0);
  CHECK_THROWS_AS(hausdorff_distance(k, Particle::ball(3, Point(0, 0, 0), 1)), GeometryError);
}

TEST_CASE("segment hausdorff distance matches point sampling oracle") {
  const auto h = Particle::segment(0, 0, 0, 1);
  const auto v = Particle::segment(0, 0, kPi / 2, 1);
  CHECK(std::abs(hausdorff_distance(h, v) - sampled_hausdorff(h, v, 100'000)) < 1e-3);
  CHECK(hausdorff_distance(h, v) == doctest::Approx(1.0));

  RngStream rng(11, 0);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_segment(rng, 2.0);
    const auto b = random_segment(rng, 2.0);
    CHECK(std::abs(hausdorff_distance(a, b) - sampled_hausdorff(a, b, 20'000)) < 1e-3);
  }
}

TEST_CASE("hausdorff distance is a metric") {
  RngStream rng(5, 1);
  for (int t = 0; t < 500; ++t) {
    const bool seg = t % 2 == 0;
    auto draw = [&] { return seg ? random_segment(rng, 1.5) : random_ball(rng, 2, 1.5); };
    const auto a = draw(), b = draw(), c = draw();
    CHECK(hausdorff_distance(a, b) == hausdorff_distance(b, a));
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, b) > 0.0);
    CHECK(hausdorff_distance(a, c) <= hausdorff_distance(a, b) + hausdorff_distance(b, c) + 1e-9);
    CHECK(hausdorff_distance(a, b) >= (a.center() - b.center()).norm() - 1e-12);
  }
}

TEST_CASE("intersection examples and symmetry") {
  CHECK(intersects(Particle::ball(0, 0, 1), Particle::ball(1.5, 0, 1)));
  CHECK_FALSE(intersects(Particle::ball(0, 0, 1), Particle::ball(3, 0, 1)));
  CHECK(intersects(Particle::segment(0, 0, 0, 0.5), Particle::segment(0, 0, kPi / 2, 0.5)));
  CHECK(intersects(Particle::segment(0, 0, 0, 1), Particle::segment(1, 1, kPi / 2, 1)));
  CHECK_FALSE(intersects(Particle::segment(0, 0, 0, 1), Particle::segment(0, 1, 0, 1)));

  RngStream rng(9, 2);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_segment(rng, 1.0);
    const auto b = random_segment(rng, 1.0);
    CHECK(intersects(a, b) == intersects(b, a));
    CHECK(intersects(a, a));
  }
}

TEST_CASE("q_measure") {
  const auto h = Particle::segment(0, 0, 0, 0.5);
  const auto v = Particle::segment(0, 0, kPi / 2, 0.5);
  const Particle crossing[] = {h, v};
  CHECK(q_measure(2, crossing) == 1.0);
  const Particle parallel[] = {h, Particle::segment(0, 1, 0, 0.5)};
  CHECK(q_measure(2, parallel) == 0.0);
  const Particle overlap[] = {Particle::segment(0, 0, 0, 1), Particle::segment(0.5, 0, 0, 1)};
  CHECK(q_measure(2, overlap) == 0.0);
  const Particle one[] = {Particle::segment(0, 0, 0.3, 1)};
  CHECK(q_measure(1, one) == 2.0);

  const Particle balls[] = {Particle::ball(0, 0, 1), Particle::ball(0, 0, 2)};
  CHECK_THROWS_AS(q_measure(2, balls), GeometryError);
  CHECK_THROWS_AS(q_measure(3, crossing), GeometryError);

  RngStream rng(3, 3);
  for (int t = 0; t < 500; ++t) {
    const Particle ab[] = {random_segment(rng, 1.0), random_segment(rng, 1.0)};
    const Particle ba[] = {ab[1], ab[0]};
    CHECK(q_measure(2, ab) == q_measure(2, ba));
  }
}

TEST_CASE("config_distance") {
  const auto k = Particle::ball(0, 0, 1);
  const Particle ks[] = {k};
  const Particle far[] = {Particle::ball(5, 0, 1)};
  CHECK(config_distance(ks, ks) == 0.0);
  CHECK(config_distance(ks, far) == doctest::Approx(5.0));
  CHECK(config_distance(ks, {}) == kInfinity);
}

TEST_CASE("window geometry") {
  for (int d = 1; d <= 3; ++d) {
    const Window w(d, 7.3);
    CHECK(std::pow(w.side(), d) == doctest::Approx(7.3).epsilon(1e-12));
  }
  const Window w(2, 4.0);
  CHECK(w.contains(Point(0.99, -1.0, 0)));
  CHECK_FALSE(w.contains(Point(1.01, 0, 0)));
  CHECK(w.eroded(0.5).side() == doctest::Approx(1.0));
  CHECK_THROWS_AS(Window(2, -1.0), GeometryError);
}

TEST_CASE("restrict") {
  const Configuration xi({Particle::ball(0, 0, 0.5), Particle::ball(10, 10, 0.5)});
  const Window w(2, 4.0);
  const auto once = restrict(xi, w);
  REQUIRE(once.size() == 1);
  CHECK(once[0] == Particle::ball(0, 0, 0.5));
  CHECK(restrict(once, w) == once);
  CHECK(restrict(Configuration{}, w).empty());

  RngStream rng(4, 4);
  for (int t = 0; t < 100; ++t) {
    const auto big = gibbsperc::testing::random_balls(rng, 30, 4.0);
    std::vector<Particle> part(big.begin(), big.begin() + 15);
    const Configuration small(part);
    CHECK(is_subset(restrict(small, w), restrict(big, w)));
    CHECK(restrict(restrict(big, w), w) == restrict(big, w));
  }
}

TEST_CASE("configuration is simple and sorted") {
  const auto a = Particle::ball(0, 0, 0.5);
  CHECK_THROWS_AS(Configuration({a, a}), GeometryError);
  Configuration xi;
  CHECK(xi.insert(a));
  CHECK_FALSE(xi.insert(a));
  CHECK_THROWS_AS(xi.plus(a), GeometryError);

  RngStream rng(6, 5);
  std::vector<Particle> ps;
  for (int i = 0; i < 40; ++i) ps.push_back(i % 2 ? random_segment(rng, 2.0) : Particle::segment(0.25, 0.25, 0.1 * (i % 5), 0.5));
  std::vector<Particle> unique;
  for (const auto& p : ps) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  const Configuration sorted(unique);
  CHECK(std::is_sorted(sorted.begin(), sorted.end(), ParticleLess{}));
  for (int t = 0; t < 20; ++t) {
    auto shuffled = unique;
    for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    CHECK(Configuration(shuffled) == sorted);
  }
  for (const auto& p : unique) CHECK(compare(p, p) == std::strong_ordering::equal);
}

TEST_CASE("factorial tuples") {
  auto count = [](const Configuration& xi, std::size_t m) {
    std::size_t n = 0;
    for (const auto& t : factorial_tuples(xi, m)) {
      for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) CHECK(t[i] != t[j]);
      ++n;
    }
    return n;
  };
  RngStream rng(8, 6);
  const auto three = gibbsperc::testing::random_balls(rng, 3, 5.0);
  CHECK(count(three, 2) == 6);
  CHECK(count(Configuration(std::vector<Particle>(three.begin(), three.begin() + 2)), 3) == 0);
  CHECK(count(Configuration{}, 2) == 0);
  for (std::size_t n = 0; n <= 7; ++n) {
    const auto xi = gibbsperc::testing::random_balls(rng, n, 5.0);
    for (std::size_t m = 1; m <= 4; ++m) CHECK(count(xi, m) == falling_factorial(n, m));
  }
}

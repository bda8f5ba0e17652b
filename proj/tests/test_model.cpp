#include "gibbsperc/model.hpp"
#include "gibbsperc/ustat.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace gibbsperc;
using namespace gibbsperc::testing;

namespace {

const double kPi = std::numbers::pi;

double brute_force(const UStatSpec& spec, const Configuration& xi) {
  double sum = 0.0;
  std::vector<Particle> tuple(spec.order, xi.empty() ? Particle::ball(0, 0, 1) : xi[0]);
  for (const auto& t : factorial_tuples(xi, spec.order)) {
    for (std::size_t i = 0; i < t.size(); ++i) tuple[i] = xi[t[i]];
    sum += spec.evaluate(tuple);
  }
  return sum / spec.factorial();
}

ModelSpec random_model(RngStream& rng, int i) {
  switch (i % 4) {
    case 0: return hardcore_balls(0.2);
    case 1: return facet_cross(0.15, rng.uniform(0.0, 3.0));
    case 2: {
      ModelSpec m = poisson_balls(0.2);
      m.potential = PairTable{{0.5, 1.0, 1.5}, {kInfinity, 0.7, 0.2}};
      return m;
    }
    default: {
      ModelSpec m = facet_cross(0.15, 1.0);
      m.law.orientation = {};
      return m;
    }
  }
}

Configuration draw_for(const ModelSpec& m, RngStream& rng, std::size_t n, double spread) {
  std::vector<Particle> ps;
  for (std::size_t i = 0; i < n; ++i) ps.push_back(m.draw_particle(Point(rng.uniform(-spread, spread), rng.uniform(-spread, spread), 0), rng));
  return Configuration(std::move(ps));
}

}  // namespace

TEST_CASE("papangelou examples") {
  const auto hc = hardcore_balls(0.2);
  const auto k = Particle::ball(0, 0, 0.5);
  CHECK(papangelou(hc, k, Configuration({Particle::ball(0.8, 0, 0.5)})) == 0.0);
  CHECK(papangelou(hc, k, Configuration({k})) == 0.0);
  CHECK(papangelou(hc, k, Configuration{}) == 1.0);

  const auto facet = facet_cross(0.15, 0.7);
  const auto h = Particle::segment(0, 0, 0, 0.5);
  const Configuration xi({Particle::segment(0.1, 0.1, kPi / 2, 0.5), Particle::segment(3, 3, 0, 0.5)});
  CHECK(papangelou(facet, h, xi) == doctest::Approx(std::exp(-0.7)));
  CHECK(papangelou(facet, h, xi) == doctest::Approx(0.4966).epsilon(1e-4));
  CHECK(papangelou(facet, h, Configuration{}) == 1.0);
}

TEST_CASE("papangelou_p examples") {
  const auto hc = hardcore_balls(0.2);
  const Particle single[] = {Particle::ball(0, 0, 0.5)};
  const Configuration xi({Particle::ball(2, 0, 0.5)});
  CHECK(papangelou_p(hc, single, xi) == papangelou(hc, single[0], xi));
  const Particle overlapping[] = {Particle::ball(0, 0, 0.5), Particle::ball(0.5, 0, 0.5)};
  CHECK(papangelou_p(hc, overlapping, Configuration{}) == 0.0);
  const auto facet = facet_cross(0.15, 1.0);
  const Particle distant[] = {Particle::segment(0, 0, 0, 0.5), Particle::segment(5, 0, kPi / 2, 0.5)};
  CHECK(papangelou_p(facet, distant, Configuration{}) == 1.0);
}

TEST_CASE("hamiltonian examples") {
  const auto facet = facet_cross(0.15, 0.7);
  const auto h = Particle::segment(0, 0, 0, 0.5);
  const auto v = Particle::segment(0.1, 0.1, kPi / 2, 0.5);
  CHECK(hamiltonian(facet, Configuration{}, Configuration({h})).as_double() == 0.0);
  CHECK(hamiltonian(facet, Configuration({h}), Configuration{}).as_double() == 0.0);
  const Configuration pair({h, v});
  CHECK(hamiltonian(facet, pair, Configuration{}).as_double() == doctest::Approx(0.7));
  CHECK(hamiltonian(facet, pair, Configuration{}).as_double() ==
        doctest::Approx(-std::log(papangelou_p(facet, pair.particles(), Configuration{}))));
  CHECK_THROWS_AS(hamiltonian(facet, pair, Configuration({h})), GeometryError);
  CHECK(hamiltonian(hardcore_balls(0.2), Configuration({Particle::ball(0, 0, 0.5), Particle::ball(0.5, 0, 0.5)}), Configuration{}).infinite);
}

TEST_CASE("validate") {
  const auto ok = validate(poisson_balls(0.1));
  CHECK(ok.ok());
  CHECK(ok.subcritical_by_bound);
  CHECK(ok.percolation_bound == doctest::Approx(1.0 / kPi));
  CHECK_FALSE(validate(poisson_balls(0.5)).subcritical_by_bound);

  auto bad = facet_cross(0.15, -1.0);
  auto report = validate(bad);
  REQUIRE_FALSE(report.ok());
  CHECK(report.errors.front().find("a2") != std::string::npos);

  report = validate(poisson_balls(0.0));
  REQUIRE_FALSE(report.ok());
  CHECK(report.errors.front().find("lambda") != std::string::npos);

  auto no_range = poisson_balls(0.2);
  no_range.R = -1;
  CHECK_FALSE(validate(no_range).ok());
}

TEST_CASE("papangelou properties") {
  RngStream rng(21, 0);
  for (int t = 0; t < 400; ++t) {
    const auto m = random_model(rng, t);
    const auto xi = draw_for(m, rng, 1 + rng.below(8), 1.5);
    const auto k = m.draw_particle(Point(rng.uniform(-1, 1), rng.uniform(-1, 1), 0), rng);
    if (xi.contains(k)) continue;
    const double kappa = papangelou(m, k, xi);
    CHECK(kappa >= 0.0);
    CHECK(kappa <= 1.0);

    const double range = m.interaction_range();
    const auto far = m.draw_particle(k.center() + Point(range + 2 * m.R + 0.01, 0, 0), rng);
    CHECK(hausdorff_distance(far, k) > range);
    if (!xi.contains(far)) CHECK(papangelou(m, k, xi.plus(far)) == kappa);

    // symmetry of kappa_p
    std::vector<Particle> tuple = {k, m.draw_particle(Point(rng.uniform(-1, 1), rng.uniform(-1, 1), 0), rng),
                                   m.draw_particle(Point(rng.uniform(-1, 1), rng.uniform(-1, 1), 0), rng)};
    if (std::any_of(tuple.begin(), tuple.end(), [&](const Particle& p) { return xi.contains(p); })) continue;
    const double base = papangelou_p(m, tuple, xi);
    std::sort(tuple.begin(), tuple.end(), ParticleLess{});
    do {
      CHECK(papangelou_p(m, tuple, xi) == doctest::Approx(base).epsilon(1e-12));
    } while (std::next_permutation(tuple.begin(), tuple.end(), ParticleLess{}));
  }
}

TEST_CASE("hamiltonian cocycle identity") {
  RngStream rng(22, 0);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const auto m = random_model(rng, t);
    const auto xi = draw_for(m, rng, rng.below(5), 1.0);
    const auto chi = draw_for(m, rng, rng.below(4), 1.0).translated(Point(2.2, 0, 0));
    const auto k = m.draw_particle(Point(rng.uniform(-1, 1), rng.uniform(-1, 1), 0), rng);
    if (xi.contains(k)) continue;
    const Energy before = hamiltonian(m, xi, chi);
    const Energy after = hamiltonian(m, xi.plus(k), chi);
    const double kappa = papangelou(m, k, xi.plus(chi));
    if (before.infinite || after.infinite) continue;
    CHECK(after.value == doctest::Approx(before.value - std::log(kappa)).epsilon(1e-12));
    CHECK(before.value >= 0.0);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("u_statistic examples") {
  const auto g2 = UStatSpec::facet_g(2, 1.0);
  const Configuration triangle({Particle::segment(0, 0, 0, 1), Particle::segment(0, 0.2, kPi / 3, 1),
                                Particle::segment(0.3, -0.2, 2 * kPi / 3, 1)});
  CHECK(u_statistic(g2, triangle) == 3.0);
  CHECK(u_statistic(g2, Configuration{}) == 0.0);
  CHECK(u_statistic(UStatSpec::tent(1.0), Configuration{}) == 0.0);
  CHECK(u_statistic(g2, Configuration({Particle::segment(0, 0, 0, 1), Particle::segment(0, 0.5, 0, 1)})) == 0.0);
}

TEST_CASE("score examples") {
  const auto g2 = UStatSpec::facet_g(2, 0.5);
  const auto k = Particle::segment(0, 0, 0, 0.5);
  CHECK(score(g2, k, Configuration({Particle::segment(0, 0.1, kPi / 2, 0.5)})) == 0.5);
  CHECK(score(g2, k, Configuration{}) == 0.0);
  CHECK(score(UStatSpec::facet_g(1, 1.0), Particle::segment(0, 0, 0.4, 1.0), Configuration{}) == 2.0);
}

TEST_CASE("u_statistic equals brute force enumeration") {
  RngStream rng(23, 0);
  const UStatSpec specs[] = {UStatSpec::facet_g(2, 0.5), UStatSpec::close_pair(0.8), UStatSpec::one(), UStatSpec::facet_g(1, 0.5),
                             UStatSpec::make_custom(3, 1.0, 1.0, [](std::span<const Particle> t) {
                               return intersects(t[0], t[1]) && intersects(t[1], t[2]) ? 1.0 : 0.0;
                             })};
  for (int t = 0; t < 1000; ++t) {
    const auto xi = random_segments(rng, rng.below(13), 1.5);
    for (const auto& spec : specs) CHECK(u_statistic(spec, xi) == brute_force(spec, xi));
    const auto tent = UStatSpec::tent(1.0);
    CHECK(u_statistic(tent, xi) == doctest::Approx(brute_force(tent, xi)).epsilon(1e-12));
  }
}

TEST_CASE("u_statistic is translation invariant") {
  RngStream rng(24, 0);
  const auto g2 = UStatSpec::facet_g(2, 0.5);
  for (int t = 0; t < 200; ++t) {
    const auto xi = random_segments(rng, 20, 2.0);
    const Point shift(rng.uniform(-50, 50), rng.uniform(-50, 50), 0);
    CHECK(u_statistic(g2, xi.translated(shift)) == u_statistic(g2, xi));
  }
}

TEST_CASE("scores sum to the u_statistic") {
  RngStream rng(25, 0);
  const UStatSpec specs[] = {UStatSpec::facet_g(2, 0.5), UStatSpec::close_pair(0.8), UStatSpec::one()};
  for (int t = 0; t < 200; ++t) {
    const auto xi = random_segments(rng, rng.below(15), 1.5);
    for (const auto& spec : specs) {
      double sum = 0.0;
      for (const auto& k : xi) sum += score(spec, k, xi.minus(k));
      CHECK(sum == doctest::Approx(u_statistic(spec, xi)).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel conventions") {
  const auto cp = UStatSpec::close_pair(1.0);
  const Particle same[] = {Particle::ball(0, 0, 0.5), Particle::ball(0, 0, 0.5)};
  CHECK(cp.evaluate(same) == 0.0);
  const Particle far[] = {Particle::ball(0, 0, 0.5), Particle::ball(1.5, 0, 0.5)};
  CHECK(cp.evaluate(far) == 0.0);
  CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
  CHECK(unit_ball_volume(2) == doctest::Approx(kPi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * kPi / 3));
}

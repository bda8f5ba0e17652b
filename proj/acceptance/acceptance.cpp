#include "gibbsperc/inference.hpp"
#include "gibbsperc/percolation.hpp"
#include "gibbsperc/sampler.hpp"
#include "gibbsperc/stats.hpp"
#include "gibbsperc/ustat.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

using namespace gibbsperc;

namespace {

const double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RngStream stream_for(int criterion) { return RngStream(kSeed, stream_id(static_cast<std::uint64_t>(criterion), 0, 0)); }

ModelSpec facet_model(double lambda, double a2) {
  ModelSpec m;
  m.lambda = lambda;
  m.R = 0.5;
  m.law.shape = Shape::Segment;
  m.law.orientation.angles = {0.0, kPi / 2};
  m.law.orientation.weights = {1.0, 1.0};
  m.potential = Facet{a2};
  return m;
}

ModelSpec hardcore_model(double lambda) {
  ModelSpec m;
  m.lambda = lambda;
  m.R = 0.5;
  m.potential = Hardcore{};
  return m;
}

double tv_to_poisson(const std::vector<std::uint64_t>& counts, double mean) {
  std::map<std::uint64_t, double> freq;
  for (auto c : counts) freq[c] += 1.0 / static_cast<double>(counts.size());
  double s = 0.0, covered = 0.0;
  for (std::uint64_t k = 0; k <= freq.rbegin()->first; ++k) {
    const double pmf = stats::poisson_cdf(k, mean) - (k ? stats::poisson_cdf(k - 1, mean) : 0.0);
    covered += pmf;
    s += std::abs((freq.count(k) ? freq[k] : 0.0) - pmf);
  }
  return 0.5 * (s + 1.0 - covered);
}

Outcome sampler_exactness() {
  const auto m = facet_model(0.15, 1.0);
  const Window w(2, 9.0);
  const auto rng = stream_for(1);
  std::vector<std::uint64_t> rej, cftp;
  for (std::uint64_t r = 0; r < 100'000; ++r) {
    rej.push_back(sample_gibbs_rejection(m, w, {}, rng.split(2 * r)).sample.size());
    cftp.push_back(sample_gibbs_cftp(m, w, {}, rng.split(2 * r + 1)).sample.size());
  }
  const double tv = stats::tv_distance(rej, cftp);
  return {tv < 0.02, fmt("TV(rejection, cftp) = %.4f, need < 0.02", tv)};
}

Outcome poisson_degeneracy() {
  ModelSpec m = facet_model(0.5, 0.0);
  m.potential = NoInteraction{};
  const Window w(2, 9.0);
  const auto rng = stream_for(2);
  std::vector<std::uint64_t> rej, cftp;
  std::uint64_t proposals = 0;
  for (std::uint64_t r = 0; r < 100'000; ++r) {
    const auto a = sample_gibbs_rejection(m, w, {}, rng.split(2 * r));
    proposals += a.proposals;
    rej.push_back(a.sample.size());
    cftp.push_back(sample_gibbs_cftp(m, w, {}, rng.split(2 * r + 1)).sample.size());
  }
  const double tv_r = tv_to_poisson(rej, 4.5), tv_c = tv_to_poisson(cftp, 4.5);
  const double acceptance = 100'000.0 / static_cast<double>(proposals);
  return {tv_r < 0.02 && tv_c < 0.02 && acceptance == 1.0,
          fmt("TV rejection %.4f, TV cftp %.4f, acceptance rate %.6f", tv_r, tv_c, acceptance)};
}

Outcome domination() {
  const auto r = domination_check(hardcore_model(0.25), Window(2, 25.0), 100'000, stream_for(3), 0.001);
  return {r.holds, fmt("max(poisson - gibbs CDF) = %.4f, DKW band %.4f, means %.3f vs %.3f", r.max_violation, r.dkw_epsilon,
                       r.gibbs_mean, r.poisson_mean)};
}

Outcome disagreement_localization() {
  const auto m = hardcore_model(0.2);
  const Window w(2, 25.0);
  const Window quarter(2, 25.0 / 4);
  const Configuration chi_b({Particle::ball(2.75, 0.0, 0.5)});
  const auto rng = stream_for(4);
  std::uint64_t qualifying = 0, agreeing = 0, disagreeing_runs = 0;
  for (std::uint64_t r = 0; r < 10'000; ++r) {
    const auto out = disagreement_couple(m, w, {}, chi_b, rng.split(r));
    disagreeing_runs += out.disagreement.empty() ? 0 : 1;
    const auto centre = restrict(out.dominating, quarter);
    if (connects(out.dominating.plus(out.boundary_diff), centre.particles(), out.boundary_diff.particles())) continue;
    ++qualifying;
    agreeing += restrict(out.sample_a, quarter) == restrict(out.sample_b, quarter) ? 1 : 0;
  }
  return {qualifying > 0 && agreeing == qualifying,
          fmt("%llu of %llu qualifying runs agree on the central quarter (%llu runs disagree somewhere)",
              static_cast<unsigned long long>(agreeing), static_cast<unsigned long long>(qualifying),
              static_cast<unsigned long long>(disagreeing_runs))};
}

Outcome connection_decay() {
  ModelSpec m;
  m.lambda = 0.3;
  m.R = 0.5;
  const auto s = estimate_connection_decay(m, default_probe(m, {2, 4, 6, 8}), 100'000, stream_for(5));
  std::string ps;
  for (double p : s.estimates) ps += fmt(" %.2e", p);
  return {s.fit.points >= 2 && s.fit.c2 > 0.0 && s.fit.r2 >= 0.9,
          fmt("p(s) =%s, slope %.4f, r2 %.4f", ps.c_str(), -s.fit.c2, s.fit.r2)};
}

Outcome threshold_arithmetic() {
  const double lower = percolation_lower_bound(2, 0.5), sy = sy13_bound(2, 0.5);
  const bool ok = std::abs(lower - 1 / kPi) <= 1e-12 && std::abs(sy - 1 / (4 * kPi)) <= 1e-12 && lower > sy;
  return {ok, fmt("1/(v_d 2^d R^d) = %.15f, 1/(v_d (1+2R)^d) = %.15f", lower, sy)};
}

RhoOptions decorrelation_options() {
  RhoOptions o;
  for (int i = 0; i <= 10; ++i) o.bin_edges.push_back(0.25 * i);
  o.mass_samples = 2'000'000;
  o.experiment.padding = 1.0;
  return o;
}

/// Criteria 7 and 9 share the facet-model run.
const DecorrelationReport& facet_decorrelation() {
  static const DecorrelationReport report =
      decorrelation_test(facet_model(0.15, 1.0), Window(2, 64.0), 100'000, stream_for(7), decorrelation_options());
  return report;
}

Outcome decorrelation() {
  const auto& rep = facet_decorrelation();
  ModelSpec control = facet_model(0.15, 0.0);
  control.potential = NoInteraction{};
  const auto poisson = decorrelation_test(control, Window(2, 64.0), 100'000, stream_for(70), decorrelation_options());
  double worst = 0.0;
  for (std::size_t b = 0; b < poisson.rho.diff.size(); ++b) {
    if (poisson.rho.present[b]) worst = std::max(worst, std::abs(poisson.rho.diff[b]) / poisson.rho.diff_sigma[b]);
  }
  const auto& fit = rep.series.fit;
  const bool facet_ok = fit.points >= 2 && fit.c2 > 0.0 && fit.r2 >= 0.8;
  return {facet_ok && worst < 3.0, fmt("facet fit over %zu significant bins: slope %.4f, r2 %.4f (max |z| %.2f); Poisson control max |z| %.2f",
                                       fit.points, -fit.c2, fit.r2, rep.max_z, worst)};
}

Outcome moment_bound() {
  const CenterBox regions[] = {{Point(-1.5, -0.5, 0), Point(-0.5, 0.5, 0)}, {Point(0.5, -0.5, 0), Point(1.5, 0.5, 0)}};
  const auto r = moment_bound_check(hardcore_model(0.2), Window(2, 25.0), regions, 100'000, stream_for(8));
  return {r.holds, fmt("E[Xi(P1) Xi(P2)] = %.5f +- %.5f, bound %.5f", r.moment, r.sigma, r.bound)};
}

Outcome correlation_cap() {
  const auto& rho = facet_decorrelation().rho;
  const double cap = 0.15 * 0.15;
  double worst = -kInfinity;
  bool ok = true;
  for (std::size_t b = 0; b < rho.rho2.size(); ++b) {
    if (!rho.present[b]) continue;
    ok = ok && rho.rho2[b] <= cap + 3 * rho.rho2_sigma[b];
    worst = std::max(worst, (rho.rho2[b] - cap) / rho.rho2_sigma[b]);
  }
  return {ok, fmt("max (rho2 - lambda^2) / sigma = %.2f over present bins, need <= 3", worst)};
}

Outcome fme_vanishing() {
  const auto r = fme_truncation_check(UStatSpec::facet_g(2, 0.5), facet_model(0.15, 1.0), 1000, stream_for(10));
  return {r.pass() && r.trials == 1000 && r.locality_trials == 1000,
          fmt("%llu/%llu vanishing failures (max |D^l| %.1e), %llu/%llu locality failures, %llu/%llu low-order nonzero",
              static_cast<unsigned long long>(r.vanishing_failures), static_cast<unsigned long long>(r.trials), r.max_abs_high_order,
              static_cast<unsigned long long>(r.locality_failures), static_cast<unsigned long long>(r.locality_trials),
              static_cast<unsigned long long>(r.low_order_nonzero), static_cast<unsigned long long>(r.low_order_trials))};
}

/// Poisson mean of G_2 per unit volume for facets {0, pi/2} of half length 1/2.
double poisson_g2_mean_over_n(double lambda, double n) {
  const double s = std::sqrt(n);
  const int m = 20'000;
  const double h = s / m;
  double g = 0.0;
  for (int i = 0; i < m; ++i) {
    const double u = (i + 0.5) * h;
    g += (std::min(s, u + 0.5) - std::max(0.0, u - 0.5)) * h;
  }
  return 0.25 * lambda * lambda * g * g / n;
}

Outcome clt() {
  const double windows[] = {25.0, 100.0, 400.0};
  const std::uint64_t reps[] = {1000};
  ExperimentOptions opt;
  opt.padding = 1.0;
  const auto spec = UStatSpec::facet_g(2, 0.5);
  const auto gibbs = clt_experiment(facet_model(0.15, 1.0), spec, windows, reps, stream_for(11), opt);
  ModelSpec control = facet_model(0.15, 0.0);
  control.potential = NoInteraction{};
  const auto poisson = clt_experiment(control, spec, windows, reps, stream_for(110), opt);

  auto gate = [](const CltReport& r) { return !r.degenerate && r.mean_change < 0.15 && r.var_change < 0.15 && r.ks < 0.05; };
  bool oracle = true;
  double worst_z = 0.0;
  for (const auto& row : poisson.rows) {
    const double z = std::abs(row.mean_over_n - poisson_g2_mean_over_n(0.15, row.n)) / row.mean_sigma;
    worst_z = std::max(worst_z, z);
    oracle = oracle && z < 3.0;
  }
  return {gate(gibbs) && gate(poisson) && oracle,
          fmt("facet: mean change %.3f, var change %.3f, KS %.4f; Poisson: mean change %.3f, var change %.3f, KS %.4f, "
              "Mecke oracle max |z| %.2f",
              gibbs.mean_change, gibbs.var_change, gibbs.ks, poisson.mean_change, poisson.var_change, poisson.ks, worst_z)};
}

Outcome brute_force_equivalence() {
  const auto rng = stream_for(12);
  const UStatSpec specs[] = {UStatSpec::facet_g(2, 0.5), UStatSpec::close_pair(0.8),
                             UStatSpec::make_custom(3, 1.0, 1.0, [](std::span<const Particle> t) {
                               return intersects(t[0], t[1]) && intersects(t[0], t[2]) ? 1.0 : 0.0;
                             })};
  std::uint64_t mismatches = 0;
  for (std::uint64_t c = 0; c < 1000; ++c) {
    auto r = rng.split(c);
    std::vector<Particle> ps;
    const auto n = r.below(13);
    for (std::uint64_t i = 0; i < n; ++i) {
      ps.push_back(Particle::segment(r.uniform(-1.5, 1.5), r.uniform(-1.5, 1.5), r.uniform(0.0, kPi), 0.5));
    }
    const Configuration xi(std::move(ps));
    for (const auto& spec : specs) {
      double sum = 0.0;
      std::vector<Particle> tuple(spec.order, Particle::ball(0, 0, 1));
      for (const auto& t : factorial_tuples(xi, spec.order)) {
        for (std::size_t i = 0; i < t.size(); ++i) tuple[i] = xi[t[i]];
        sum += spec.evaluate(tuple);
      }
      mismatches += u_statistic(spec, xi) == sum / spec.factorial() ? 0 : 1;
    }
  }
  return {mismatches == 0, fmt("%llu mismatches over 1000 configurations and 3 kernels", static_cast<unsigned long long>(mismatches))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<int> only;
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"sampler exactness", sampler_exactness},
      {"Poisson degeneracy", poisson_degeneracy},
      {"stochastic domination", domination},
      {"disagreement localization", disagreement_localization},
      {"connection-probability decay", connection_decay},
      {"threshold-bound arithmetic", threshold_arithmetic},
      {"decorrelation", decorrelation},
      {"moment bound", moment_bound},
      {"correlation cap", correlation_cap},
      {"FME vanishing identity", fme_vanishing},
      {"CLT diagnostics", clt},
      {"brute-force equivalence", brute_force_equivalence},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = criteria[i].second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

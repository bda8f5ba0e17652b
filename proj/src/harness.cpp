#include "gibbsperc/harness.hpp"

#include "gibbsperc/inference.hpp"
#include "gibbsperc/percolation.hpp"
#include "gibbsperc/sampler.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace gibbsperc {
namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json series_json(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back(series_json(r));
  return {{"columns", t.columns}, {"rows", rows}};
}

SamplerOptions sampler_options(const ExperimentConfig& c) {
  SamplerOptions o;
  o.proposal_budget = c.proposal_budget;
  o.max_doublings = c.max_doublings;
  return o;
}

ExperimentOptions experiment_options(const ExperimentConfig& c) {
  ExperimentOptions o;
  o.padding = c.padding;
  o.threads = c.threads;
  o.sampler = sampler_options(c);
  return o;
}

std::string window_label(double n) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", n);
  return buf;
}

void run_sample(const ExperimentConfig& c, RunRecord& rec) {
  rec.table.columns = {"window", "replicate", "index", "shape", "x", "y", "z", "size", "orientation"};
  const Configuration chi(c.boundary_a);
  json samples = json::array();
  double horizon_sum = 0.0, proposals = 0.0;
  int max_doublings = 0;
  std::uint64_t runs = 0;
  for (std::size_t wi = 0; wi < c.windows.size(); ++wi) {
    const Window w(c.model.dim, c.windows[wi]);
    const RngStream base = experiment_stream(c, wi);
    for (std::uint64_t r = 0; r < c.replicates; ++r) {
      Configuration xi;
      json diag;
      if (c.sampler == SamplerKind::Rejection) {
        auto res = sample_gibbs_rejection(c.model, w, chi, base.split(r), sampler_options(c));
        xi = std::move(res.sample);
        diag = {{"proposals", res.proposals}};
        proposals += static_cast<double>(res.proposals);
      } else {
        auto res = sample_gibbs_cftp(c.model, w, chi, base.split(r), sampler_options(c));
        xi = std::move(res.sample);
        diag = {{"horizon", res.horizon}, {"doublings", res.doublings}};
        horizon_sum += res.horizon;
        max_doublings = std::max(max_doublings, res.doublings);
      }
      ++runs;
      samples.push_back({{"window", c.windows[wi]}, {"replicate", r}, {"particles", to_json(xi)}, {"sampler", diag}});
      for (std::size_t i = 0; i < xi.size(); ++i) {
        const Particle& p = xi[i];
        rec.table.rows.push_back({c.windows[wi], static_cast<double>(r), static_cast<double>(i),
                                  static_cast<double>(static_cast<int>(p.shape())), p.center()[0], p.center()[1],
                                  p.center()[2], p.size(), p.orientation()});
      }
    }
  }
  rec.payload["samples"] = std::move(samples);
  if (c.sampler == SamplerKind::Rejection) {
    rec.diagnostics["mean_proposals"] = proposals / static_cast<double>(runs);
  } else {
    rec.diagnostics["mean_horizon"] = horizon_sum / static_cast<double>(runs);
    rec.diagnostics["max_doublings"] = max_doublings;
  }
}

void run_couple(const ExperimentConfig& c, RunRecord& rec) {
  rec.table.columns = {"window", "replicate", "dominating", "sample_a", "sample_b", "boundary_diff", "disagreement", "horizon"};
  const Configuration chi_a(c.boundary_a), chi_b(c.boundary_b);
  std::uint64_t disagreeing = 0, runs = 0;
  for (std::size_t wi = 0; wi < c.windows.size(); ++wi) {
    const Window w(c.model.dim, c.windows[wi]);
    const RngStream base = experiment_stream(c, wi);
    for (std::uint64_t r = 0; r < c.replicates; ++r) {
      const auto out = disagreement_couple(c.model, w, chi_a, chi_b, base.split(r), sampler_options(c));
      rec.table.rows.push_back({c.windows[wi], static_cast<double>(r), static_cast<double>(out.dominating.size()),
                                static_cast<double>(out.sample_a.size()), static_cast<double>(out.sample_b.size()),
                                static_cast<double>(out.boundary_diff.size()), static_cast<double>(out.disagreement.size()),
                                out.horizon});
      disagreeing += out.disagreement.empty() ? 0 : 1;
      ++runs;
    }
  }
  rec.payload["disagreement_fraction"] = static_cast<double>(disagreeing) / static_cast<double>(runs);
}

void run_percolate(const ExperimentConfig& c, RunRecord& rec) {
  const ProbeGeometry geometry = default_probe(c.model, c.radii);
  const DecaySeries s = estimate_connection_decay(c.model, geometry, c.replicates, experiment_stream(c, 0), c.threads);
  const double region = unit_ball_volume(c.model.dim) * std::pow(c.radii.back() + 4.0 * c.model.R, c.model.dim);
  rec.table.columns = {"distance", "n", "estimate", "ci_lo", "ci_hi", "replicates"};
  for (std::size_t i = 0; i < s.distances.size(); ++i) {
    rec.table.rows.push_back({s.distances[i], region, s.estimates[i], s.ci_lo[i], s.ci_hi[i], static_cast<double>(s.replicates[i])});
  }
  rec.payload["fit"] = {{"c1", number(s.fit.c1)}, {"c2", number(s.fit.c2)}, {"r2", number(s.fit.r2)}, {"points", s.fit.points}};
}

void run_decay(const ExperimentConfig& c, RunRecord& rec) {
  const auto rows = estimate_lambda_c(c.model, c.windows, c.lambdas, c.replicates, experiment_stream(c, 0), c.threads);
  rec.table.columns = {"lambda", "n", "estimate", "ci_lo", "ci_hi", "replicates"};
  for (const auto& r : rows) rec.table.rows.push_back({r.lambda, r.n, r.estimate, r.ci_lo, r.ci_hi, static_cast<double>(r.replicates)});
}

void run_decorrelate(const ExperimentConfig& c, RunRecord& rec) {
  RhoOptions o;
  o.bin_edges = c.bins;
  o.mass_samples = c.mass_samples;
  o.experiment = experiment_options(c);
  const Window w(c.model.dim, c.windows.front());
  const auto report = decorrelation_test(c.model, w, c.replicates, experiment_stream(c, 0), o);
  const auto& rho = report.rho;
  rec.table.columns = {"bin_lo", "bin_hi", "present", "rho2", "rho2_sigma", "diff", "diff_sigma", "pair_mass", "replicates"};
  for (std::size_t b = 0; b < rho.rho2.size(); ++b) {
    rec.table.rows.push_back({rho.bin_lo[b], rho.bin_hi[b], rho.present[b] ? 1.0 : 0.0, rho.rho2[b], rho.rho2_sigma[b],
                              rho.diff[b], rho.diff_sigma[b], rho.pair_mass[b], static_cast<double>(rho.replicates)});
  }
  const auto& fit = report.series.fit;
  rec.payload["rho1"] = number(rho.rho1);
  rec.payload["rho1_sigma"] = number(rho.rho1_sigma);
  rec.payload["fit"] = {{"c1", number(fit.c1)}, {"c2", number(fit.c2)}, {"r2", number(fit.r2)}, {"points", fit.points}};
  rec.payload["max_z"] = number(report.max_z);
}

void run_clt(const ExperimentConfig& c, RunRecord& rec) {
  const std::uint64_t reps[1] = {c.replicates};
  const auto report = clt_experiment(c.model, *c.ustat, c.windows, reps, experiment_stream(c, 0), experiment_options(c));
  rec.table.columns = {"n", "replicates", "mean_over_n", "mean_sigma", "var_over_n", "var_sigma"};
  for (const auto& r : report.rows) {
    rec.table.rows.push_back({r.n, static_cast<double>(r.replicates), r.mean_over_n, r.mean_sigma, r.var_over_n, r.var_sigma});
  }
  rec.payload["degenerate"] = report.degenerate;
  rec.payload["mean_change"] = number(report.mean_change);
  rec.payload["var_change"] = number(report.var_change);
  if (!report.degenerate) {
    rec.payload["ks"] = number(report.ks);
    rec.payload["skewness"] = number(report.skewness);
    rec.payload["excess_kurtosis"] = number(report.excess_kurtosis);
  }
  for (const auto& w : report.warnings) rec.warnings.push_back(w);
}

void run_moment(const ExperimentConfig& c, RunRecord& rec) {
  const Window w(c.model.dim, c.windows.front());
  const auto r = moment_bound_check(c.model, w, c.regions, c.replicates, experiment_stream(c, 0), experiment_options(c));
  rec.table.columns = {"moment", "sigma", "bound", "holds", "strict", "replicates"};
  rec.table.rows.push_back({r.moment, r.sigma, r.bound, r.holds ? 1.0 : 0.0, r.strict ? 1.0 : 0.0, static_cast<double>(r.replicates)});
}

void run_fme(const ExperimentConfig& c, RunRecord& rec) {
  const auto r = fme_truncation_check(*c.ustat, c.model, c.replicates, experiment_stream(c, 0));
  rec.table.columns = {"trials", "vanishing_failures", "max_abs_high_order", "locality_trials", "locality_failures",
                       "low_order_trials", "low_order_nonzero", "pass"};
  rec.table.rows.push_back({static_cast<double>(r.trials), static_cast<double>(r.vanishing_failures), r.max_abs_high_order,
                            static_cast<double>(r.locality_trials), static_cast<double>(r.locality_failures),
                            static_cast<double>(r.low_order_trials), static_cast<double>(r.low_order_nonzero), r.pass() ? 1.0 : 0.0});
}

void run_domination(const ExperimentConfig& c, RunRecord& rec) {
  const Window w(c.model.dim, c.windows.front());
  const auto r = domination_check(c.model, w, c.replicates, experiment_stream(c, 0), c.alpha, experiment_options(c));
  rec.table.columns = {"count", "gibbs_cdf", "poisson_cdf"};
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    rec.table.rows.push_back({static_cast<double>(r.counts[i]), r.gibbs_cdf[i], r.poisson_cdf[i]});
  }
  rec.payload["dkw_epsilon"] = number(r.dkw_epsilon);
  rec.payload["max_violation"] = number(r.max_violation);
  rec.payload["gibbs_mean"] = number(r.gibbs_mean);
  rec.payload["poisson_mean"] = number(r.poisson_mean);
  rec.payload["holds"] = r.holds;
}

}  // namespace

json to_json(const Particle& p) {
  json center = json::array();
  for (int a = 0; a < p.dim(); ++a) center.push_back(p.center()[a]);
  if (p.shape() == Shape::Ball) return {{"shape", "ball"}, {"center", center}, {"radius", p.radius()}};
  return {{"shape", "segment"}, {"center", center}, {"half_length", p.half_length()}, {"orientation", p.orientation()}};
}

Particle particle_from_json(const json& j) {
  const auto shape = j.at("shape").get<std::string>();
  const auto center = j.at("center").get<std::vector<double>>();
  if (shape == "ball") {
    if (center.empty() || center.size() > 3) throw GeometryError("ball centre must have 1 to 3 coordinates");
    Point c = Point::Zero();
    for (std::size_t a = 0; a < center.size(); ++a) c[static_cast<Eigen::Index>(a)] = center[a];
    return Particle::ball(static_cast<int>(center.size()), c, j.at("radius").get<double>());
  }
  if (shape == "segment") {
    if (center.size() != 2) throw GeometryError("segment centre must have 2 coordinates");
    return Particle::segment(center[0], center[1], j.at("orientation").get<double>(), j.at("half_length").get<double>());
  }
  throw GeometryError("unknown particle shape '" + shape + "'");
}

json to_json(const Configuration& xi) {
  json out = json::array();
  for (const auto& p : xi) out.push_back(to_json(p));
  return out;
}

Configuration configuration_from_json(const json& j) {
  std::vector<Particle> out;
  for (const auto& item : j) out.push_back(particle_from_json(item));
  return Configuration(std::move(out));
}

json to_json(const ModelSpec& m) {
  json out = {{"dimension", m.dim}, {"lambda", m.lambda}, {"radius", m.R}, {"shape", m.law.shape == Shape::Ball ? "ball" : "segment"}};
  if (m.law.orientation.uniform()) {
    out["orientation"] = "uniform";
  } else {
    out["orientation"] = {{"angles", m.law.orientation.angles}, {"weights", m.law.orientation.weights}};
  }
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoInteraction>) {
          out["potential"] = {{"kind", "none"}};
        } else if constexpr (std::is_same_v<T, Hardcore>) {
          out["potential"] = {{"kind", "hardcore"}};
        } else if constexpr (std::is_same_v<T, Facet>) {
          out["potential"] = {{"kind", "facet"}, {"a2", p.a2}};
        } else if constexpr (std::is_same_v<T, PairTable>) {
          out["potential"] = {{"kind", "pair_table"}, {"edges", series_json(p.edges)}, {"values", series_json(p.values)}};
        } else {
          out["potential"] = {{"kind", "callback"}, {"name", p.name}, {"range", p.range}};
        }
      },
      m.potential);
  out["interaction_range"] = m.interaction_range();
  return out;
}

json to_json(const ExperimentConfig& c) {
  json out;
  out["model"] = to_json(c.model);
  if (c.ustat) {
    out["ustat"] = {{"kernel", c.ustat->name()}, {"order", c.ustat->order}, {"radius", c.ustat->radius}, {"sup_norm", c.ustat->sup_norm}};
  }
  out["experiment"] = std::string(to_string(c.experiment));
  out["windows"] = c.windows;
  out["replicates"] = c.replicates;
  out["seed"] = c.seed;
  out["sampler"] = c.sampler == SamplerKind::Cftp ? "cftp" : "rejection";
  out["padding"] = c.padding;
  if (!c.radii.empty()) out["radii"] = c.radii;
  if (!c.lambdas.empty()) out["lambdas"] = c.lambdas;
  if (!c.bins.empty()) out["bins"] = c.bins;
  if (!c.boundary_a.empty()) out["boundary_a"] = to_json(Configuration(c.boundary_a));
  if (!c.boundary_b.empty()) out["boundary_b"] = to_json(Configuration(c.boundary_b));
  out["text"] = serialize_config(c);
  return out;
}

json RunRecord::to_json() const {
  json out;
  out["version"] = version;
  out["config"] = config;
  out["wall_time_seconds"] = wall_time_seconds;
  json p = payload.is_null() ? json::object() : payload;
  p["table"] = table_json(table);
  out["payload"] = p;
  out["diagnostics"] = diagnostics.is_null() ? json::object() : diagnostics;
  out["warnings"] = warnings;
  return out;
}

RngStream experiment_stream(const ExperimentConfig& config, std::uint64_t window) {
  return RngStream(config.seed, stream_id(fnv1a(to_string(config.experiment)), window, 0));
}

RunRecord run(const ExperimentConfig& config) {
  if (auto errors = validate_config(config); !errors.empty()) throw ConfigErrors(std::move(errors));
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = to_json(config);
  rec.payload = json::object();
  rec.diagnostics = json::object();

  const auto report = validate(config.model);
  const bool percolation_sensitive = config.experiment == ExperimentKind::Decorrelate ||
                                     config.experiment == ExperimentKind::UstatClt ||
                                     config.experiment == ExperimentKind::Percolate;
  if (percolation_sensitive && report.ok() && !report.subcritical_by_bound) {
    rec.warnings.push_back("lambda is not below the sufficient subcriticality bound 1/(v_d 2^d R^d) = " +
                           window_label(report.percolation_bound));
  }

  try {
    switch (config.experiment) {
      case ExperimentKind::Sample: run_sample(config, rec); break;
      case ExperimentKind::Couple: run_couple(config, rec); break;
      case ExperimentKind::Percolate: run_percolate(config, rec); break;
      case ExperimentKind::Decay: run_decay(config, rec); break;
      case ExperimentKind::Decorrelate: run_decorrelate(config, rec); break;
      case ExperimentKind::UstatClt: run_clt(config, rec); break;
      case ExperimentKind::MomentCheck: run_moment(config, rec); break;
      case ExperimentKind::FmeCheck: run_fme(config, rec); break;
      case ExperimentKind::DominationCheck: run_domination(config, rec); break;
    }
  } catch (const SamplerBudgetError& e) {
    throw RunError(std::string(to_string(config.experiment)) + ": " + e.what(), true);
  } catch (const ConfigErrors&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(std::string(to_string(config.experiment)) + ": " + e.what(), false);
  }
  rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) out += (i ? "," : "") + table.columns[i];
  out += "\n";
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isfinite(row[i])) std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      else std::snprintf(buf, sizeof buf, "%s", std::isnan(row[i]) ? "nan" : (row[i] > 0 ? "inf" : "-inf"));
      out += (i ? "," : "");
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string render(const RunRecord& record, OutputFormat format) {
  if (format == OutputFormat::Csv) return render_csv(record.table);
  return record.to_json().dump(2) + "\n";
}

std::string write_output(const RunRecord& record, const ExperimentConfig& config) {
  const std::string text = render(record, config.format);
  if (config.output_path.empty()) return text;
  std::ofstream out(config.output_path);
  if (!out) throw RunError("cannot open output file '" + config.output_path + "'", false);
  out << text;
  return {};
}

}  // namespace gibbsperc

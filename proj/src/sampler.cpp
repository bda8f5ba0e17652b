#include "gibbsperc/sampler.hpp"

#include "gibbsperc/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gibbsperc {
namespace {

Point uniform_in_window(const Window& w, RngStream& rng) {
  Point p = Point::Zero();
  for (int a = 0; a < w.dim(); ++a) p[a] = rng.uniform(-w.half_side(), w.half_side());
  return p;
}

Configuration draw_poisson(const ModelSpec& model, const Window& w, RngStream& rng) {
  const std::uint64_t n = rng.poisson(model.lambda * w.volume());
  std::vector<Particle> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(model.draw_particle(uniform_in_window(w, rng), rng));
  return Configuration(std::move(out));
}

// Backward record of the free (dominating) birth-death process on W. Going
// back in time, live particles disappear at unit rate (a forward birth) and
// new ones appear at rate lambda |W| (a forward death), which keeps the
// stationary Poisson law. Events are appended in backward order, so a larger
// horizon only adds events and never changes those already drawn.
class DominatingHistory {
 public:
  struct Event {
    double time;
    std::uint32_t id;
    bool birth;
    double mark;
  };

  DominatingHistory(const ModelSpec& model, const Window& w, RngStream& rng) : model_(model), window_(w), rng_(rng) {
    const Configuration start = draw_poisson(model, w, rng_);
    for (const auto& p : start) add_particle(p);
  }

  void extend_to(double horizon) {
    const double birth_rate = model_.lambda * window_.volume();
    while (true) {
      const double total = birth_rate + static_cast<double>(alive_.size());
      if (total <= 0.0) break;
      const double step = rng_.exponential(total);
      if (depth_ + step > horizon) break;
      depth_ += step;
      if (rng_.uniform() * total < birth_rate) {
        const auto id = add_particle(model_.draw_particle(uniform_in_window(window_, rng_), rng_));
        events_.push_back({-depth_, id, false, 0.0});
      } else {
        const auto slot = rng_.below(alive_.size());
        const auto id = alive_[slot];
        alive_[slot] = alive_.back();
        alive_.pop_back();
        events_.push_back({-depth_, id, true, rng_.uniform()});
      }
    }
    depth_ = horizon;
  }

  const std::vector<Particle>& particles() const { return particles_; }
  const std::vector<Event>& events() const { return events_; }
  /// Particles alive at time -horizon.
  const std::vector<std::uint32_t>& alive_at_horizon() const { return alive_; }

 private:
  std::uint32_t add_particle(const Particle& p) {
    const auto id = static_cast<std::uint32_t>(particles_.size());
    particles_.push_back(p);
    alive_.push_back(id);
    return id;
  }

  const ModelSpec& model_;
  Window window_;
  RngStream& rng_;
  double depth_ = 0.0;
  std::vector<Particle> particles_;
  std::vector<Event> events_;
  std::vector<std::uint32_t> alive_;
};

struct Neighbour {
  std::uint32_t id;
  Energy energy;
};

// Interaction structure of all particles of the history and of one boundary.
class InteractionTable {
 public:
  void rebuild(const ModelSpec& model, const std::vector<Particle>& particles) {
    neighbours_.assign(particles.size(), {});
    if (!model.interacting() || particles.empty()) return;
    const double range = model.interaction_range();
    const CenterGrid grid(particles, range);
    for (std::size_t i = 0; i < particles.size(); ++i) {
      grid.for_each_near(particles[i].center(), range, [&](std::size_t j) {
        if (j == i) return;
        const Energy e = pair_energy(model, particles[i], particles[j]);
        if (!e.is_zero()) neighbours_[i].push_back({static_cast<std::uint32_t>(j), e});
      });
    }
  }
  const std::vector<Neighbour>& of(std::size_t id) const { return neighbours_[id]; }

 private:
  std::vector<std::vector<Neighbour>> neighbours_;
};

std::vector<Energy> boundary_energies(const ModelSpec& model, const std::vector<Particle>& particles, const Configuration& chi) {
  std::vector<Energy> out(particles.size());
  if (chi.empty() || !model.interacting()) return out;
  for (std::size_t i = 0; i < particles.size(); ++i) out[i] = local_energy(model, particles[i], chi.particles());
  return out;
}

struct SweepResult {
  bool coalesced = false;
  std::vector<std::uint32_t> sample;
  std::vector<char> upper_births;
};

// Forward pass of the upper and lower sandwich processes from -horizon to 0.
SweepResult sweep(const DominatingHistory& history, const InteractionTable& table, const std::vector<Energy>& boundary) {
  const auto& particles = history.particles();
  const std::size_t n = particles.size();
  std::vector<char> upper(n, 0), lower(n, 0);
  SweepResult out;
  out.upper_births.assign(n, 0);
  for (const auto id : history.alive_at_horizon()) upper[id] = 1;

  const auto& events = history.events();
  for (auto it = events.rbegin(); it != events.rend(); ++it) {
    const auto id = it->id;
    if (!it->birth) {
      upper[id] = 0;
      lower[id] = 0;
      continue;
    }
    // Repulsive kappa: the largest value is taken at the lower state.
    Energy against_lower = boundary[id];
    Energy against_upper = boundary[id];
    for (const auto& nb : table.of(id)) {
      if (lower[nb.id]) against_lower += nb.energy;
      if (upper[nb.id]) against_upper += nb.energy;
    }
    upper[id] = it->mark < against_lower.boltzmann();
    lower[id] = it->mark < against_upper.boltzmann();
    if (upper[id]) out.upper_births[id] = 1;
  }
  out.coalesced = upper == lower;
  for (std::size_t i = 0; i < n; ++i) {
    if (lower[i]) out.sample.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

Configuration collect(const std::vector<Particle>& particles, const std::vector<std::uint32_t>& ids) {
  std::vector<Particle> out;
  out.reserve(ids.size());
  for (const auto id : ids) out.push_back(particles[id]);
  return Configuration(std::move(out));
}

}  // namespace

Configuration relevant_boundary(const ModelSpec& model, const Window& w, const Configuration& chi) {
  const double range = model.interaction_range();
  std::vector<Particle> kept;
  for (const auto& p : chi) {
    if (w.contains(p.center())) throw GeometryError("boundary configuration must be supported outside the window");
    if (model.interacting() && w.distance_to(p.center()) <= range) kept.push_back(p);
  }
  return Configuration(std::move(kept));
}

Configuration sample_poisson(const ModelSpec& model, const Window& w, RngStream rng) { return draw_poisson(model, w, rng); }

Configuration sample_poisson_in_ball(const ModelSpec& model, double radius, RngStream rng) {
  const double volume = unit_ball_volume(model.dim) * std::pow(radius, model.dim);
  const std::uint64_t n = rng.poisson(model.lambda * volume);
  std::vector<Particle> out;
  out.reserve(n);
  while (out.size() < n) {
    Point p = Point::Zero();
    for (int a = 0; a < model.dim; ++a) p[a] = rng.uniform(-radius, radius);
    if (p.norm() > radius) continue;
    out.push_back(model.draw_particle(p, rng));
  }
  return Configuration(std::move(out));
}

RejectionResult sample_gibbs_rejection(const ModelSpec& model, const Window& w, const Configuration& chi, RngStream rng,
                                       const SamplerOptions& options) {
  const Configuration boundary = relevant_boundary(model, w, chi);
  double weight_sum = 0.0;
  for (std::uint64_t proposal = 1; proposal <= options.proposal_budget; ++proposal) {
    Configuration candidate = draw_poisson(model, w, rng);
    const double weight = hamiltonian(model, candidate, boundary).boltzmann();
    weight_sum += weight;
    if (rng.uniform() < weight) return {std::move(candidate), proposal};
  }
  const double rate = weight_sum / static_cast<double>(options.proposal_budget);
  throw SamplerBudgetError("rejection sampler: proposal budget of " + std::to_string(options.proposal_budget) +
                               " exceeded (mean acceptance " + std::to_string(rate) + ")",
                           rate);
}

CftpResult sample_gibbs_cftp(const ModelSpec& model, const Window& w, const Configuration& chi, RngStream rng,
                             const SamplerOptions& options) {
  const Configuration boundary = relevant_boundary(model, w, chi);
  DominatingHistory history(model, w, rng);
  InteractionTable table;
  double horizon = options.initial_horizon;
  for (int doubling = 0; doubling <= options.max_doublings; ++doubling, horizon *= 2.0) {
    history.extend_to(horizon);
    table.rebuild(model, history.particles());
    const auto energies = boundary_energies(model, history.particles(), boundary);
    SweepResult result = sweep(history, table, energies);
    if (result.coalesced) {
      std::size_t births = 0;
      for (const auto& e : history.events()) births += e.birth ? 1 : 0;
      return {collect(history.particles(), result.sample), horizon, doubling, births};
    }
  }
  throw SamplerBudgetError("cftp: no coalescence within horizon " + std::to_string(horizon / 2.0) +
                               " (activity may be close to critical)",
                           horizon / 2.0);
}

Configuration sample_gibbs(const ModelSpec& model, const Window& w, const Configuration& chi, RngStream rng,
                           const SamplerOptions& options) {
  if (!model.interacting()) {
    relevant_boundary(model, w, chi);
    return draw_poisson(model, w, rng);
  }
  return sample_gibbs_cftp(model, w, chi, rng, options).sample;
}

CouplingOutcome disagreement_couple(const ModelSpec& model, const Window& w, const Configuration& chi_a,
                                    const Configuration& chi_b, RngStream rng, const SamplerOptions& options) {
  const Configuration boundary_a = relevant_boundary(model, w, chi_a);
  const Configuration boundary_b = relevant_boundary(model, w, chi_b);
  DominatingHistory history(model, w, rng);
  InteractionTable table;
  double horizon = options.initial_horizon;
  for (int doubling = 0; doubling <= options.max_doublings; ++doubling, horizon *= 2.0) {
    history.extend_to(horizon);
    table.rebuild(model, history.particles());
    const SweepResult a = sweep(history, table, boundary_energies(model, history.particles(), boundary_a));
    if (!a.coalesced) continue;
    const SweepResult b = sweep(history, table, boundary_energies(model, history.particles(), boundary_b));
    if (!b.coalesced) continue;

    CouplingOutcome out;
    std::vector<std::uint32_t> dominating;
    for (std::size_t i = 0; i < history.particles().size(); ++i) {
      if (a.upper_births[i] || b.upper_births[i]) dominating.push_back(static_cast<std::uint32_t>(i));
    }
    out.dominating = collect(history.particles(), dominating);
    out.sample_a = collect(history.particles(), a.sample);
    out.sample_b = collect(history.particles(), b.sample);
    out.boundary_diff = symmetric_difference(chi_a, chi_b);
    out.disagreement = symmetric_difference(out.sample_a, out.sample_b);
    out.horizon = horizon;
    return out;
  }
  throw SamplerBudgetError("disagreement coupling: no coalescence within horizon " + std::to_string(horizon / 2.0), horizon / 2.0);
}

}  // namespace gibbsperc

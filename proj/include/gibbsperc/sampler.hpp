#pragma once

#include "gibbsperc/model.hpp"
#include "gibbsperc/particles.hpp"
#include "gibbsperc/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gibbsperc {

struct SamplerOptions {
  /// Rejection sampler: maximum number of Poisson proposals.
  std::uint64_t proposal_budget = 1'000'000;
  /// CFTP: first backward horizon; doubled until coalescence.
  double initial_horizon = 1.0;
  int max_doublings = 16;
};

/// Raised when a sampler exhausts its proposal or horizon budget.
class SamplerBudgetError : public std::runtime_error {
 public:
  SamplerBudgetError(const std::string& what, double acceptance_estimate)
      : std::runtime_error(what), acceptance_estimate_(acceptance_estimate) {}
  /// Mean acceptance probability over the proposals made (rejection), or the
  /// final horizon reached (CFTP).
  double acceptance_estimate() const { return acceptance_estimate_; }

 private:
  double acceptance_estimate_;
};

struct RejectionResult {
  Configuration sample;
  std::uint64_t proposals = 0;
};

struct CftpResult {
  Configuration sample;
  double horizon = 0.0;
  int doublings = 0;
  std::size_t births = 0;
};

struct CouplingOutcome {
  /// Births of the dominating free birth-death process on W retained by the
  /// upper sandwich process of either boundary condition.
  Configuration dominating;
  Configuration sample_a;
  Configuration sample_b;
  Configuration boundary_diff;
  Configuration disagreement;
  double horizon = 0.0;
};

/// Poisson process with intensity lambda * mu restricted to centres in W.
Configuration sample_poisson(const ModelSpec& model, const Window& w, RngStream rng);
/// Same, with centres uniform in the ball B(0, radius).
Configuration sample_poisson_in_ball(const ModelSpec& model, double radius, RngStream rng);

/// Exact draw from the Gibbs law on W given the boundary chi: Poisson
/// proposals accepted with probability exp(-H(proposal, chi)).
RejectionResult sample_gibbs_rejection(const ModelSpec& model, const Window& w, const Configuration& chi, RngStream rng,
                                       const SamplerOptions& options = {});

/// Exact draw by dominated coupling from the past over the spatial
/// birth-death process with birth rate lambda mu on W and unit death rate.
CftpResult sample_gibbs_cftp(const ModelSpec& model, const Window& w, const Configuration& chi, RngStream rng,
                             const SamplerOptions& options = {});

/// Two CFTP runs sharing all birth, death and retention randomness, differing
/// only in the boundary condition.
CouplingOutcome disagreement_couple(const ModelSpec& model, const Window& w, const Configuration& chi_a,
                                    const Configuration& chi_b, RngStream rng, const SamplerOptions& options = {});

/// Gibbs draw used by the experiments: Poisson for non-interacting models,
/// dominated CFTP otherwise.
Configuration sample_gibbs(const ModelSpec& model, const Window& w, const Configuration& chi, RngStream rng,
                           const SamplerOptions& options = {});

/// Boundary particles whose centres lie within the interaction range of W;
/// throws GeometryError if chi has a centre inside W.
Configuration relevant_boundary(const ModelSpec& model, const Window& w, const Configuration& chi);

}  // namespace gibbsperc

#pragma once

#include "gibbsperc/inference.hpp"
#include "gibbsperc/model.hpp"
#include "gibbsperc/ustat.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gibbsperc {

enum class ExperimentKind { Sample, Couple, Percolate, Decay, Decorrelate, UstatClt, MomentCheck, FmeCheck, DominationCheck };
enum class OutputFormat { Json, Csv };
enum class SamplerKind { Cftp, Rejection };

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);
const std::vector<ExperimentKind>& all_experiment_kinds();

struct ExperimentConfig {
  ModelSpec model;
  std::optional<UStatSpec> ustat;
  ExperimentKind experiment = ExperimentKind::Sample;
  /// Window volumes n.
  std::vector<double> windows{9.0};
  std::uint64_t replicates = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  SamplerKind sampler = SamplerKind::Cftp;
  double padding = 0.0;
  std::uint64_t proposal_budget = 1'000'000;
  int max_doublings = 16;
  /// percolate: annulus radii.
  std::vector<double> radii;
  /// decay: activity grid.
  std::vector<double> lambdas;
  /// decorrelate: Hausdorff-distance bin edges.
  std::vector<double> bins;
  std::uint64_t mass_samples = 2'000'000;
  /// moment-check: centre boxes.
  std::vector<CenterBox> regions;
  /// couple: boundary conditions chi_1 and chi_2.
  std::vector<Particle> boundary_a;
  std::vector<Particle> boundary_b;
  /// domination-check: DKW level.
  double alpha = 0.001;
  std::string output_path;
  OutputFormat format = OutputFormat::Json;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct ConfigError {
  /// 1-based line of the offending entry, 0 when not tied to a line.
  int line = 0;
  std::string field;
  std::string message;

  std::string to_string() const;
};

/// Thrown by parse_config with every problem found in the text.
class ConfigErrors : public std::runtime_error {
 public:
  explicit ConfigErrors(std::vector<ConfigError> errors);
  const std::vector<ConfigError>& errors() const { return errors_; }

 private:
  std::vector<ConfigError> errors_;
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<ConfigError> errors;
  bool ok() const { return config.has_value(); }
};

/// Sectioned key = value format ([model], [ustat], [experiment], [output]);
/// '#' starts a comment. Unknown keys are errors.
ParseResult try_parse_config(std::string_view text);
ExperimentConfig parse_config(std::string_view text);
std::string serialize_config(const ExperimentConfig& config);

/// Checks that do not depend on the text (model admissibility, experiment
/// requirements). Returned errors carry no line numbers.
std::vector<ConfigError> validate_config(const ExperimentConfig& config);

/// Closest candidate within edit distance 2, or empty.
std::string near_miss(std::string_view word, const std::vector<std::string>& candidates);

}  // namespace gibbsperc

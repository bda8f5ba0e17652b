#pragma once

#include "gibbsperc/config.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gibbsperc {

inline constexpr std::string_view kVersion = "0.1.0";

nlohmann::json to_json(const Particle& p);
Particle particle_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Configuration& xi);
Configuration configuration_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModelSpec& model);
nlohmann::json to_json(const ExperimentConfig& config);

/// Rectangular numeric result table shared by the JSON and CSV outputs.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunRecord {
  nlohmann::json config;
  std::string version{kVersion};
  double wall_time_seconds = 0.0;
  /// Deterministic given (config, seed).
  nlohmann::json payload;
  Table table;
  nlohmann::json diagnostics;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Raised by run() when an experiment cannot complete; carries the
/// experiment context in its message.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, bool budget) : std::runtime_error(what), budget_(budget) {}
  bool budget_exhausted() const { return budget_; }

 private:
  bool budget_;
};

/// Validates, dispatches to the configured experiment and returns the record.
/// Throws ConfigErrors for invalid configurations and RunError on failure.
RunRecord run(const ExperimentConfig& config);

std::string render_csv(const Table& table);
std::string render(const RunRecord& record, OutputFormat format);
/// Renders to config.output_path, or returns the text when the path is empty.
std::string write_output(const RunRecord& record, const ExperimentConfig& config);

/// Root stream for window `window` of an experiment.
RngStream experiment_stream(const ExperimentConfig& config, std::uint64_t window);

}  // namespace gibbsperc

#include "gibbsperc/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kBudget = 3 };

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicates;
  std::optional<int> threads;
  std::string out;
  std::string format;
};

void print_errors(const std::vector<gibbsperc::ConfigError>& errors) {
  for (const auto& e : errors) std::cerr << "config error: " << e.to_string() << "\n";
}

int execute(gibbsperc::ExperimentKind kind, const Flags& flags) {
  using namespace gibbsperc;
  ExperimentConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) {
      std::cerr << "cannot read config file '" << flags.config_path << "'\n";
      return kConfig;
    }
    std::stringstream text;
    text << in.rdbuf();
    auto parsed = try_parse_config(text.str());
    if (!parsed.ok()) {
      print_errors(parsed.errors);
      return kConfig;
    }
    config = std::move(*parsed.config);
  }
  config.experiment = kind;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.replicates) config.replicates = *flags.replicates;
  if (flags.threads) config.threads = *flags.threads;
  if (!flags.out.empty()) config.output_path = flags.out;
  if (flags.format == "csv") config.format = OutputFormat::Csv;
  if (flags.format == "json") config.format = OutputFormat::Json;

  try {
    const RunRecord record = run(config);
    for (const auto& w : record.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << write_output(record, config);
    return kOk;
  } catch (const ConfigErrors& e) {
    print_errors(e.errors());
    return kConfig;
  } catch (const RunError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.budget_exhausted() ? kBudget : kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs particle process experiments"};
  app.set_version_flag("--version", std::string(gibbsperc::kVersion));
  app.require_subcommand(1);

  Flags flags;
  for (auto kind : gibbsperc::all_experiment_kinds()) {
    auto* sub = app.add_subcommand(std::string(gibbsperc::to_string(kind)), "run the " + std::string(gibbsperc::to_string(kind)) + " experiment");
    sub->add_option("--config", flags.config_path, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "root seed, overrides the config");
    sub->add_option("--replicates", flags.replicates, "replicate count")->check(CLI::PositiveNumber);
    sub->add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out, "output file, stdout when omitted");
    sub->add_option("--format", flags.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  for (auto kind : gibbsperc::all_experiment_kinds()) {
    if (app.got_subcommand(std::string(gibbsperc::to_string(kind)))) return execute(kind, flags);
  }
  return kFailure;
}

#include "gibbsperc/config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

namespace gibbsperc {
namespace {

struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"model",
       {"dimension", "lambda", "radius", "shape", "orientation", "angles", "weights", "potential", "a2", "table_edges",
        "table_values"}},
      {"ustat", {"kernel", "order", "radius"}},
      {"experiment",
       {"kind", "windows", "replicates", "seed", "threads", "sampler", "padding", "proposal_budget", "max_doublings", "radii",
        "lambdas", "bins", "mass_samples", "regions", "boundary_a", "boundary_b", "alpha"}},
      {"output", {"path", "format"}},
  };
  return keys;
}

constexpr std::array<std::pair<ExperimentKind, std::string_view>, 9> kKindNames = {{
    {ExperimentKind::Sample, "sample"},
    {ExperimentKind::Couple, "couple"},
    {ExperimentKind::Percolate, "percolate"},
    {ExperimentKind::Decay, "decay"},
    {ExperimentKind::Decorrelate, "decorrelate"},
    {ExperimentKind::UstatClt, "ustat-clt"},
    {ExperimentKind::MomentCheck, "moment-check"},
    {ExperimentKind::FmeCheck, "fme-check"},
    {ExperimentKind::DominationCheck, "domination-check"},
}};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::optional<double> to_double(const std::string& token) {
  // Accepts plain numbers and the forms pi, pi/k, x*pi, x*pi/k.
  const auto pi_at = token.find("pi");
  if (pi_at != std::string::npos) {
    double factor = 1.0;
    if (pi_at > 0) {
      if (token[pi_at - 1] != '*') return std::nullopt;
      const auto f = to_double(token.substr(0, pi_at - 1));
      if (!f) return std::nullopt;
      factor = *f;
    }
    double value = factor * std::numbers::pi;
    const std::string rest = token.substr(pi_at + 2);
    if (rest.empty()) return value;
    if (rest[0] != '/') return std::nullopt;
    const auto d = to_double(rest.substr(1));
    if (!d || *d == 0.0) return std::nullopt;
    return value / *d;
  }
  if (token.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_uint(const std::string& token) {
  if (token.empty() || token[0] == '-' || token[0] == '+') return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (end != token.c_str() + token.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += format_double(xs[i]);
  }
  return out;
}

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Interprets the raw entries of one parse; collects errors instead of throwing.
class Reader {
 public:
  Reader(std::map<std::string, Section> sections, std::vector<ConfigError>& errors)
      : sections_(std::move(sections)), errors_(errors) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }
  bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

  void error(const std::string& section, const std::string& key, const std::string& message) {
    const Entry* e = find(section, key);
    errors_.push_back({e ? e->line : 0, section + "." + key, message});
  }

  template <class T, class Fn>
  void read(const std::string& section, const std::string& key, T& target, Fn&& convert, const std::string& expected) {
    const Entry* e = find(section, key);
    if (!e) return;
    if (auto v = convert(e->value)) {
      target = *v;
    } else {
      error(section, key, "expected " + expected + ", got '" + e->value + "'");
    }
  }

  void read_double(const std::string& section, const std::string& key, double& target) {
    read(section, key, target, to_double, "a number");
  }
  void read_uint(const std::string& section, const std::string& key, std::uint64_t& target) {
    read(section, key, target, to_uint, "a non-negative integer");
  }
  void read_int(const std::string& section, const std::string& key, int& target) {
    std::uint64_t v = static_cast<std::uint64_t>(std::max(0, target));
    const Entry* e = find(section, key);
    if (!e) return;
    const auto parsed = to_uint(e->value);
    if (!parsed || *parsed > 1'000'000) {
      error(section, key, "expected a small non-negative integer, got '" + e->value + "'");
      return;
    }
    v = *parsed;
    target = static_cast<int>(v);
  }
  void read_list(const std::string& section, const std::string& key, std::vector<double>& target) {
    const Entry* e = find(section, key);
    if (!e) return;
    std::vector<double> out;
    for (const auto& t : tokens(e->value)) {
      const auto v = to_double(t);
      if (!v) {
        error(section, key, "expected a list of numbers, bad entry '" + t + "'");
        return;
      }
      out.push_back(*v);
    }
    target = std::move(out);
  }

 private:
  std::map<std::string, Section> sections_;
  std::vector<ConfigError>& errors_;
};

std::optional<Particle> parse_particle(const std::string& text, int dim, std::string& why) {
  const auto t = tokens(text);
  if (t.empty()) {
    why = "empty particle";
    return std::nullopt;
  }
  std::vector<double> v;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const auto x = to_double(t[i]);
    if (!x) {
      why = "bad number '" + t[i] + "'";
      return std::nullopt;
    }
    v.push_back(*x);
  }
  try {
    if (t[0] == "ball") {
      if (v.size() != static_cast<std::size_t>(dim) + 1) {
        why = "ball needs " + std::to_string(dim) + " coordinates and a radius";
        return std::nullopt;
      }
      Point c = Point::Zero();
      for (int a = 0; a < dim; ++a) c[a] = v[a];
      return Particle::ball(dim, c, v.back());
    }
    if (t[0] == "segment") {
      if (v.size() != 4) {
        why = "segment needs x y orientation half_length";
        return std::nullopt;
      }
      return Particle::segment(v[0], v[1], v[2], v[3]);
    }
  } catch (const GeometryError& e) {
    why = e.what();
    return std::nullopt;
  }
  why = "unknown particle shape '" + t[0] + "' (ball|segment)";
  return std::nullopt;
}

std::string format_particle(const Particle& p) {
  std::string out = p.shape() == Shape::Ball ? "ball" : "segment";
  if (p.shape() == Shape::Ball) {
    for (int a = 0; a < p.dim(); ++a) out += " " + format_double(p.center()[a]);
    out += " " + format_double(p.radius());
  } else {
    out += " " + format_double(p.center()[0]) + " " + format_double(p.center()[1]) + " " + format_double(p.orientation()) +
           " " + format_double(p.half_length());
  }
  return out;
}

void read_particles(Reader& r, const std::string& key, int dim, std::vector<Particle>& target) {
  const Entry* e = r.find("experiment", key);
  if (!e) return;
  std::vector<Particle> out;
  for (const auto& item : split_list(e->value, ';')) {
    if (item.empty()) continue;
    std::string why;
    const auto p = parse_particle(item, dim, why);
    if (!p) {
      r.error("experiment", key, "bad particle '" + item + "': " + why);
      return;
    }
    out.push_back(*p);
  }
  target = std::move(out);
}

void read_regions(Reader& r, int dim, std::vector<CenterBox>& target) {
  const Entry* e = r.find("experiment", "regions");
  if (!e) return;
  std::vector<CenterBox> out;
  for (const auto& item : split_list(e->value, ';')) {
    if (item.empty()) continue;
    const auto t = tokens(item);
    if (t.size() != 2 * static_cast<std::size_t>(dim)) {
      r.error("experiment", "regions", "each region needs " + std::to_string(2 * dim) + " numbers (lower corner, upper corner)");
      return;
    }
    CenterBox box;
    for (int a = 0; a < 2 * dim; ++a) {
      const auto v = to_double(t[a]);
      if (!v) {
        r.error("experiment", "regions", "bad number '" + t[a] + "'");
        return;
      }
      (a < dim ? box.lo[a] : box.hi[a - dim]) = *v;
    }
    out.push_back(box);
  }
  target = std::move(out);
}

void read_model(Reader& r, ModelSpec& m) {
  r.read_int("model", "dimension", m.dim);
  r.read_double("model", "lambda", m.lambda);
  r.read_double("model", "radius", m.R);
  if (const Entry* e = r.find("model", "shape")) {
    if (e->value == "ball") m.law.shape = Shape::Ball;
    else if (e->value == "segment") m.law.shape = Shape::Segment;
    else r.error("model", "shape", "expected ball|segment, got '" + e->value + "'");
  }
  bool discrete = false;
  if (const Entry* e = r.find("model", "orientation")) {
    if (e->value == "discrete") discrete = true;
    else if (e->value != "uniform") r.error("model", "orientation", "expected uniform|discrete, got '" + e->value + "'");
  }
  if (discrete) {
    r.read_list("model", "angles", m.law.orientation.angles);
    r.read_list("model", "weights", m.law.orientation.weights);
    if (!r.find("model", "angles")) r.error("model", "orientation", "discrete orientation requires 'angles'");
    if (!r.find("model", "weights")) m.law.orientation.weights.assign(m.law.orientation.angles.size(), 1.0);
  } else {
    if (r.find("model", "angles")) r.error("model", "angles", "only allowed with orientation = discrete");
    if (r.find("model", "weights")) r.error("model", "weights", "only allowed with orientation = discrete");
  }

  std::string potential = "none";
  if (const Entry* e = r.find("model", "potential")) potential = e->value;
  const bool has_a2 = r.find("model", "a2") != nullptr;
  const bool has_table = r.find("model", "table_edges") || r.find("model", "table_values");
  if (potential == "none") {
    m.potential = NoInteraction{};
  } else if (potential == "hardcore") {
    m.potential = Hardcore{};
  } else if (potential == "facet") {
    Facet f;
    if (!has_a2) r.error("model", "potential", "facet potential requires 'a2'");
    r.read_double("model", "a2", f.a2);
    m.potential = f;
  } else if (potential == "pair_table") {
    PairTable t;
    if (!r.find("model", "table_edges") || !r.find("model", "table_values"))
      r.error("model", "potential", "pair_table potential requires 'table_edges' and 'table_values'");
    r.read_list("model", "table_edges", t.edges);
    r.read_list("model", "table_values", t.values);
    m.potential = t;
  } else {
    r.error("model", "potential", "expected none|hardcore|facet|pair_table, got '" + potential + "'");
  }
  if (has_a2 && potential != "facet") r.error("model", "a2", "only allowed with potential = facet");
  if (has_table && potential != "pair_table") r.error("model", "table_edges", "only allowed with potential = pair_table");
}

std::optional<UStatSpec> read_ustat(Reader& r, const ModelSpec& m) {
  if (!r.has_section("ustat")) return std::nullopt;
  const Entry* kernel = r.find("ustat", "kernel");
  if (!kernel) {
    r.error("ustat", "kernel", "missing kernel (facet_g|zero|one|close_pair|tent)");
    return std::nullopt;
  }
  std::uint64_t order = 2;
  double radius = 1.0;
  r.read_uint("ustat", "order", order);
  r.read_double("ustat", "radius", radius);
  const std::string& k = kernel->value;
  try {
    if (k == "facet_g") return UStatSpec::facet_g(static_cast<int>(order), m.R);
    if (k == "zero") {
      if (order < 1 || order > 8) throw std::invalid_argument("order must be in 1..8");
      return UStatSpec::zero(static_cast<int>(order));
    }
    if (k == "one") return UStatSpec::one();
    if (k == "close_pair") return UStatSpec::close_pair(radius);
    if (k == "tent") return UStatSpec::tent(radius);
  } catch (const std::invalid_argument& e) {
    r.error("ustat", "order", e.what());
    return std::nullopt;
  }
  r.error("ustat", "kernel", "expected facet_g|zero|one|close_pair|tent, got '" + k + "'");
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiment_kinds() {
  static const std::vector<ExperimentKind> kinds = [] {
    std::vector<ExperimentKind> out;
    for (const auto& [k, name] : kKindNames) out.push_back(k);
    return out;
  }();
  return kinds;
}

std::string ConfigError::to_string() const {
  std::string out;
  if (line > 0) out += "line " + std::to_string(line) + ": ";
  if (!field.empty()) out += field + ": ";
  return out + message;
}

namespace {
std::string join_errors(const std::vector<ConfigError>& errors) {
  std::string out = "invalid configuration";
  for (const auto& e : errors) out += "\n  " + e.to_string();
  return out;
}
}  // namespace

ConfigErrors::ConfigErrors(std::vector<ConfigError> errors) : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

std::string near_miss(std::string_view word, const std::vector<std::string>& candidates) {
  std::string best;
  int best_d = 3;
  for (const auto& c : candidates) {
    const int d = levenshtein(word, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

ParseResult try_parse_config(std::string_view text) {
  std::vector<ConfigError> errors;
  std::map<std::string, Section> sections;
  std::string current;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  const auto& keys = known_keys();
  std::vector<std::string> section_names;
  for (const auto& [name, list] : keys) section_names.push_back(name);

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back({line_no, "", "malformed section header '" + line + "'"});
        continue;
      }
      current = trim(line.substr(1, line.size() - 2));
      if (!keys.count(current)) {
        std::string msg = "unknown section [" + current + "]";
        if (const auto s = near_miss(current, section_names); !s.empty()) msg += " (did you mean [" + s + "]?)";
        errors.push_back({line_no, current, msg});
      }
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back({line_no, "", "expected 'key = value', got '" + line + "'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (current.empty()) {
      errors.push_back({line_no, key, "key outside of any section"});
      continue;
    }
    if (!keys.count(current)) continue;
    const auto& allowed = keys.at(current);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      std::string msg = "unknown key '" + key + "'";
      if (const auto s = near_miss(key, allowed); !s.empty()) msg += " (did you mean '" + s + "'?)";
      errors.push_back({line_no, current + "." + key, msg});
      continue;
    }
    if (sections[current].count(key)) {
      errors.push_back({line_no, current + "." + key, "duplicate key (first set on line " + std::to_string(sections[current][key].line) + ")"});
      continue;
    }
    sections[current][key] = {value, line_no};
  }

  Reader r(sections, errors);
  ExperimentConfig cfg;
  read_model(r, cfg.model);
  cfg.ustat = read_ustat(r, cfg.model);

  if (const Entry* e = r.find("experiment", "kind")) {
    if (const auto k = parse_experiment_kind(e->value)) {
      cfg.experiment = *k;
    } else {
      std::vector<std::string> names;
      for (const auto& [k2, n] : kKindNames) names.emplace_back(n);
      std::string msg = "unknown experiment '" + e->value + "'";
      if (const auto s = near_miss(e->value, names); !s.empty()) msg += " (did you mean '" + s + "'?)";
      r.error("experiment", "kind", msg);
    }
  }
  r.read_list("experiment", "windows", cfg.windows);
  r.read_uint("experiment", "replicates", cfg.replicates);
  r.read_uint("experiment", "seed", cfg.seed);
  r.read_int("experiment", "threads", cfg.threads);
  if (const Entry* e = r.find("experiment", "sampler")) {
    if (e->value == "cftp") cfg.sampler = SamplerKind::Cftp;
    else if (e->value == "rejection") cfg.sampler = SamplerKind::Rejection;
    else r.error("experiment", "sampler", "expected cftp|rejection, got '" + e->value + "'");
  }
  r.read_double("experiment", "padding", cfg.padding);
  r.read_uint("experiment", "proposal_budget", cfg.proposal_budget);
  r.read_int("experiment", "max_doublings", cfg.max_doublings);
  r.read_list("experiment", "radii", cfg.radii);
  r.read_list("experiment", "lambdas", cfg.lambdas);
  r.read_list("experiment", "bins", cfg.bins);
  r.read_uint("experiment", "mass_samples", cfg.mass_samples);
  r.read_double("experiment", "alpha", cfg.alpha);
  const int dim = cfg.model.dim >= 1 && cfg.model.dim <= 3 ? cfg.model.dim : 2;
  read_regions(r, dim, cfg.regions);
  read_particles(r, "boundary_a", dim, cfg.boundary_a);
  read_particles(r, "boundary_b", dim, cfg.boundary_b);

  if (const Entry* e = r.find("output", "path")) cfg.output_path = e->value;
  if (const Entry* e = r.find("output", "format")) {
    if (e->value == "json") cfg.format = OutputFormat::Json;
    else if (e->value == "csv") cfg.format = OutputFormat::Csv;
    else r.error("output", "format", "expected json|csv, got '" + e->value + "'");
  }

  // Semantic checks, annotated with the line of the field when it was given.
  for (auto e : validate_config(cfg)) {
    const auto dot = e.field.find('.');
    if (dot != std::string::npos) {
      if (const Entry* entry = r.find(e.field.substr(0, dot), e.field.substr(dot + 1))) e.line = entry->line;
    }
    errors.push_back(std::move(e));
  }

  ParseResult out;
  if (errors.empty()) out.config = std::move(cfg);
  std::stable_sort(errors.begin(), errors.end(), [](const ConfigError& a, const ConfigError& b) { return a.line < b.line; });
  out.errors = std::move(errors);
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  auto result = try_parse_config(text);
  if (!result.ok()) throw ConfigErrors(std::move(result.errors));
  return std::move(*result.config);
}

std::vector<ConfigError> validate_config(const ExperimentConfig& c) {
  std::vector<ConfigError> errors;
  auto add = [&](std::string field, std::string message) { errors.push_back({0, std::move(field), std::move(message)}); };

  // The Boolean-model experiments are meaningful at zero activity.
  const bool allow_zero_lambda =
      (c.experiment == ExperimentKind::Percolate || c.experiment == ExperimentKind::Decay) && c.model.lambda == 0.0;
  for (const auto& msg : validate(c.model).errors) {
    if (allow_zero_lambda && msg.rfind("model.lambda:", 0) == 0) continue;
    const auto colon = msg.find(':');
    add(msg.substr(0, colon), trim(msg.substr(colon + 1)));
  }
  if (std::holds_alternative<PairCallback>(c.model.potential)) add("model.potential", "callback potentials cannot be configured from text");

  if (c.replicates < 1) add("experiment.replicates", "must be at least 1");
  if (c.threads < 1) add("experiment.threads", "must be at least 1");
  if (c.windows.empty()) add("experiment.windows", "at least one window volume is required");
  for (double n : c.windows) {
    if (!(n > 0.0) || !std::isfinite(n)) add("experiment.windows", "window volumes must be positive and finite");
  }
  if (!(c.padding >= 0.0)) add("experiment.padding", "must be non-negative");
  if (c.proposal_budget < 1) add("experiment.proposal_budget", "must be at least 1");

  const int dim = c.model.dim;
  for (const auto* list : {&c.boundary_a, &c.boundary_b}) {
    for (const auto& p : *list) {
      if (p.dim() != dim) add(list == &c.boundary_a ? "experiment.boundary_a" : "experiment.boundary_b", "particle dimension differs from the model");
    }
  }
  auto increasing = [](const std::vector<double>& xs) {
    for (std::size_t i = 1; i < xs.size(); ++i) {
      if (!(xs[i] > xs[i - 1])) return false;
    }
    return true;
  };

  switch (c.experiment) {
    case ExperimentKind::Sample:
    case ExperimentKind::Couple:
      break;
    case ExperimentKind::Percolate:
      if (c.radii.empty()) add("experiment.radii", "percolate requires a list of radii");
      if (!increasing(c.radii)) add("experiment.radii", "radii must be strictly increasing");
      for (double s : c.radii) {
        if (!(s > 0.0)) add("experiment.radii", "radii must be positive");
      }
      break;
    case ExperimentKind::Decay:
      if (c.lambdas.empty()) add("experiment.lambdas", "decay requires a list of activities");
      for (double l : c.lambdas) {
        if (!(l >= 0.0) || !std::isfinite(l)) add("experiment.lambdas", "activities must be non-negative and finite");
      }
      break;
    case ExperimentKind::Decorrelate:
      if (c.bins.size() < 2) add("experiment.bins", "decorrelate requires at least two bin edges");
      if (!increasing(c.bins)) add("experiment.bins", "bin edges must be strictly increasing");
      if (!c.bins.empty() && c.bins.front() < 0.0) add("experiment.bins", "bin edges must be non-negative");
      if (c.replicates < 2) add("experiment.replicates", "decorrelate needs at least 2 replicates");
      if (c.mass_samples < 1) add("experiment.mass_samples", "must be at least 1");
      break;
    case ExperimentKind::UstatClt:
    case ExperimentKind::FmeCheck:
      if (!c.ustat) add("ustat.kernel", std::string(to_string(c.experiment)) + " requires a [ustat] section");
      if (c.experiment == ExperimentKind::UstatClt && c.replicates < 2) add("experiment.replicates", "ustat-clt needs at least 2 replicates");
      break;
    case ExperimentKind::MomentCheck:
      if (c.regions.empty()) add("experiment.regions", "moment-check requires at least one region");
      if (c.replicates < 2) add("experiment.replicates", "moment-check needs at least 2 replicates");
      break;
    case ExperimentKind::DominationCheck:
      if (c.replicates < 2) add("experiment.replicates", "domination-check needs at least 2 replicates");
      if (!(c.alpha > 0.0 && c.alpha < 1.0)) add("experiment.alpha", "must lie in (0, 1)");
      break;
  }
  if (c.ustat && c.ustat->kind == UStatSpec::Kind::FacetG && c.model.law.shape != Shape::Segment) {
    add("ustat.kernel", "facet_g requires segment particles");
  }
  return errors;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto& m = c.model;
  out << "[model]\n";
  out << "dimension = " << m.dim << "\n";
  out << "lambda = " << format_double(m.lambda) << "\n";
  out << "radius = " << format_double(m.R) << "\n";
  out << "shape = " << (m.law.shape == Shape::Ball ? "ball" : "segment") << "\n";
  if (m.law.orientation.uniform()) {
    out << "orientation = uniform\n";
  } else {
    out << "orientation = discrete\n";
    out << "angles = " << join(m.law.orientation.angles) << "\n";
    out << "weights = " << join(m.law.orientation.weights) << "\n";
  }
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, NoInteraction>) {
          out << "potential = none\n";
        } else if constexpr (std::is_same_v<T, Hardcore>) {
          out << "potential = hardcore\n";
        } else if constexpr (std::is_same_v<T, Facet>) {
          out << "potential = facet\na2 = " << format_double(p.a2) << "\n";
        } else if constexpr (std::is_same_v<T, PairTable>) {
          out << "potential = pair_table\ntable_edges = " << join(p.edges) << "\ntable_values = " << join(p.values) << "\n";
        } else {
          out << "potential = callback\n";
        }
      },
      m.potential);

  if (c.ustat) {
    out << "\n[ustat]\n";
    out << "kernel = " << c.ustat->name() << "\n";
    out << "order = " << c.ustat->order << "\n";
    if (c.ustat->kind == UStatSpec::Kind::ClosePair || c.ustat->kind == UStatSpec::Kind::Tent) {
      out << "radius = " << format_double(c.ustat->radius) << "\n";
    }
  }

  out << "\n[experiment]\n";
  out << "kind = " << to_string(c.experiment) << "\n";
  out << "windows = " << join(c.windows) << "\n";
  out << "replicates = " << c.replicates << "\n";
  out << "seed = " << c.seed << "\n";
  out << "threads = " << c.threads << "\n";
  out << "sampler = " << (c.sampler == SamplerKind::Cftp ? "cftp" : "rejection") << "\n";
  out << "padding = " << format_double(c.padding) << "\n";
  out << "proposal_budget = " << c.proposal_budget << "\n";
  out << "max_doublings = " << c.max_doublings << "\n";
  if (!c.radii.empty()) out << "radii = " << join(c.radii) << "\n";
  if (!c.lambdas.empty()) out << "lambdas = " << join(c.lambdas) << "\n";
  if (!c.bins.empty()) out << "bins = " << join(c.bins) << "\n";
  out << "mass_samples = " << c.mass_samples << "\n";
  if (!c.regions.empty()) {
    out << "regions = ";
    for (std::size_t i = 0; i < c.regions.size(); ++i) {
      if (i) out << "; ";
      std::vector<double> v;
      for (int a = 0; a < m.dim; ++a) v.push_back(c.regions[i].lo[a]);
      for (int a = 0; a < m.dim; ++a) v.push_back(c.regions[i].hi[a]);
      out << join(v, " ");
    }
    out << "\n";
  }
  for (const auto& [key, list] : {std::pair{"boundary_a", &c.boundary_a}, std::pair{"boundary_b", &c.boundary_b}}) {
    if (list->empty()) continue;
    out << key << " = ";
    for (std::size_t i = 0; i < list->size(); ++i) out << (i ? "; " : "") << format_particle((*list)[i]);
    out << "\n";
  }
  out << "alpha = " << format_double(c.alpha) << "\n";

  out << "\n[output]\n";
  if (!c.output_path.empty()) out << "path = " << c.output_path << "\n";
  out << "format = " << (c.format == OutputFormat::Json ? "json" : "csv") << "\n";
  return out.str();
}

}  // namespace gibbsperc

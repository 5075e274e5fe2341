#include "soft2hard/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "soft2hard/expression.hpp"
#include "soft2hard/rocket.hpp"
#include "soft2hard/spectrum_io.hpp"

namespace soft2hard::cli {

using nlohmann::json;

namespace {

constexpr std::size_t kProfileSamples = 4097;

struct CommandName {
  Command command;
  const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::kRocketSweep, "rocket-sweep"},
    {Command::kHeatModalSweep, "heat-modal-sweep"},
    {Command::kHeatFdSweep, "heat-fd-sweep"},
    {Command::kAdmissibility, "admissibility"},
    {Command::kRateConstants, "rate-constants"},
    {Command::kCompare, "compare"},
};

const std::set<std::string> kKnownKeys{
    "kind", "T",     "target", "initial", "solver", "alpha_grid", "modes", "nx",
    "nt",   "quadrature_points", "theta", "budget", "out", "format", "strict"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, "'" + t + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double number_at(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

int integer_at(const json& j, const std::string& key, int min) {
  if (!j.is_number_integer()) throw ConfigError(key, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min || v > 1'000'000) {
    throw ConfigError(key, "must be between " + std::to_string(min) + " and 1000000");
  }
  return static_cast<int>(v);
}

bool starts_with_rule(const std::string& text, char var, std::string& rest) {
  // Accepts "d_n = expr" and "d_n=expr".
  const std::string prefix = std::string(1, var) + "_n";
  if (text.rfind(prefix, 0) != 0) return false;
  const std::string after = trim(std::string_view(text).substr(prefix.size()));
  if (after.empty() || after.front() != '=') return false;
  rest = trim(std::string_view(after).substr(1));
  return true;
}

Expression parse_expression(const std::string& text, const std::string& key) {
  try {
    return Expression::parse(text);
  } catch (const ExpressionError& e) {
    throw ConfigError(key, e.what());
  }
}

std::vector<double> read_samples(const std::filesystem::path& path, const std::string& key) {
  std::ifstream in(path);
  if (!in) throw ConfigError(key, "cannot open " + path.string());
  std::vector<double> values;
  std::string token;
  while (in >> token) values.push_back(parse_number(token, key));
  if (values.empty()) throw ConfigError(key, path.string() + " holds no samples");
  return values;
}

heat::SineSpectrum spectrum_from(const SpectrumSource& src, int modes, const std::string& key) {
  using Kind = SpectrumSource::Kind;
  const auto n = static_cast<std::size_t>(modes);
  try {
    switch (src.kind) {
      case Kind::kInline:
        return heat::SineSpectrum(src.values).resized(n);
      case Kind::kCoefficientRule: {
        const Expression e = parse_expression(src.text, key);
        return heat::SineSpectrum::from_rule(n, [&](int k) { return e.at_n(k); });
      }
      case Kind::kProfile: {
        const Expression e = parse_expression(src.text, key);
        const auto samples = heat::sample_uniform([&](double x) { return e.at_x(x); },
                                                  std::max(kProfileSamples, 2 * n + 2));
        return heat::sine_coefficients(samples, modes);
      }
      case Kind::kSpectrumFile:
        return heat::read_spectrum(std::filesystem::path(src.text)).spectrum.resized(n);
      case Kind::kSamplesFile:
        return heat::sine_coefficients(read_samples(src.text, key), modes);
      case Kind::kMismatchRule:
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key, e.what());
  }
  throw ConfigError(key, "a mismatch rule is only valid for the target");
}

ProblemKind kind_of(Command c) {
  return c == Command::kRocketSweep ? ProblemKind::kRocket : ProblemKind::kHeat;
}

std::vector<double> parse_thetas(const json& j) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const json& v : j) out.push_back(number_at(v, "theta"));
  } else if (j.is_number()) {
    out.push_back(number_at(j, "theta"));
  } else if (j.is_string()) {
    for (const std::string& part : split(j.get<std::string>(), ',')) {
      out.push_back(parse_number(part, "theta"));
    }
  } else {
    throw ConfigError("theta", "expected a number, list or comma-separated string");
  }
  if (out.empty()) throw ConfigError("theta", "must not be empty");
  for (double t : out) {
    if (t < 0.0 || t > 1.0) throw ConfigError("theta", "values must lie in [0, 1]");
  }
  return out;
}

std::vector<sweep::OutputFormat> parse_formats(const json& j) {
  std::vector<std::string> names;
  if (j.is_string()) {
    names = split(j.get<std::string>(), ',');
  } else if (j.is_array()) {
    for (const json& v : j) {
      if (!v.is_string()) throw ConfigError("format", "expected strings");
      names.push_back(v.get<std::string>());
    }
  } else {
    throw ConfigError("format", "expected \"csv\", \"json\" or \"both\"");
  }
  std::vector<sweep::OutputFormat> out;
  for (const std::string& name : names) {
    if (name == "csv" || name == "both") out.push_back(sweep::OutputFormat::kCsv);
    if (name == "json" || name == "both") out.push_back(sweep::OutputFormat::kJsonSummary);
    if (name != "csv" && name != "json" && name != "both") {
      throw ConfigError("format", "unknown format '" + name + "'");
    }
  }
  if (out.empty()) throw ConfigError("format", "must not be empty");
  return out;
}

sweep::SolverTag default_solver(Command c) {
  switch (c) {
    case Command::kRocketSweep:
      return sweep::SolverTag::kRocketAnalytic;
    case Command::kHeatFdSweep:
      return sweep::SolverTag::kHeatFd;
    default:
      return sweep::SolverTag::kHeatModal;
  }
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& what)
    : std::invalid_argument("config key '" + key + "': " + what), key_(std::move(key)) {}

const char* to_string(Command c) {
  for (const CommandName& n : kCommands) {
    if (n.command == c) return n.name;
  }
  return "unknown";
}

Command parse_command(std::string_view name) {
  for (const CommandName& n : kCommands) {
    if (name == n.name) return n.command;
  }
  throw std::invalid_argument("unknown subcommand '" + std::string(name) + "'");
}

json SpectrumSource::to_json() const {
  switch (kind) {
    case Kind::kInline:
      return values;
    case Kind::kMismatchRule:
      return "d_n = " + text;
    case Kind::kCoefficientRule:
      return "y_n = " + text;
    case Kind::kSpectrumFile:
      return "spectrum:" + text;
    case Kind::kSamplesFile:
      return "samples:" + text;
    case Kind::kProfile:
      break;
  }
  return text;
}

SpectrumSource parse_spectrum_source(const json& value, const std::string& key) {
  using Kind = SpectrumSource::Kind;
  SpectrumSource src;
  if (value.is_array()) {
    src.kind = Kind::kInline;
    for (const json& v : value) src.values.push_back(number_at(v, key));
    if (src.values.empty()) throw ConfigError(key, "inline coefficients must not be empty");
    return src;
  }
  if (!value.is_string()) throw ConfigError(key, "expected a string or a list of coefficients");
  const std::string text = trim(value.get<std::string>());
  std::string rest;
  if (starts_with_rule(text, 'd', rest)) {
    src.kind = Kind::kMismatchRule;
    src.text = rest;
  } else if (starts_with_rule(text, 'y', rest)) {
    src.kind = Kind::kCoefficientRule;
    src.text = rest;
  } else if (text.rfind("spectrum:", 0) == 0) {
    src.kind = Kind::kSpectrumFile;
    src.text = text.substr(9);
  } else if (text.rfind("samples:", 0) == 0) {
    src.kind = Kind::kSamplesFile;
    src.text = text.substr(8);
  } else {
    src.kind = Kind::kProfile;
    src.text = text;
  }

  if (src.kind == Kind::kSpectrumFile || src.kind == Kind::kSamplesFile) {
    if (!std::filesystem::is_regular_file(src.text)) {
      throw ConfigError(key, "file not found: " + src.text);
    }
    return src;
  }
  const Expression e = parse_expression(src.text, key);
  if (src.kind == Kind::kProfile && e.uses_n()) {
    throw ConfigError(key, "profile expressions take x; write 'y_n = ...' for a coefficient rule");
  }
  if (src.kind != Kind::kProfile && e.uses_x()) {
    throw ConfigError(key, "coefficient rules take n, not x");
  }
  return src;
}

std::vector<double> parse_alpha_grid(std::string_view spec) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  const std::string head = colon == std::string::npos ? "" : s.substr(0, colon);
  try {
    if (head == "log" || head == "linear") {
      const auto parts = split(std::string_view(s).substr(colon + 1), ':');
      if (parts.size() != 3) {
        throw ConfigError("alpha_grid", "expected " + head + ":lo:hi:count");
      }
      const double lo = parse_number(parts[0], "alpha_grid");
      const double hi = parse_number(parts[1], "alpha_grid");
      const double count = parse_number(parts[2], "alpha_grid");
      if (count != std::floor(count) || count < 2 || count > 100000) {
        throw ConfigError("alpha_grid", "count must be an integer >= 2");
      }
      return sweep::alpha_grid(lo, hi, static_cast<int>(count),
                               head == "log" ? sweep::Spacing::kLog : sweep::Spacing::kLinear);
    }
    const std::string list = head == "list" ? s.substr(colon + 1) : s;
    if (colon != std::string::npos && head != "list") {
      throw ConfigError("alpha_grid", "unknown grid kind '" + head + "'");
    }
    std::vector<double> values;
    for (const std::string& part : split(list, ',')) {
      values.push_back(parse_number(part, "alpha_grid"));
    }
    return sweep::alpha_grid(std::move(values));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("alpha_grid", e.what());
  }
}

ExperimentConfig parse_config(Command command, const json& config) {
  if (!config.is_object()) throw ConfigError("config", "expected a JSON object");
  for (const auto& [key, value] : config.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigError(key, "unknown key");
  }

  ExperimentConfig c;
  c.command = command;
  c.kind = kind_of(command);
  if (config.contains("kind")) {
    const json& k = config["kind"];
    const std::string expected = c.kind == ProblemKind::kRocket ? "rocket" : "heat";
    if (!k.is_string() || k.get<std::string>() != expected) {
      throw ConfigError("kind", std::string(to_string(command)) + " requires kind \"" +
                                    expected + "\"");
    }
  }

  if (config.contains("T")) c.horizon = number_at(config["T"], "T");
  if (c.horizon <= 0.0) throw ConfigError("T", "horizon must be positive");

  if (c.kind == ProblemKind::kRocket) {
    if (config.contains("target")) c.rocket_target = number_at(config["target"], "target");
    if (config.contains("initial")) throw ConfigError("initial", "the rocket starts at rest");
  } else {
    if (!config.contains("target")) throw ConfigError("target", "required for heat problems");
    c.target = parse_spectrum_source(config["target"], "target");
    if (config.contains("initial")) {
      c.initial = parse_spectrum_source(config["initial"], "initial");
      if (c.initial->kind == SpectrumSource::Kind::kMismatchRule) {
        throw ConfigError("initial", "a mismatch rule is only valid for the target");
      }
    }
  }

  c.solver = default_solver(command);
  if (config.contains("solver")) {
    const json& s = config["solver"];
    if (!s.is_string()) throw ConfigError("solver", "expected a solver tag");
    try {
      c.solver = sweep::parse_solver_tag(s.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("solver", e.what());
    }
    const bool ok = command == Command::kRocketSweep
                        ? (c.solver == sweep::SolverTag::kRocketAnalytic ||
                           c.solver == sweep::SolverTag::kRocketFd)
                        : c.solver == default_solver(command);
    if (!ok) {
      throw ConfigError("solver", std::string(to_string(c.solver)) + " does not fit " +
                                      to_string(command));
    }
  }

  if (config.contains("alpha_grid")) {
    const json& g = config["alpha_grid"];
    if (g.is_string()) {
      c.alpha_grid_spec = g.get<std::string>();
      c.alphas = parse_alpha_grid(c.alpha_grid_spec);
    } else if (g.is_array()) {
      std::vector<double> values;
      for (const json& v : g) values.push_back(number_at(v, "alpha_grid"));
      try {
        c.alphas = sweep::alpha_grid(std::move(values));
      } catch (const std::invalid_argument& e) {
        throw ConfigError("alpha_grid", e.what());
      }
      c.alpha_grid_spec = g.dump();
    } else {
      throw ConfigError("alpha_grid", "expected a grid spec string or a list");
    }
  } else if (c.kind == ProblemKind::kRocket) {
    c.alpha_grid_spec = "log:1:1e6:25";
    c.alphas = sweep::rocket_reference_alphas();
  } else {
    c.alpha_grid_spec = "list:1,10,50,100,500,1000,5000,10000";
    c.alphas = sweep::heat_reference_alphas();
  }

  if (config.contains("modes")) {
    c.modes = integer_at(config["modes"], "modes", command == Command::kAdmissibility ? 4 : 1);
  }
  if (config.contains("nx")) c.nx = integer_at(config["nx"], "nx", 3);
  if (config.contains("nt")) c.nt = integer_at(config["nt"], "nt", 2);
  if (config.contains("quadrature_points")) {
    c.quadrature_points = integer_at(config["quadrature_points"], "quadrature_points", 2);
  }
  if (config.contains("theta")) c.thetas = parse_thetas(config["theta"]);
  if (config.contains("budget")) {
    c.budget = number_at(config["budget"], "budget");
    if (c.budget <= 0.0) throw ConfigError("budget", "must be positive");
  }
  if (config.contains("out")) {
    if (!config["out"].is_string() || config["out"].get<std::string>().empty()) {
      throw ConfigError("out", "expected a directory path");
    }
    c.out = config["out"].get<std::string>();
  }
  if (config.contains("format")) c.formats = parse_formats(config["format"]);
  if (config.contains("strict")) {
    if (!config["strict"].is_boolean()) throw ConfigError("strict", "expected true or false");
    c.strict = config["strict"].get<bool>();
  }

  if (c.kind == ProblemKind::kHeat) {
    // Surfaces projection and file errors at validation time.
    (void)build_heat_problem(c);
  }
  return c;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
}

heat::HeatProblem build_heat_problem(const ExperimentConfig& config) {
  if (!config.target) throw ConfigError("target", "required for heat problems");
  const auto n = static_cast<std::size_t>(config.modes);
  const heat::SineSpectrum initial = config.initial
                                         ? spectrum_from(*config.initial, config.modes, "initial")
                                         : heat::SineSpectrum::zeros(n);
  if (config.target->kind == SpectrumSource::Kind::kMismatchRule) {
    const Expression rule = parse_expression(config.target->text, "target");
    return heat::problem_from_mismatch(config.horizon, initial, n,
                                       [&](int k) { return rule.at_n(k); });
  }
  return heat::HeatProblem(config.horizon, initial,
                           spectrum_from(*config.target, config.modes, "target"));
}

sweep::Experiment build_experiment(const ExperimentConfig& config) {
  if (config.kind == ProblemKind::kRocket) {
    return {sweep::RocketExperiment{rocket::RocketProblem(config.horizon, config.rocket_target),
                                    config.nt, config.quadrature_points},
            config.solver};
  }
  return {sweep::HeatExperiment{build_heat_problem(config), config.nx, config.nt}, config.solver};
}

json config_metadata(const ExperimentConfig& config) {
  json problem;
  problem["T"] = config.horizon;
  if (config.kind == ProblemKind::kRocket) {
    problem["kind"] = "rocket";
    problem["target"] = config.rocket_target;
  } else {
    problem["kind"] = "heat";
    problem["target"] = config.target->to_json();
    problem["initial"] = config.initial ? config.initial->to_json() : json("0");
    problem["modes"] = config.modes;
  }
  json meta;
  meta["command"] = to_string(config.command);
  meta["problem"] = problem;
  meta["solver"] = to_string(config.solver);
  meta["grid"] = {{"nx", config.nx}, {"nt", config.nt}};
  if (config.kind == ProblemKind::kRocket) {
    meta["grid"]["quadrature_points"] = config.quadrature_points;
  }
  meta["alpha_grid"] = config.alpha_grid_spec;
  meta["alphas"] = config.alphas;
  meta["theta"] = config.thetas;
  return meta;
}

}  // namespace soft2hard::cli

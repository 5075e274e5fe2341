#pragma once
// Experiment configuration shared by every subcommand.
//
// A config is a JSON object; command-line flags are folded into the same
// object before validation, so every error names the key it came from.
//
//   {"T": 1, "target": "sin(pi x)", "alpha_grid": "log:1:1e6:25", ...}

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "soft2hard/heat_modal.hpp"
#include "soft2hard/records_io.hpp"
#include "soft2hard/sweep.hpp"

namespace soft2hard::cli {

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

enum class Command {
  kRocketSweep,
  kHeatModalSweep,
  kHeatFdSweep,
  kAdmissibility,
  kRateConstants,
  kCompare,
};

const char* to_string(Command c);
Command parse_command(std::string_view name);

enum class ProblemKind { kRocket, kHeat };

// Where a heat spectrum comes from.
//   "d_n = <expr in n>"   mode mismatch rule
//   "y_n = <expr in n>"   coefficient rule
//   "<expr in x>"         closed-form profile, projected onto the sine basis
//   "spectrum:<path>"     spectrum file
//   "samples:<path>"      whitespace-separated samples on a uniform grid of [0,1]
//   [c1, c2, ...]         inline coefficients
struct SpectrumSource {
  enum class Kind { kMismatchRule, kCoefficientRule, kProfile, kSpectrumFile, kSamplesFile, kInline };
  Kind kind = Kind::kInline;
  std::string text;
  std::vector<double> values;

  nlohmann::json to_json() const;
};

SpectrumSource parse_spectrum_source(const nlohmann::json& value, const std::string& key);

struct ExperimentConfig {
  Command command = Command::kHeatModalSweep;
  ProblemKind kind = ProblemKind::kHeat;
  double horizon = 1.0;
  double rocket_target = 1.0;
  std::optional<SpectrumSource> target;
  std::optional<SpectrumSource> initial;
  sweep::SolverTag solver = sweep::SolverTag::kHeatModal;
  std::string alpha_grid_spec;
  std::vector<double> alphas;
  int modes = 64;
  int nx = 63;
  int nt = 80;
  int quadrature_points = 64;
  std::vector<double> thetas{0.0, 0.25, 0.5, 1.0};
  double budget = 2e-3;
  std::filesystem::path out = "out";
  std::vector<sweep::OutputFormat> formats{sweep::OutputFormat::kCsv,
                                          sweep::OutputFormat::kJsonSummary};
  bool strict = false;
};

/// "log:lo:hi:n", "linear:lo:hi:n", "list:a,b,..." or a bare "a,b,...".
std::vector<double> parse_alpha_grid(std::string_view spec);

/// Validates `config` for `command` and fills defaults. Unknown keys are
/// rejected. Throws ConfigError naming the offending key.
ExperimentConfig parse_config(Command command, const nlohmann::json& config);

/// Reads a JSON config file; throws ConfigError with key "config".
nlohmann::json load_config_file(const std::filesystem::path& path);

/// Builds the heat problem described by the config (initial, target, modes).
heat::HeatProblem build_heat_problem(const ExperimentConfig& config);

sweep::Experiment build_experiment(const ExperimentConfig& config);

/// Problem spec and grid echoed into JSON summaries.
nlohmann::json config_metadata(const ExperimentConfig& config);

}  // namespace soft2hard::cli

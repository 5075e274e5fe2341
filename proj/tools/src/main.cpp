#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "soft2hard/cli/commands.hpp"
#include "soft2hard/cli/config.hpp"
#include "soft2hard/numeric.hpp"

using nlohmann::json;
using namespace soft2hard;

namespace {

struct Flags {
  std::string config;
  std::string alpha_grid;
  int modes = 0;
  int nx = 0;
  int nt = 0;
  std::string theta;
  std::string out;
  std::string format;
  bool strict = false;
  double horizon = 0.0;
  std::string target;
  std::string initial;
  std::string rule;
  std::string solver;
  double budget = 0.0;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--alpha-grid", f.alpha_grid, "log:lo:hi:n, linear:lo:hi:n or a,b,c");
  sub->add_option("--modes", f.modes, "spectral truncation N");
  sub->add_option("--nx", f.nx, "interior grid points");
  sub->add_option("--nt", f.nt, "time steps");
  sub->add_option("--theta", f.theta, "comma-separated rate exponents in [0,1]");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--format", f.format, "csv, json or both");
  sub->add_flag("--strict", f.strict, "nonzero exit on any failed check");
  sub->add_option("--horizon,-T", f.horizon, "final time");
  sub->add_option("--target", f.target, "target profile, rule, file or rocket altitude");
  sub->add_option("--initial", f.initial, "initial profile, rule or file");
  sub->add_option("--rule", f.rule, "mode mismatch rule, e.g. d_n=1/n");
  sub->add_option("--solver", f.solver, "solver tag");
  sub->add_option("--budget", f.budget, "compare: allowed |modal - fd| per alpha");
}

json fold_flags(cli::Command command, const CLI::App* sub, const Flags& f) {
  json j = f.config.empty() ? json::object() : cli::load_config_file(f.config);
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--alpha-grid")) j["alpha_grid"] = f.alpha_grid;
  if (given("--modes")) j["modes"] = f.modes;
  if (given("--nx")) j["nx"] = f.nx;
  if (given("--nt")) j["nt"] = f.nt;
  if (given("--theta")) j["theta"] = f.theta;
  if (given("--out")) j["out"] = f.out;
  if (given("--format")) j["format"] = f.format;
  if (f.strict) j["strict"] = true;
  if (given("--horizon")) j["T"] = f.horizon;
  if (given("--solver")) j["solver"] = f.solver;
  if (given("--budget")) j["budget"] = f.budget;
  if (given("--initial")) j["initial"] = f.initial;
  if (given("--target") && given("--rule")) {
    throw cli::ConfigError("target", "give either --target or --rule");
  }
  if (given("--target")) {
    if (command == cli::Command::kRocketSweep) {
      try {
        std::size_t used = 0;
        j["target"] = std::stod(f.target, &used);
        if (used != f.target.size()) throw std::invalid_argument(f.target);
      } catch (const std::exception&) {
        throw cli::ConfigError("target", "rocket target must be a number");
      }
    } else {
      j["target"] = f.target;
    }
  }
  if (given("--rule")) {
    const bool prefixed = f.rule.rfind("d_n", 0) == 0;
    j["target"] = prefixed ? f.rule : "d_n = " + f.rule;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized terminal-constraint control: sweeps, fits and diagnostics"};
  app.set_version_flag("--version", std::string(sweep::artifact_version()));
  app.require_subcommand(1);

  Flags flags;
  const char* names[] = {"rocket-sweep",  "heat-modal-sweep", "heat-fd-sweep",
                         "admissibility", "rate-constants",   "compare"};
  const char* help[] = {"penalty sweep for the rocket problem",
                        "penalty sweep for the heat problem, closed-form modes",
                        "penalty sweep for the heat problem, Crank-Nicolson",
                        "partial sums of the hard-control energy",
                        "non-asymptotic rate constants",
                        "modal vs finite-difference terminal errors"};
  for (int i = 0; i < 6; ++i) add_flags(app.add_subcommand(names[i], help[i]), flags);

  CLI11_PARSE(app, argc, argv);

  const CLI::App* sub = app.get_subcommands().front();
  const cli::Command command = cli::parse_command(sub->get_name());
  try {
    const cli::ExperimentConfig config =
        cli::parse_config(command, fold_flags(command, sub, flags));
    return cli::dispatch(config, std::cout, threads_from_environment()).status;
  } catch (const cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitFailure;
  }
}

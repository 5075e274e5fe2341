#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "soft2hard/cli/config.hpp"

namespace soft2hard::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,  // solver error, or a failed check under --strict
  kExitUsage = 2,
};

struct RunResult {
  int status = kExitOk;
  std::vector<std::filesystem::path> written;
};

/// Runs the configured subcommand, writes <out>/<subcommand>.csv and .json and
/// prints a summary table to `out`. Solver and I/O errors propagate.
RunResult dispatch(const ExperimentConfig& config, std::ostream& out, int threads);

}  // namespace soft2hard::cli

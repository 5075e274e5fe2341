#pragma once

// Penalty sweeps over alpha, log-log rate fits, and rate-bound checks.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "soft2hard/heat_modal.hpp"
#include "soft2hard/rocket.hpp"

namespace soft2hard::sweep {

enum class SolverTag { kRocketAnalytic, kRocketFd, kHeatModal, kHeatFd };

const char* to_string(SolverTag tag);
/// Accepts "rocket-analytic", "rocket-fd", "heat-modal", "heat-fd".
SolverTag parse_solver_tag(std::string_view text);

struct SweepRecord {
  double alpha = 0.0;
  double terminal_err = 0.0;
  double control_err = 0.0;
  /// Absent for solvers without a state-trajectory error (the heat solvers).
  std::optional<double> state_err;
  SolverTag solver = SolverTag::kRocketAnalytic;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

enum class ErrorField { kTerminal, kControl, kState };

const char* to_string(ErrorField field);

// --- Alpha grids -----------------------------------------------------------

enum class Spacing { kLog, kLinear };

/// Strictly increasing grid with both endpoints included. Throws
/// std::invalid_argument unless 0 < lo < hi and count >= 2.
std::vector<double> alpha_grid(double lo, double hi, int count, Spacing spacing);

/// Validates an explicit list (non-empty, positive, strictly increasing) and
/// returns it unchanged.
std::vector<double> alpha_grid(std::vector<double> values);

/// 1, 10, 50, 100, 500, 1000, 5000, 10000.
std::vector<double> heat_reference_alphas();
/// 25 geometric points from 1 to 1e6.
std::vector<double> rocket_reference_alphas();

// --- Experiments -----------------------------------------------------------

struct RocketExperiment {
  rocket::RocketProblem problem{1.0, 1.0};
  int nt = 80;
  int quadrature_points = 64;
};

struct HeatExperiment {
  heat::HeatProblem problem{1.0, heat::SineSpectrum::zeros(1),
                            heat::SineSpectrum::zeros(1)};
  int nx = 63;
  int nt = 80;
};

struct Experiment {
  std::variant<RocketExperiment, HeatExperiment> setup;
  SolverTag solver = SolverTag::kRocketAnalytic;
};

/// A solver failure at one sweep point.
class SweepError : public std::runtime_error {
 public:
  SweepError(double alpha, const std::string& what);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// One record per alpha, in the order of `alphas` (ascending for any grid
/// produced by alpha_grid). Points run on up to `threads` workers; the
/// records do not depend on the thread count. Throws std::invalid_argument
/// when the solver tag does not match the problem kind.
std::vector<SweepRecord> run_sweep(const Experiment& experiment,
                                   std::span<const double> alphas, int threads = 1);

// --- Fits ------------------------------------------------------------------

struct FitWindow {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

struct RateFit {
  ErrorField field = ErrorField::kTerminal;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  /// Smallest and largest alpha actually used.
  double window_lo = 0.0;
  double window_hi = 0.0;
  std::size_t points = 0;
};

/// Mode mismatches below this fraction of the largest one are ignored by
/// characteristic_gram.
inline constexpr double kNegligibleMismatch = 1e-12;

/// Smallest Gram governing the decay: T^3/3 for the rocket, min a_n over
/// modes with non-negligible d_n for the heat problem (a_1 when every d_n
/// vanishes).
double characteristic_gram(const Experiment& experiment);

/// Default asymptotic window: alpha * characteristic_gram >= threshold.
inline constexpr double kAsymptoticThreshold = 10.0;
FitWindow asymptotic_window(const Experiment& experiment,
                            double threshold = kAsymptoticThreshold);

/// OLS of ln(err) on ln(alpha) over records inside the window with positive
/// error. Throws DegenerateFitError with fewer than two such records and
/// std::invalid_argument when the state field is requested but absent.
RateFit fit_loglog_slope(std::span<const SweepRecord> records, ErrorField field,
                         FitWindow window = {});

// --- Rate bounds -----------------------------------------------------------

struct BoundCheck {
  double alpha = 0.0;
  double theta = 0.0;
  ErrorField field = ErrorField::kTerminal;
  double observed = 0.0;
  double bound = 0.0;
  /// bound - observed; negative on violation.
  double margin = 0.0;
  bool holds = true;
};

struct BoundReport {
  std::vector<BoundCheck> checks;

  std::vector<BoundCheck> violations() const;
  bool all_hold() const;
};

/// For every record and constant: terminal_err <= C alpha^{-(1/2 + theta)}
/// when theta <= 1/2, control_err <= C alpha^{-theta} when 0 < theta <= 1.
/// Throws std::invalid_argument for records from rocket solvers.
BoundReport check_rate_bounds(std::span<const SweepRecord> records,
                              std::span<const heat::RateConstants> constants);

// --- Solver comparison -----------------------------------------------------

struct Discrepancy {
  double alpha = 0.0;
  double reference = 0.0;
  double candidate = 0.0;
  /// |candidate - reference|.
  double absolute = 0.0;
};

/// Per-alpha terminal-error discrepancy between two sweeps over the same
/// grid. Throws std::invalid_argument when the alphas differ.
std::vector<Discrepancy> compare_terminal_errors(std::span<const SweepRecord> reference,
                                                 std::span<const SweepRecord> candidate);

}  // namespace soft2hard::sweep

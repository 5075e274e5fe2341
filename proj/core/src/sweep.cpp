#include "soft2hard/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iterator>

#include "soft2hard/fd_solver.hpp"
#include "soft2hard/numeric.hpp"

namespace soft2hard::sweep {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_rocket(SolverTag t) {
  return t == SolverTag::kRocketAnalytic || t == SolverTag::kRocketFd;
}

double field_value(const SweepRecord& r, ErrorField field) {
  switch (field) {
    case ErrorField::kTerminal:
      return r.terminal_err;
    case ErrorField::kControl:
      return r.control_err;
    case ErrorField::kState:
      if (!r.state_err) {
        throw std::invalid_argument(std::string("fit_loglog_slope: ") + to_string(r.solver) +
                                    " records carry no state error");
      }
      return *r.state_err;
  }
  return 0.0;
}

// Shared state for the heat finite-difference solver across sweep points.
struct HeatFdContext {
  fd::SpaceTimeGrid grid;
  fd::TerminalGram gram;
  Eigen::VectorXd y0;
  Eigen::VectorXd yT;
};

HeatFdContext make_heat_fd_context(const HeatExperiment& e, int threads) {
  fd::SpaceTimeGrid grid(e.nx, e.nt, e.problem.horizon());
  const heat::SineSpectrum& y0 = e.problem.initial();
  const heat::SineSpectrum& yT = e.problem.target();
  return {grid, fd::assemble_terminal_gram(grid, threads),
          grid.sample([&](double x) { return y0.evaluate(x); }),
          grid.sample([&](double x) { return yT.evaluate(x); })};
}

}  // namespace

const char* to_string(SolverTag tag) {
  switch (tag) {
    case SolverTag::kRocketAnalytic:
      return "rocket-analytic";
    case SolverTag::kRocketFd:
      return "rocket-fd";
    case SolverTag::kHeatModal:
      return "heat-modal";
    case SolverTag::kHeatFd:
      return "heat-fd";
  }
  return "unknown";
}

SolverTag parse_solver_tag(std::string_view text) {
  for (SolverTag t : {SolverTag::kRocketAnalytic, SolverTag::kRocketFd,
                      SolverTag::kHeatModal, SolverTag::kHeatFd}) {
    if (text == to_string(t)) return t;
  }
  throw std::invalid_argument("unknown solver tag '" + std::string(text) + "'");
}

const char* to_string(ErrorField field) {
  switch (field) {
    case ErrorField::kTerminal:
      return "terminal_err";
    case ErrorField::kControl:
      return "control_err";
    case ErrorField::kState:
      return "state_err";
  }
  return "unknown";
}

// --- Grids -----------------------------------------------------------------

std::vector<double> alpha_grid(double lo, double hi, int count, Spacing spacing) {
  if (!(lo > 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("alpha_grid: need 0 < lo < hi, got [" + format_double(lo) +
                                ", " + format_double(hi) + "]");
  }
  if (count < 2) throw std::invalid_argument("alpha_grid: count must be >= 2");
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double last = count - 1;
  for (int i = 0; i < count; ++i) {
    if (spacing == Spacing::kLog) {
      grid[static_cast<std::size_t>(i)] =
          std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * (i / last));
    } else {
      grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * (i / last);
    }
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> alpha_grid(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("alpha_grid: explicit list is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw std::invalid_argument("alpha_grid: entries must be positive and finite");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw std::invalid_argument("alpha_grid: explicit list must be strictly increasing");
    }
  }
  return values;
}

std::vector<double> heat_reference_alphas() {
  return {1.0, 10.0, 50.0, 100.0, 500.0, 1000.0, 5000.0, 10000.0};
}

std::vector<double> rocket_reference_alphas() {
  return alpha_grid(1.0, 1e6, 25, Spacing::kLog);
}

// --- Sweeps ----------------------------------------------------------------

SweepError::SweepError(double alpha, const std::string& what)
    : std::runtime_error("alpha=" + format_double(alpha) + ": " + what), alpha_(alpha) {}

std::vector<SweepRecord> run_sweep(const Experiment& experiment,
                                   std::span<const double> alphas, int threads) {
  const bool rocket_setup = std::holds_alternative<RocketExperiment>(experiment.setup);
  if (rocket_setup != is_rocket(experiment.solver)) {
    throw std::invalid_argument(std::string("run_sweep: solver ") +
                                to_string(experiment.solver) +
                                " does not match the problem kind");
  }

  std::optional<HeatFdContext> fd_context;
  if (experiment.solver == SolverTag::kHeatFd) {
    fd_context = make_heat_fd_context(std::get<HeatExperiment>(experiment.setup), threads);
  }

  std::vector<SweepRecord> records(alphas.size());
  auto solve_point = [&](std::size_t i) {
    const double alpha = alphas[i];
    SweepRecord r;
    r.alpha = alpha;
    r.solver = experiment.solver;
    try {
      switch (experiment.solver) {
        case SolverTag::kRocketAnalytic: {
          const auto& e = std::get<RocketExperiment>(experiment.setup);
          const rocket::RocketErrors err =
              rocket::rocket_errors(e.problem, alpha, e.quadrature_points);
          r.terminal_err = err.terminal_mismatch;
          r.control_err = err.control_err;
          r.state_err = err.state_err;
          break;
        }
        case SolverTag::kRocketFd: {
          const auto& e = std::get<RocketExperiment>(experiment.setup);
          const fd::RocketDiscreteSolution s = fd::rocket_discrete_solve(
              e.problem.horizon(), e.problem.target(), alpha, e.nt);
          r.terminal_err = s.terminal_mismatch;
          r.control_err = s.control_err;
          r.state_err = s.state_err;
          break;
        }
        case SolverTag::kHeatModal: {
          const auto& e = std::get<HeatExperiment>(experiment.setup);
          r.terminal_err = heat::terminal_error(e.problem, alpha);
          r.control_err = heat::control_error(e.problem, alpha);
          break;
        }
        case SolverTag::kHeatFd: {
          const fd::DiscreteSolution s = fd::penalized_optimal_control_fd(
              fd_context->grid, fd_context->y0, fd_context->yT, alpha, &fd_context->gram);
          r.terminal_err = s.terminal_mismatch_norm;
          r.control_err = s.control_error;
          break;
        }
      }
    } catch (const std::exception& ex) {
      throw SweepError(alpha, ex.what());
    }
    records[i] = r;
  };
  parallel_for(alphas.size(), threads, solve_point);
  return records;
}

// --- Fits ------------------------------------------------------------------

double characteristic_gram(const Experiment& experiment) {
  return std::visit(
      overloaded{
          [](const RocketExperiment& e) { return rocket::rocket_derived(e.problem).gram; },
          [](const HeatExperiment& e) {
            double largest = 0.0;
            for (const heat::ModeQuantities& m : e.problem.modes()) {
              largest = std::max(largest, std::abs(m.mismatch));
            }
            // Round-off left in nominally empty modes by sampling must not
            // decide the window.
            const double cutoff = kNegligibleMismatch * largest;
            double smallest = 0.0;
            for (const heat::ModeQuantities& m : e.problem.modes()) {
              if (std::abs(m.mismatch) > cutoff && (smallest == 0.0 || m.gram < smallest)) {
                smallest = m.gram;
              }
            }
            return smallest > 0.0 ? smallest : e.problem.modes().front().gram;
          }},
      experiment.setup);
}

FitWindow asymptotic_window(const Experiment& experiment, double threshold) {
  return {threshold / characteristic_gram(experiment),
          std::numeric_limits<double>::infinity()};
}

RateFit fit_loglog_slope(std::span<const SweepRecord> records, ErrorField field,
                         FitWindow window) {
  std::vector<double> x, y;
  double used_lo = 0.0, used_hi = 0.0;
  for (const SweepRecord& r : records) {
    if (r.alpha < window.lo || r.alpha > window.hi) continue;
    const double err = field_value(r, field);
    if (!(err > 0.0)) continue;
    if (x.empty() || r.alpha < used_lo) used_lo = r.alpha;
    if (x.empty() || r.alpha > used_hi) used_hi = r.alpha;
    x.push_back(std::log(r.alpha));
    y.push_back(std::log(err));
  }
  if (x.size() < 2) {
    throw DegenerateFitError(std::string("fit_loglog_slope: ") + std::to_string(x.size()) +
                             " positive " + to_string(field) + " values in window [" +
                             format_double(window.lo) + ", " + format_double(window.hi) +
                             "], need 2");
  }
  const LineFit line = least_squares_line(x, y);
  return {field, line.slope, line.intercept, line.r_squared, used_lo, used_hi, line.points};
}

// --- Bounds ----------------------------------------------------------------

std::vector<BoundCheck> BoundReport::violations() const {
  std::vector<BoundCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const BoundCheck& c) { return !c.holds; });
  return out;
}

bool BoundReport::all_hold() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
}

BoundReport check_rate_bounds(std::span<const SweepRecord> records,
                              std::span<const heat::RateConstants> constants) {
  BoundReport report;
  for (const SweepRecord& r : records) {
    if (is_rocket(r.solver)) {
      throw std::invalid_argument("check_rate_bounds: rate constants apply to heat records only");
    }
    for (const heat::RateConstants& c : constants) {
      auto add = [&](ErrorField field, double observed, double exponent) {
        BoundCheck b;
        b.alpha = r.alpha;
        b.theta = c.theta;
        b.field = field;
        b.observed = observed;
        b.bound = c.value * std::pow(r.alpha, -exponent);
        b.margin = b.bound - observed;
        b.holds = observed <= b.bound;
        report.checks.push_back(b);
      };
      if (c.theta <= 0.5) add(ErrorField::kTerminal, r.terminal_err, 0.5 + c.theta);
      if (c.theta > 0.0) add(ErrorField::kControl, r.control_err, c.theta);
    }
  }
  return report;
}

std::vector<Discrepancy> compare_terminal_errors(std::span<const SweepRecord> reference,
                                                 std::span<const SweepRecord> candidate) {
  if (reference.size() != candidate.size()) {
    throw std::invalid_argument("compare_terminal_errors: record counts differ");
  }
  std::vector<Discrepancy> out;
  out.reserve(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i].alpha != candidate[i].alpha) {
      throw std::invalid_argument("compare_terminal_errors: alpha grids differ");
    }
    out.push_back({reference[i].alpha, reference[i].terminal_err, candidate[i].terminal_err,
                   std::abs(candidate[i].terminal_err - reference[i].terminal_err)});
  }
  return out;
}

}  // namespace soft2hard::sweep

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "soft2hard/fd_solver.hpp"
#include "soft2hard/heat_modal.hpp"
#include "soft2hard/numeric.hpp"
#include "soft2hard/rocket.hpp"
#include "soft2hard/sweep.hpp"
#include "support/oracles.hpp"

#ifndef SOFT2HARD_CLI_PATH
#define SOFT2HARD_CLI_PATH "soft2hard"
#endif

using namespace soft2hard;
using std::numbers::pi;
using sweep::ErrorField;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::vector<std::string> info;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

heat::HeatProblem single_mode_problem(std::size_t modes = 64) {
  // sin(pi x) = e_1 / sqrt(2).
  return heat::HeatProblem(1.0, heat::SineSpectrum::zeros(modes),
                           heat::SineSpectrum({1.0 / std::numbers::sqrt2}));
}

sweep::Experiment heat_experiment(sweep::SolverTag tag, int nx, int nt) {
  return {sweep::HeatExperiment{single_mode_problem(), nx, nt}, tag};
}

// 1. Rocket analytic O(1/alpha) on [1e2, 1e6].
Outcome rocket_analytic_slope() {
  Outcome o;
  const auto start = Clock::now();
  const sweep::Experiment e{sweep::RocketExperiment{rocket::RocketProblem(1.0, 1.0), 80, 64},
                            sweep::SolverTag::kRocketAnalytic};
  const auto records = sweep::run_sweep(e, sweep::alpha_grid(1e2, 1e6, 25, sweep::Spacing::kLog));
  o.pass = true;
  std::string slopes;
  for (ErrorField f : {ErrorField::kControl, ErrorField::kState, ErrorField::kTerminal}) {
    const double s = sweep::fit_loglog_slope(records, f).slope;
    o.pass = o.pass && s >= -1.001 && s <= -0.999;
    slopes += fmt("%s %.6f ", sweep::to_string(f), s);
  }
  const double elapsed = seconds_since(start);
  o.pass = o.pass && elapsed < 1.0;
  o.detail = slopes + fmt("(band [-1.001, -0.999], %.3f s)", elapsed);
  const double a = sweep::characteristic_gram(e);
  o.info.push_back(fmt("local slope -alpha a/(1+alpha a) runs from %.6f at alpha=1e2 to %.8f at 1e6",
                       -1e2 * a / (1 + 1e2 * a), -1e6 * a / (1 + 1e6 * a)));
  const auto upper = sweep::run_sweep(e, sweep::alpha_grid(1e3, 1e6, 25, sweep::Spacing::kLog));
  o.info.push_back(fmt("same fit over [1e3, 1e6]: terminal slope %.6f",
                       sweep::fit_loglog_slope(upper, ErrorField::kTerminal).slope));
  return o;
}

// 2. Rocket discrete full-grid slope at nt = 80.
Outcome rocket_discrete_slope() {
  Outcome o;
  const auto start = Clock::now();
  const sweep::Experiment e{sweep::RocketExperiment{rocket::RocketProblem(1.0, 1.0), 80, 64},
                            sweep::SolverTag::kRocketFd};
  const auto records = sweep::run_sweep(e, sweep::rocket_reference_alphas());
  const double s = sweep::fit_loglog_slope(records, ErrorField::kTerminal).slope;
  const double elapsed = seconds_since(start);
  o.pass = std::abs(s - -0.9997) <= 0.02 && elapsed < 1.0;
  o.detail = fmt("full-grid terminal slope %.6f over [1, 1e6] (target -0.9997 +/- 0.02, %.3f s)", s,
                 elapsed);
  for (ErrorField f : {ErrorField::kControl, ErrorField::kState}) {
    o.info.push_back(fmt("full-grid %s slope %.6f", sweep::to_string(f),
                         sweep::fit_loglog_slope(records, f).slope));
  }
  o.info.push_back(fmt("default window alpha >= %.4g: terminal slope %.6f",
                       sweep::asymptotic_window(e).lo,
                       sweep::fit_loglog_slope(records, ErrorField::kTerminal,
                                               sweep::asymptotic_window(e))
                           .slope));
  o.info.push_back(fmt("window alpha >= 1e3: terminal slope %.6f",
                       sweep::fit_loglog_slope(records, ErrorField::kTerminal, {1e3}).slope));
  return o;
}

// 3. Heat modal slope on the 8-point grid.
Outcome heat_modal_slope() {
  Outcome o;
  const auto start = Clock::now();
  const auto e = heat_experiment(sweep::SolverTag::kHeatModal, 63, 80);
  const auto records = sweep::run_sweep(e, sweep::heat_reference_alphas());
  const auto fit = sweep::fit_loglog_slope(records, ErrorField::kTerminal, sweep::asymptotic_window(e));
  const double elapsed = seconds_since(start);
  o.pass = std::abs(fit.slope - -0.9883) <= 0.02 && elapsed < 1.0;
  o.detail = fmt("terminal slope %.6f over alpha in [%g, %g] (target -0.9883 +/- 0.02, %.3f s)",
                 fit.slope, fit.window_lo, fit.window_hi, elapsed);
  o.info.push_back(fmt("full-grid fit: %.6f",
                       sweep::fit_loglog_slope(records, ErrorField::kTerminal).slope));
  return o;
}

// 4. Heat finite-difference slope plus refinement.
Outcome heat_fd_slope() {
  Outcome o;
  const auto start = Clock::now();
  std::vector<double> slopes;
  for (int level = 0; level < 3; ++level) {
    const int nx = 64 * (1 << level) - 1;
    const int nt = 80 * (1 << level);
    const auto e = heat_experiment(sweep::SolverTag::kHeatFd, nx, nt);
    const auto records = sweep::run_sweep(e, sweep::heat_reference_alphas());
    slopes.push_back(
        sweep::fit_loglog_slope(records, ErrorField::kTerminal, sweep::asymptotic_window(e)).slope);
    o.info.push_back(fmt("nx=%d nt=%d: slope %.6f", nx, nt, slopes.back()));
  }
  const double elapsed = seconds_since(start);
  const bool in_band = std::all_of(slopes.begin(), slopes.end(),
                                   [](double s) { return std::abs(s - -0.9849) <= 0.03; });
  const bool stabilizing = std::abs(slopes[2] - slopes[1]) <= std::abs(slopes[1] - slopes[0]) + 1e-12;
  o.pass = in_band && stabilizing && elapsed < 30.0;
  o.detail = fmt("slope %.6f at 63x80, refinements %.6f, %.6f (target -0.9849 +/- 0.03, %.2f s)",
                 slopes[0], slopes[1], slopes[2], elapsed);
  return o;
}

// 5. Per-mode identities against 50-digit mode data.
Outcome per_mode_identities() {
  Outcome o;
  std::mt19937_64 rng(20240605);
  std::uniform_int_distribution<int> modes(1, 32);
  std::uniform_real_distribution<double> horizon(0.1, 2.0);
  std::uniform_real_distribution<double> log_alpha(-2.0, 4.0);
  double worst_terminal = 0.0;
  double worst_control = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(modes(rng));
    const double T = horizon(rng);
    const heat::SineSpectrum y0 = testing::random_spectrum(rng, n);
    const heat::SineSpectrum yT = testing::random_spectrum(rng, n);
    const double alpha = std::pow(10.0, log_alpha(rng));
    const heat::HeatProblem p(T, y0, yT);

    // Path A: closed-form terminal spectrum. Path B: state integration.
    const heat::SineSpectrum terminal_a = heat::penalized_terminal_spectrum(p, alpha);
    const auto c_alpha = heat::penalized_control_coefficients(p, alpha);
    const heat::SineSpectrum terminal_b = heat::modal_state_spectrum(p, c_alpha, T);
    const auto c_hard = heat::hard_control_coefficients(p).amplitudes;
    const auto control_err = heat::control_error_by_mode(p, alpha);

    for (std::size_t k = 0; k < n; ++k) {
      const int mode = static_cast<int>(k) + 1;
      const auto ref = testing::mode_reference(mode, T, y0.mode(mode), yT.mode(mode));
      const double shrink = 1.0 + alpha * ref.gram;
      const double expected = -ref.mismatch / shrink;
      // Rounding scale of the terminal difference: both terms of d_n, shrunk.
      const double scale =
          (std::abs(yT.mode(mode)) + std::exp(-ref.eigenvalue * T) * std::abs(y0.mode(mode))) /
          shrink;
      for (const heat::SineSpectrum* s : {&terminal_a, &terminal_b}) {
        const double got = s->mode(mode) - yT.mode(mode);
        if (scale > 0) worst_terminal = std::max(worst_terminal, std::abs(got - expected) / scale);
      }

      const double expected_ctrl = ref.mismatch * ref.mismatch / (ref.gram * shrink * shrink);
      const double diff = c_alpha[k] - c_hard[k];
      const double via_amplitudes = diff * diff * ref.gram;
      const double ctrl_scale = scale * scale / ref.gram;
      for (double got : {control_err[k], via_amplitudes}) {
        if (ctrl_scale > 0) worst_control = std::max(worst_control, std::abs(got - expected_ctrl) / ctrl_scale);
      }
    }
  }
  o.pass = worst_terminal <= 1e-12 && worst_control <= 1e-12;
  o.detail = fmt("200 problems: worst relative error terminal %.2e, control %.2e (limit 1e-12)",
                 worst_terminal, worst_control);
  return o;
}

// 6. Rate bounds over every swept alpha on finite-spectrum problems.
Outcome rate_bounds_hold() {
  Outcome o;
  std::vector<heat::HeatProblem> problems{single_mode_problem()};
  problems.push_back(heat::problem_from_mismatch(1.0, heat::SineSpectrum::zeros(64), 64,
                                                 [](int n) { return 1.0 / n; }));
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> modes(1, 32);
  std::uniform_real_distribution<double> horizon(0.1, 2.0);
  for (int i = 0; i < 100; ++i) {
    const auto n = static_cast<std::size_t>(modes(rng));
    const double T = horizon(rng);
    problems.emplace_back(T, testing::random_spectrum(rng, n), testing::random_spectrum(rng, n));
  }
  std::vector<double> alphas = sweep::heat_reference_alphas();
  const auto wide = sweep::alpha_grid(1.0, 1e6, 25, sweep::Spacing::kLog);
  alphas.insert(alphas.end(), wide.begin(), wide.end());
  std::sort(alphas.begin(), alphas.end());
  alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());

  std::size_t checks = 0;
  std::size_t violations = 0;
  double tightest = INFINITY;
  for (const heat::HeatProblem& p : problems) {
    const auto records = sweep::run_sweep(
        {sweep::HeatExperiment{p, 63, 80}, sweep::SolverTag::kHeatModal}, alphas);
    std::vector<heat::RateConstants> constants;
    for (double theta : {0.0, 0.25, 0.5, 1.0}) constants.push_back(heat::rate_constants(p, theta));
    const auto report = sweep::check_rate_bounds(records, constants);
    checks += report.checks.size();
    violations += report.violations().size();
    for (const auto& c : report.checks) {
      if (c.bound > 0) tightest = std::min(tightest, c.margin / c.bound);
    }
  }
  o.pass = violations == 0 && checks > 0;
  o.detail = fmt("%zu problems, %zu alphas, %zu checks, %zu violations", problems.size(),
                 alphas.size(), checks, violations);
  o.info.push_back(fmt("smallest relative margin %.3e", tightest));
  return o;
}

// 7. Modal vs finite-difference terminal mismatch, with refinement order.
Outcome modal_fd_equivalence() {
  Outcome o;
  const auto alphas = sweep::heat_reference_alphas();
  const auto modal = sweep::run_sweep(heat_experiment(sweep::SolverTag::kHeatModal, 63, 80), alphas);
  std::vector<double> worst;
  for (int level = 0; level < 3; ++level) {
    const int nx = 64 * (1 << level) - 1;
    const int nt = 80 * (1 << level);
    const auto fd = sweep::run_sweep(heat_experiment(sweep::SolverTag::kHeatFd, nx, nt), alphas);
    double w = 0.0;
    for (const auto& d : sweep::compare_terminal_errors(modal, fd)) w = std::max(w, d.absolute);
    worst.push_back(w);
  }
  const double order1 = std::log2(worst[0] / worst[1]);
  const double order2 = std::log2(worst[1] / worst[2]);
  o.pass = worst[0] <= 2e-3 && order1 >= 1.8 && order2 >= 1.8;
  o.detail = fmt("max |modal - fd| %.3e at 63x80 (limit 2e-3); observed orders %.3f, %.3f (min 1.8)",
                 worst[0], order1, order2);
  return o;
}

// 8. d_n = 1/n partial sums grow like 2 pi^2 M.
Outcome inadmissible_blowup() {
  Outcome o;
  const auto p = heat::problem_from_mismatch(1.0, heat::SineSpectrum::zeros(64), 64,
                                             [](int n) { return 1.0 / n; });
  const auto report = heat::admissibility_diagnostic(p);
  const double limit = 2 * pi * pi;
  double worst = 0.0;
  for (std::size_t m = 32; m <= report.partial_sums.size(); ++m) {
    worst = std::max(worst, std::abs(report.partial_sums[m - 1] / m - limit) / limit);
  }
  o.pass = worst <= 0.05 && report.classification == heat::Classification::kDivergentLooking;
  o.detail = fmt("max |E_M/M - 2pi^2|/2pi^2 = %.2e for M in [32, 64] (limit 5e-2); %s, exponent %.4f",
                 worst, heat::to_string(report.classification), report.growth_exponent);
  return o;
}

// 9. Gradient and adjoint checks.
Outcome gradient_and_adjoint() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  std::uniform_int_distribution<int> size(3, 24);
  std::uniform_real_distribution<double> horizon(0.05, 1.5);
  std::uniform_real_distribution<double> log_alpha(-1.0, 4.0);
  auto random_matrix = [&](int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n01(rng);
    return m;
  };
  double worst_grad = 0.0;
  double worst_adj = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const fd::SpaceTimeGrid g(size(rng), size(rng) / 2 + 2, horizon(rng));
    const Eigen::VectorXd y0 = random_matrix(g.nx(), 1);
    const Eigen::VectorXd yT = random_matrix(g.nx(), 1);
    const double alpha = std::pow(10.0, log_alpha(rng));
    const Eigen::MatrixXd u = random_matrix(g.nx(), g.nt());
    const Eigen::MatrixXd v = random_matrix(g.nx(), g.nt());

    const double h = 1e-4;
    const double fd_derivative = (fd::discrete_objective(g, y0, yT, alpha, u + h * v) -
                                  fd::discrete_objective(g, y0, yT, alpha, u - h * v)) /
                                 (2 * h);
    const double analytic = fd::spacetime_inner(g, fd::discrete_gradient(g, y0, yT, alpha, u), v);
    worst_grad = std::max(worst_grad, std::abs(fd_derivative - analytic) / std::abs(analytic));

    const Eigen::VectorXd w = random_matrix(g.nx(), 1);
    const double lhs = fd::space_inner(g, fd::apply_control_map(g, u), w);
    const double rhs = fd::spacetime_inner(g, u, fd::apply_adjoint(g, w));
    worst_adj = std::max(worst_adj, std::abs(lhs - rhs) / std::abs(lhs));
  }
  o.pass = worst_grad <= 1e-6 && worst_adj <= 1e-10;
  o.detail = fmt("50 trials: gradient rel err %.2e (limit 1e-6), adjoint rel err %.2e (limit 1e-10)",
                 worst_grad, worst_adj);
  return o;
}

// 10. CLI outputs are byte-identical across runs and thread counts.
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "soft2hard_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);

  struct Run {
    const char* command;
    const char* config;
  };
  const Run runs[] = {
      {"rocket-sweep", R"j({"T": 1, "target": 1})j"},
      {"rocket-sweep", R"j({"T": 1, "target": 1, "solver": "rocket-fd"})j"},
      {"heat-modal-sweep", R"j({"T": 1, "target": "sin(pi x)"})j"},
      {"heat-fd-sweep", R"j({"T": 1, "target": "sin(pi x)"})j"},
      {"admissibility", R"j({"T": 1, "target": "d_n = 1/n"})j"},
      {"rate-constants", R"j({"T": 1, "target": "sin(pi x) + 0.5 sin(3 pi x)"})j"},
      {"compare", R"j({"T": 1, "target": "sin(pi x)"})j"},
  };
  std::size_t compared = 0;
  std::vector<std::string> mismatches;
  int index = 0;
  for (const Run& r : runs) {
    const fs::path config = root / ("config" + std::to_string(index++) + ".json");
    std::ofstream(config) << r.config;
    std::vector<fs::path> outs;
    for (const char* threads : {"1", "1", "4"}) {
      const fs::path out = root / ("run" + std::to_string(outs.size())) / config.stem();
      const std::string cmd = std::string("SOFT2HARD_THREADS=") + threads + " '" +
                              SOFT2HARD_CLI_PATH + "' " + r.command + " --config '" +
                              config.string() + "' --out '" + out.string() + "' > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        mismatches.push_back(std::string(r.command) + ": exit status");
      }
      outs.push_back(out);
    }
    for (const char* ext : {".csv", ".json"}) {
      const std::string name = std::string(r.command) + ext;
      const std::string first = slurp(outs[0] / name);
      if (first.empty()) mismatches.push_back(name + " missing");
      for (std::size_t k = 1; k < outs.size(); ++k) {
        ++compared;
        if (slurp(outs[k] / name) != first) mismatches.push_back(name);
      }
    }
  }
  fs::remove_all(root);
  o.pass = mismatches.empty();
  o.detail = fmt("%zu subcommand configs, %zu file comparisons (threads 1, 1, 4), %zu mismatches",
                 std::size(runs), compared, mismatches.size());
  for (const auto& m : mismatches) o.info.push_back("differs: " + m);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "rocket analytic slope", rocket_analytic_slope},
      {2, "rocket discrete slope", rocket_discrete_slope},
      {3, "heat modal slope", heat_modal_slope},
      {4, "heat finite-difference slope", heat_fd_slope},
      {5, "per-mode identities", per_mode_identities},
      {6, "rate bounds", rate_bounds_hold},
      {7, "modal vs finite-difference", modal_fd_equivalence},
      {8, "inadmissible target blowup", inadmissible_blowup},
      {9, "gradient and adjoint", gradient_and_adjoint},
      {10, "CLI determinism", cli_determinism},
  };

  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--criterion") {
    only = std::atoi(argv[2]);
  } else if (argc != 1) {
    std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
    return 2;
  }

  int failures = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    for (const auto& line : o.info) std::printf("    %s\n", line.c_str());
    if (!o.pass) ++failures;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}

#include "soft2hard/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "soft2hard/numeric.hpp"

namespace soft2hard::cli {

using nlohmann::json;
using sweep::ErrorField;
using sweep::OutputFormat;

namespace {

bool wants(const ExperimentConfig& c, OutputFormat f) {
  return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end();
}

std::filesystem::path artifact(const ExperimentConfig& c, const char* ext) {
  return c.out / (std::string(to_string(c.command)) + ext);
}

std::string fixed(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

json base_summary(const ExperimentConfig& c) {
  json j;
  j["artifact_version"] = sweep::artifact_version();
  j["metadata"] = config_metadata(c);
  return j;
}

void write_json(const ExperimentConfig& c, const json& j, RunResult& result) {
  if (!wants(c, OutputFormat::kJsonSummary)) return;
  const auto path = artifact(c, ".json");
  sweep::write_text_file(path, j.dump(2) + "\n");
  result.written.push_back(path);
}

void write_csv(const ExperimentConfig& c, const std::string& text, RunResult& result) {
  if (!wants(c, OutputFormat::kCsv)) return;
  const auto path = artifact(c, ".csv");
  sweep::write_text_file(path, text);
  result.written.push_back(path);
}

std::vector<sweep::NamedFit> fit_all(const sweep::Experiment& e,
                                     const std::vector<sweep::SweepRecord>& records,
                                     std::vector<ErrorField> fields) {
  const sweep::FitWindow window = sweep::asymptotic_window(e);
  std::vector<sweep::NamedFit> fits;
  for (ErrorField f : fields) {
    for (bool asymptotic : {false, true}) {
      sweep::NamedFit nf;
      nf.label = std::string(to_string(f)) + (asymptotic ? "/asymptotic" : "/full");
      try {
        nf.fit = sweep::fit_loglog_slope(records, f, asymptotic ? window : sweep::FitWindow{});
      } catch (const DegenerateFitError& err) {
        nf.note = err.what();
      }
      fits.push_back(std::move(nf));
    }
  }
  return fits;
}

json bounds_json(const sweep::BoundReport& report) {
  json j;
  j["checks"] = report.checks.size();
  j["violations"] = json::array();
  for (const sweep::BoundCheck& b : report.violations()) {
    j["violations"].push_back({{"alpha", b.alpha},
                               {"theta", b.theta},
                               {"field", to_string(b.field)},
                               {"observed", b.observed},
                               {"bound", b.bound}});
  }
  j["all_hold"] = report.all_hold();
  return j;
}

void print_fits(std::ostream& out, const std::vector<sweep::NamedFit>& fits) {
  out << "  fit                       slope       r^2       alpha range          points\n";
  for (const sweep::NamedFit& nf : fits) {
    char line[160];
    if (nf.fit) {
      std::snprintf(line, sizeof line, "  %-24s %9.5f  %8.6f   [%-8s, %-8s]  %zu\n",
                    nf.label.c_str(), nf.fit->slope, nf.fit->r_squared,
                    fixed(nf.fit->window_lo, 4).c_str(), fixed(nf.fit->window_hi, 4).c_str(),
                    nf.fit->points);
    } else {
      std::snprintf(line, sizeof line, "  %-24s   (none)    %s\n", nf.label.c_str(),
                    nf.note.c_str());
    }
    out << line;
  }
}

RunResult run_sweep_command(const ExperimentConfig& c, std::ostream& out, int threads) {
  RunResult result;
  const sweep::Experiment e = build_experiment(c);
  const auto records = sweep::run_sweep(e, c.alphas, threads);

  std::vector<ErrorField> fields{ErrorField::kTerminal, ErrorField::kControl};
  if (c.kind == ProblemKind::kRocket) fields.push_back(ErrorField::kState);
  const auto fits = fit_all(e, records, fields);

  std::optional<sweep::BoundReport> bounds;
  if (c.solver == sweep::SolverTag::kHeatModal) {
    const heat::HeatProblem& p = std::get<sweep::HeatExperiment>(e.setup).problem;
    std::vector<heat::RateConstants> constants;
    for (double theta : c.thetas) constants.push_back(heat::rate_constants(p, theta));
    bounds = sweep::check_rate_bounds(records, constants);
  }

  if (wants(c, OutputFormat::kCsv)) {
    const auto path = artifact(c, ".csv");
    sweep::emit_records(records, fits, path, OutputFormat::kCsv);
    result.written.push_back(path);
  }
  json summary = sweep::summary_json(records, fits, config_metadata(c));
  summary["rate_bounds"] = bounds ? bounds_json(*bounds) : json(nullptr);
  write_json(c, summary, result);

  out << to_string(c.command) << "  solver=" << to_string(c.solver) << "  alphas=" << records.size()
      << "  window: alpha*a >= " << fixed(sweep::kAsymptoticThreshold) << " (alpha >= "
      << fixed(sweep::asymptotic_window(e).lo, 4) << ")\n";
  print_fits(out, fits);

  bool failed = std::any_of(fits.begin(), fits.end(), [](const auto& f) { return !f.fit; });
  if (bounds) {
    const auto bad = bounds->violations();
    out << "  rate bounds: " << bounds->checks.size() << " checks, " << bad.size()
        << " violations -> " << (bad.empty() ? "HOLD" : "VIOLATED") << '\n';
    failed = failed || !bad.empty();
  } else {
    out << "  rate bounds: not checked for " << to_string(c.solver) << '\n';
  }
  if (failed && c.strict) result.status = kExitFailure;
  return result;
}

RunResult run_admissibility(const ExperimentConfig& c, std::ostream& out) {
  RunResult result;
  const heat::HeatProblem p = build_heat_problem(c);
  const heat::AdmissibilityReport r = heat::admissibility_diagnostic(p);

  std::ostringstream csv;
  csv << "M,partial_sum,partial_sum_over_M\n";
  for (std::size_t i = 0; i < r.partial_sums.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    csv << i + 1 << ',' << format_double(r.partial_sums[i]) << ','
        << format_double(r.partial_sums[i] / m) << '\n';
  }
  write_csv(c, csv.str(), result);

  json j = base_summary(c);
  j["classification"] = to_string(r.classification);
  j["growth_exponent"] = r.growth_exponent;
  j["divergence_exponent"] = heat::kDivergenceExponent;
  j["partial_sums"] = r.partial_sums;
  write_json(c, j, result);

  out << "admissibility  modes=" << p.truncation() << "  T=" << fixed(p.horizon()) << '\n';
  out << "       M          E_M        E_M/M\n";
  const std::size_t n = r.partial_sums.size();
  for (std::size_t m = 1; m <= n; m *= 2) {
    char line[96];
    const double e = r.partial_sums[m - 1];
    std::snprintf(line, sizeof line, "  %6zu  %11.6g  %11.6g\n", m, e, e / static_cast<double>(m));
    out << line;
    if (m * 2 > n && m != n) {
      std::snprintf(line, sizeof line, "  %6zu  %11.6g  %11.6g\n", n, r.partial_sums[n - 1],
                    r.partial_sums[n - 1] / static_cast<double>(n));
      out << line;
    }
  }
  out << "  growth exponent " << fixed(r.growth_exponent, 5) << " -> "
      << to_string(r.classification) << '\n';
  return result;
}

RunResult run_rate_constants(const ExperimentConfig& c, std::ostream& out) {
  RunResult result;
  const heat::HeatProblem p = build_heat_problem(c);
  std::ostringstream csv;
  csv << "theta,constant\n";
  json list = json::array();
  out << "rate-constants  modes=" << p.truncation() << '\n' << "   theta     C_theta\n";
  for (double theta : c.thetas) {
    const heat::RateConstants rc = heat::rate_constants(p, theta);
    csv << format_double(theta) << ',' << format_double(rc.value) << '\n';
    list.push_back({{"theta", theta}, {"constant", rc.value}});
    char line[80];
    std::snprintf(line, sizeof line, "  %6.4g  %11.6g\n", theta, rc.value);
    out << line;
  }
  write_csv(c, csv.str(), result);
  json j = base_summary(c);
  j["constants"] = list;
  write_json(c, j, result);
  return result;
}

RunResult run_compare(const ExperimentConfig& c, std::ostream& out, int threads) {
  RunResult result;
  sweep::Experiment e = build_experiment(c);
  e.solver = sweep::SolverTag::kHeatModal;
  const auto modal = sweep::run_sweep(e, c.alphas, threads);
  e.solver = sweep::SolverTag::kHeatFd;
  const auto fd = sweep::run_sweep(e, c.alphas, threads);
  const auto rows = sweep::compare_terminal_errors(modal, fd);

  std::ostringstream csv;
  csv << "alpha,modal_terminal_err,fd_terminal_err,abs_diff\n";
  double worst = 0.0;
  out << "compare  heat-modal vs heat-fd  nx=" << c.nx << " nt=" << c.nt
      << "  budget=" << fixed(c.budget) << '\n'
      << "       alpha        modal           fd      |diff|\n";
  for (const sweep::Discrepancy& d : rows) {
    csv << format_double(d.alpha) << ',' << format_double(d.reference) << ','
        << format_double(d.candidate) << ',' << format_double(d.absolute) << '\n';
    worst = std::max(worst, d.absolute);
    char line[120];
    std::snprintf(line, sizeof line, "  %10.4g  %11.6g  %11.6g  %10.3e%s\n", d.alpha, d.reference,
                  d.candidate, d.absolute, d.absolute <= c.budget ? "" : "  OVER");
    out << line;
  }
  write_csv(c, csv.str(), result);

  const bool ok = worst <= c.budget;
  json j = base_summary(c);
  j["budget"] = c.budget;
  j["max_abs_diff"] = worst;
  j["within_budget"] = ok;
  j["record_count"] = rows.size();
  write_json(c, j, result);

  out << "  max |diff| " << fixed(worst, 4) << (ok ? " within budget" : " exceeds budget") << '\n';
  if (!ok && c.strict) result.status = kExitFailure;
  return result;
}

}  // namespace

RunResult dispatch(const ExperimentConfig& config, std::ostream& out, int threads) {
  RunResult result;
  switch (config.command) {
    case Command::kRocketSweep:
    case Command::kHeatModalSweep:
    case Command::kHeatFdSweep:
      result = run_sweep_command(config, out, threads);
      break;
    case Command::kAdmissibility:
      result = run_admissibility(config, out);
      break;
    case Command::kRateConstants:
      result = run_rate_constants(config, out);
      break;
    case Command::kCompare:
      result = run_compare(config, out, threads);
      break;
  }
  for (const auto& path : result.written) out << "  wrote " << path.string() << '\n';
  return result;
}

}  // namespace soft2hard::cli

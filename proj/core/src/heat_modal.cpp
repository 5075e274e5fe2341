#include "soft2hard/heat_modal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "soft2hard/numeric.hpp"

namespace soft2hard::heat {

namespace {

using std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("heat: penalty must be finite and >= 0, got " +
                                format_double(alpha));
  }
}

void check_positive_alpha(double alpha) {
  check_alpha(alpha);
  if (alpha == 0.0) {
    throw std::invalid_argument("heat: error norms require a positive penalty");
  }
}

ModeQuantities make_mode(int n, double horizon, double y0, double yT) {
  ModeQuantities m;
  m.index = n;
  m.horizon = horizon;
  m.eigenvalue = (n * pi) * (n * pi);
  m.gram = -std::expm1(-2.0 * m.eigenvalue * horizon) / (2.0 * m.eigenvalue);
  m.mismatch = yT - std::exp(-m.eigenvalue * horizon) * y0;
  return m;
}

}  // namespace

// --- SineSpectrum ----------------------------------------------------------

SineSpectrum::SineSpectrum(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty()) {
    throw std::invalid_argument("SineSpectrum: truncation must be at least 1");
  }
  for (double c : coefficients_) {
    if (!std::isfinite(c)) {
      throw std::invalid_argument("SineSpectrum: non-finite coefficient");
    }
  }
}

SineSpectrum SineSpectrum::zeros(std::size_t modes) {
  return SineSpectrum(std::vector<double>(modes, 0.0));
}

SineSpectrum SineSpectrum::from_rule(std::size_t modes,
                                     const std::function<double(int)>& coefficient) {
  std::vector<double> c(modes);
  for (std::size_t i = 0; i < modes; ++i) c[i] = coefficient(static_cast<int>(i) + 1);
  return SineSpectrum(std::move(c));
}

double SineSpectrum::mode(int n) const {
  if (n < 1 || static_cast<std::size_t>(n) > coefficients_.size()) {
    throw std::out_of_range("SineSpectrum: mode " + std::to_string(n) +
                            " outside 1.." + std::to_string(coefficients_.size()));
  }
  return coefficients_[static_cast<std::size_t>(n) - 1];
}

SineSpectrum SineSpectrum::resized(std::size_t modes) const {
  std::vector<double> c = coefficients_;
  c.resize(modes, 0.0);
  return SineSpectrum(std::move(c));
}

double SineSpectrum::l2_norm() const {
  std::vector<double> sq(coefficients_.size());
  std::transform(coefficients_.begin(), coefficients_.end(), sq.begin(),
                 [](double c) { return c * c; });
  return std::sqrt(pairwise_sum(sq));
}

double SineSpectrum::evaluate(double x) const {
  std::vector<double> terms(coefficients_.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    terms[i] = coefficients_[i] * basis(static_cast<int>(i) + 1, x);
  }
  return pairwise_sum(terms);
}

double basis(int n, double x) { return std::numbers::sqrt2 * std::sin(n * pi * x); }

std::vector<double> sample_uniform(const std::function<double(double)>& f,
                                   std::size_t points) {
  if (points < 2) throw std::invalid_argument("sample_uniform: need >= 2 points");
  std::vector<double> samples(points);
  const double h = 1.0 / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) samples[i] = f(static_cast<double>(i) * h);
  return samples;
}

SineSpectrum sine_coefficients(std::span<const double> samples, int modes) {
  if (modes < 1) throw std::invalid_argument("sine_coefficients: N must be >= 1");
  const std::size_t m = samples.size();
  if (m < 2 * static_cast<std::size_t>(modes) + 2) {
    throw std::invalid_argument(
        "sine_coefficients: insufficient resolution, " + std::to_string(m) +
        " samples for " + std::to_string(modes) + " modes (need " +
        std::to_string(2 * modes + 2) + ")");
  }
  const double h = 1.0 / static_cast<double>(m - 1);
  std::vector<double> c(static_cast<std::size_t>(modes));
  std::vector<double> terms(m);
  for (int n = 1; n <= modes; ++n) {
    for (std::size_t i = 0; i < m; ++i) {
      const double w = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
      terms[i] = w * samples[i] * basis(n, static_cast<double>(i) * h);
    }
    c[static_cast<std::size_t>(n) - 1] = h * pairwise_sum(terms);
  }
  return SineSpectrum(std::move(c));
}

// --- Modes and problem -----------------------------------------------------

double ModeQuantities::influence(double s) const {
  return std::exp(-eigenvalue * (horizon - s));
}

HeatProblem::HeatProblem(double horizon, SineSpectrum initial, SineSpectrum target)
    : horizon_(horizon),
      initial_(initial.resized(std::max(initial.size(), target.size()))),
      target_(target.resized(std::max(initial.size(), target.size()))) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("HeatProblem: horizon must be positive, got " +
                                format_double(horizon));
  }
  const std::size_t n = truncation();
  modes_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    modes_.push_back(make_mode(static_cast<int>(i) + 1, horizon_,
                               initial_.coefficients()[i], target_.coefficients()[i]));
  }
}

ModeQuantities mode_quantities(const HeatProblem& p, int n) {
  if (n < 1 || static_cast<std::size_t>(n) > p.truncation()) {
    throw std::out_of_range("mode_quantities: index " + std::to_string(n) +
                            " outside 1.." + std::to_string(p.truncation()));
  }
  return p.modes()[static_cast<std::size_t>(n) - 1];
}

HeatProblem problem_from_mismatch(double horizon, const SineSpectrum& initial,
                                  std::size_t modes,
                                  const std::function<double(int)>& mismatch) {
  const SineSpectrum y0 = initial.resized(std::max(modes, initial.size()));
  std::vector<double> yT(y0.size(), 0.0);
  for (std::size_t i = 0; i < modes; ++i) {
    const int n = static_cast<int>(i) + 1;
    const double lambda = (n * pi) * (n * pi);
    yT[i] = mismatch(n) + std::exp(-lambda * horizon) * y0.coefficients()[i];
  }
  return HeatProblem(horizon, y0, SineSpectrum(std::move(yT)));
}

// --- Admissibility ---------------------------------------------------------

const char* to_string(Classification c) {
  return c == Classification::kDivergentLooking ? "divergent-looking"
                                                : "convergent-looking";
}

AdmissibilityReport admissibility_diagnostic(const HeatProblem& p) {
  const std::size_t N = p.truncation();
  if (N < 4) {
    throw std::invalid_argument("admissibility_diagnostic: needs N >= 4, got " +
                                std::to_string(N));
  }
  AdmissibilityReport report;
  report.partial_sums.resize(N);
  double running = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const ModeQuantities& m = p.modes()[i];
    running += m.mismatch * m.mismatch / m.gram;
    report.partial_sums[i] = running;
  }

  std::vector<double> log_m, log_e;
  for (std::size_t M = N / 2; M <= N; ++M) {
    const double e = report.partial_sums[M - 1];
    if (e > 0.0) {
      log_m.push_back(std::log(static_cast<double>(M)));
      log_e.push_back(std::log(e));
    }
  }
  if (log_m.size() >= 2) {
    report.growth_exponent = least_squares_line(log_m, log_e).slope;
  }
  report.classification = report.growth_exponent > kDivergenceExponent
                              ? Classification::kDivergentLooking
                              : Classification::kConvergentLooking;
  return report;
}

// --- Controls and errors ---------------------------------------------------

HardControl hard_control_coefficients(const HeatProblem& p) {
  HardControl h;
  h.amplitudes.reserve(p.truncation());
  std::vector<double> energy_terms;
  energy_terms.reserve(p.truncation());
  for (const ModeQuantities& m : p.modes()) {
    h.amplitudes.push_back(m.mismatch / m.gram);
    energy_terms.push_back(m.mismatch * m.mismatch / m.gram);
  }
  h.energy = pairwise_sum(energy_terms);
  return h;
}

std::vector<double> penalized_control_coefficients(const HeatProblem& p,
                                                   double alpha) {
  check_alpha(alpha);
  std::vector<double> c;
  c.reserve(p.truncation());
  for (const ModeQuantities& m : p.modes()) {
    c.push_back(alpha * m.mismatch / (1.0 + alpha * m.gram));
  }
  return c;
}

double penalized_energy(const HeatProblem& p, double alpha) {
  const std::vector<double> c = penalized_control_coefficients(p, alpha);
  std::vector<double> terms(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) terms[i] = c[i] * c[i] * p.modes()[i].gram;
  return pairwise_sum(terms);
}

SineSpectrum penalized_terminal_spectrum(const HeatProblem& p, double alpha) {
  check_alpha(alpha);
  std::vector<double> y(p.truncation());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const ModeQuantities& m = p.modes()[i];
    const double free = std::exp(-m.eigenvalue * m.horizon) * p.initial().coefficients()[i];
    const double beta = alpha * m.gram / (1.0 + alpha * m.gram);
    y[i] = free + beta * m.mismatch;
  }
  return SineSpectrum(std::move(y));
}

std::vector<double> terminal_error_by_mode(const HeatProblem& p, double alpha) {
  check_positive_alpha(alpha);
  std::vector<double> terms;
  terms.reserve(p.truncation());
  for (const ModeQuantities& m : p.modes()) {
    const double r = m.mismatch / (1.0 + alpha * m.gram);
    terms.push_back(r * r);
  }
  return terms;
}

std::vector<double> control_error_by_mode(const HeatProblem& p, double alpha) {
  check_positive_alpha(alpha);
  std::vector<double> terms;
  terms.reserve(p.truncation());
  for (const ModeQuantities& m : p.modes()) {
    const double r = m.mismatch / (1.0 + alpha * m.gram);
    terms.push_back(r * r / m.gram);
  }
  return terms;
}

double terminal_error(const HeatProblem& p, double alpha) {
  return std::sqrt(pairwise_sum(terminal_error_by_mode(p, alpha)));
}

double control_error(const HeatProblem& p, double alpha) {
  return std::sqrt(pairwise_sum(control_error_by_mode(p, alpha)));
}

RateConstants rate_constants(const HeatProblem& p, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("rate_constants: theta must lie in [0, 1], got " +
                                format_double(theta));
  }
  std::vector<double> terms;
  terms.reserve(p.truncation());
  for (const ModeQuantities& m : p.modes()) {
    terms.push_back(m.mismatch * m.mismatch / std::pow(m.gram, 1.0 + 2.0 * theta));
  }
  return {theta, std::sqrt(pairwise_sum(terms))};
}

// --- States ----------------------------------------------------------------

SineSpectrum modal_state_spectrum(const HeatProblem& p,
                                  std::span<const double> amplitudes, double t) {
  if (amplitudes.size() != p.truncation()) {
    throw std::invalid_argument("modal_state: expected " +
                                std::to_string(p.truncation()) + " amplitudes, got " +
                                std::to_string(amplitudes.size()));
  }
  if (!(t >= 0.0 && t <= p.horizon())) {
    throw std::domain_error("modal_state: time " + format_double(t) + " outside [0, T]");
  }
  std::vector<double> y(p.truncation());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const ModeQuantities& m = p.modes()[i];
    const double lam = m.eigenvalue;
    const double forced = amplitudes[i] * m.influence(t) *
                          (-std::expm1(-2.0 * lam * t)) / (2.0 * lam);
    y[i] = std::exp(-lam * t) * p.initial().coefficients()[i] + forced;
  }
  return SineSpectrum(std::move(y));
}

double modal_state(const HeatProblem& p, std::span<const double> amplitudes,
                   double x, double t) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("modal_state: position " + format_double(x) +
                            " outside [0, 1]");
  }
  return modal_state_spectrum(p, amplitudes, t).evaluate(x);
}

}  // namespace soft2hard::heat

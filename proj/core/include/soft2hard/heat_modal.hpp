#pragma once

// Spectral solution of the terminal-control problem for the 1-D heat equation
//
//   y_t - y_xx = u  in (0,1) x (0,T),   y = 0 on x = 0, 1,   y(., 0) = y_0,
//
// in the Dirichlet eigenbasis e_n(x) = sqrt(2) sin(n pi x), lambda_n = (n pi)^2.
// Each mode is an independent scalar problem with influence kernel
// g_n(s) = exp(-lambda_n (T - s)), Gram a_n = ||g_n||^2 and mismatch
// d_n = y_{T,n} - exp(-lambda_n T) y_{0,n}. All series are truncated at the
// problem's mode count N.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace soft2hard::heat {

/// Coefficients (c_1, ..., c_N) in the orthonormal sine basis. Index 0 holds
/// mode n = 1.
class SineSpectrum {
 public:
  /// Throws std::invalid_argument when empty or any entry is non-finite.
  explicit SineSpectrum(std::vector<double> coefficients);

  static SineSpectrum zeros(std::size_t modes);
  /// coefficient(n) for n = 1..modes.
  static SineSpectrum from_rule(std::size_t modes,
                                const std::function<double(int)>& coefficient);

  std::size_t size() const { return coefficients_.size(); }
  /// 1-based mode access.
  double mode(int n) const;
  const std::vector<double>& coefficients() const { return coefficients_; }

  /// Copy truncated or zero-padded to `modes` entries.
  SineSpectrum resized(std::size_t modes) const;

  /// L2(0,1) norm, which by Parseval equals the Euclidean coefficient norm.
  double l2_norm() const;

  /// Sum of c_n e_n(x).
  double evaluate(double x) const;

  friend bool operator==(const SineSpectrum&, const SineSpectrum&) = default;

 private:
  std::vector<double> coefficients_;
};

/// Trapezoid projection of samples f(x_i), x_i = i/(m-1), i = 0..m-1, onto
/// e_1..e_N. Throws std::invalid_argument when m < 2N + 2 or N < 1.
SineSpectrum sine_coefficients(std::span<const double> samples, int modes);

/// f sampled on the uniform grid used by sine_coefficients.
std::vector<double> sample_uniform(const std::function<double(double)>& f,
                                   std::size_t points);

/// Basis function e_n(x) = sqrt(2) sin(n pi x).
double basis(int n, double x);

struct ModeQuantities {
  int index = 0;
  double horizon = 0.0;
  double eigenvalue = 0.0;  // lambda_n
  double gram = 0.0;        // a_n
  double mismatch = 0.0;    // d_n

  /// g_n(s) = exp(-lambda_n (T - s)).
  double influence(double s) const;
};

class HeatProblem {
 public:
  /// Both spectra are zero-padded to the longer length. Throws
  /// std::invalid_argument unless horizon > 0.
  HeatProblem(double horizon, SineSpectrum initial, SineSpectrum target);

  double horizon() const { return horizon_; }
  std::size_t truncation() const { return initial_.size(); }
  const SineSpectrum& initial() const { return initial_; }
  const SineSpectrum& target() const { return target_; }
  const std::vector<ModeQuantities>& modes() const { return modes_; }

 private:
  double horizon_;
  SineSpectrum initial_;
  SineSpectrum target_;
  std::vector<ModeQuantities> modes_;
};

/// Throws std::out_of_range unless 1 <= n <= N.
ModeQuantities mode_quantities(const HeatProblem& p, int n);

/// Problem whose mode mismatches are exactly d_n = mismatch(n), with the
/// target back-solved from the initial spectrum.
HeatProblem problem_from_mismatch(double horizon, const SineSpectrum& initial,
                                  std::size_t modes,
                                  const std::function<double(int)>& mismatch);

enum class Classification { kConvergentLooking, kDivergentLooking };

const char* to_string(Classification c);

struct AdmissibilityReport {
  /// E_M = sum_{n <= M} d_n^2 / a_n for M = 1..N.
  std::vector<double> partial_sums;
  Classification classification = Classification::kConvergentLooking;
  /// Least-squares slope of log E_M against log M over M in [N/2, N].
  double growth_exponent = 0.0;
};

/// Growth exponents above this mark a series as divergent-looking.
inline constexpr double kDivergenceExponent = 0.5;

/// Requires N >= 4 (std::invalid_argument otherwise).
AdmissibilityReport admissibility_diagnostic(const HeatProblem& p);

struct HardControl {
  /// c_n = d_n / a_n; the control is sum_n c_n g_n(t) e_n(x).
  std::vector<double> amplitudes;
  /// ||u*||^2 = sum_n d_n^2 / a_n.
  double energy = 0.0;
};

HardControl hard_control_coefficients(const HeatProblem& p);

// Functions taking alpha throw std::invalid_argument for alpha < 0 or
// non-finite alpha; the error functions additionally require alpha > 0.

/// c_{alpha,n} = alpha d_n / (1 + alpha a_n).
std::vector<double> penalized_control_coefficients(const HeatProblem& p,
                                                   double alpha);

/// ||u_alpha||^2 = sum_n c_{alpha,n}^2 a_n.
double penalized_energy(const HeatProblem& p, double alpha);

/// y_{alpha,n}(T) = exp(-lambda_n T) y_{0,n} + alpha a_n / (1 + alpha a_n) d_n.
SineSpectrum penalized_terminal_spectrum(const HeatProblem& p, double alpha);

/// Per-mode d_n^2 / (1 + alpha a_n)^2.
std::vector<double> terminal_error_by_mode(const HeatProblem& p, double alpha);
/// Per-mode d_n^2 / (a_n (1 + alpha a_n)^2).
std::vector<double> control_error_by_mode(const HeatProblem& p, double alpha);

/// ||y_alpha(T) - y_T||_{L2(0,1)}.
double terminal_error(const HeatProblem& p, double alpha);
/// ||u_alpha - u*||_{L2(Q)}.
double control_error(const HeatProblem& p, double alpha);

struct RateConstants {
  double theta = 0.0;
  /// (sum_n d_n^2 / a_n^{1 + 2 theta})^{1/2}; bounds terminal_error by
  /// value * alpha^{-(1/2 + theta)} and control_error by value * alpha^{-theta}.
  double value = 0.0;
};

/// Throws std::invalid_argument unless 0 <= theta <= 1.
RateConstants rate_constants(const HeatProblem& p, double theta);

/// State at (x, t) under the control sum_n amplitudes[n-1] g_n(t) e_n(x).
/// Throws std::domain_error for x outside [0,1] or t outside [0,T] and
/// std::invalid_argument when amplitudes.size() != N.
double modal_state(const HeatProblem& p, std::span<const double> amplitudes,
                   double x, double t);

/// Per-mode state coefficients y_n(t) for the same control.
SineSpectrum modal_state_spectrum(const HeatProblem& p,
                                  std::span<const double> amplitudes, double t);

}  // namespace soft2hard::heat

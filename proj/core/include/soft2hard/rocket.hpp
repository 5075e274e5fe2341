#pragma once

// Closed-form solutions of the scalar rocket prototype
//
//   y''(t) = v(t) - 1,  y(0) = y'(0) = 0,  0 < t < T,
//
// with either the hard terminal condition y(T) = y_T or the quadratic
// terminal penalty (alpha/2) |y(T) - y_T|^2. The terminal position depends on
// the control only through the moment <v, g> with g(t) = T - t, so every
// optimal control is a multiple of g.

namespace soft2hard::rocket {

class RocketProblem {
 public:
  /// Throws std::invalid_argument unless horizon > 0 and both values finite.
  RocketProblem(double horizon, double target);

  double horizon() const { return horizon_; }
  double target() const { return target_; }

 private:
  double horizon_;
  double target_;
};

struct RocketDerived {
  /// d = y_T + T^2/2, the moment <v, g> the hard control must reach.
  double moment_target = 0.0;
  /// a = ||g||^2 = T^3/3.
  double gram = 0.0;

  /// beta = alpha a / (1 + alpha a); zero at alpha = 0.
  double contraction(double alpha) const;
};

RocketDerived rocket_derived(const RocketProblem& p);

// Pointwise evaluators. All throw std::domain_error for t outside [0, T] and
// std::invalid_argument for a negative or non-finite alpha.

double hard_control(const RocketProblem& p, double t);
double hard_state(const RocketProblem& p, double t);
double penalized_control(const RocketProblem& p, double alpha, double t);
double penalized_state(const RocketProblem& p, double alpha, double t);

struct RocketErrors {
  double control_err = 0.0;        // ||v_alpha - v*||_{L2(0,T)}
  double state_err = 0.0;          // ||y_alpha - y*||_{L2(0,T)}
  double terminal_mismatch = 0.0;  // |y_alpha(T) - y_T|
};

/// Exact control and terminal errors; the state error norm is evaluated with
/// composite Simpson on `quadrature_points` panels (rounded up to even).
/// Requires alpha > 0 and quadrature_points >= 2.
RocketErrors rocket_errors(const RocketProblem& p, double alpha,
                           int quadrature_points = 64);

}  // namespace soft2hard::rocket

#include "soft2hard/rocket.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "soft2hard/numeric.hpp"

namespace soft2hard::rocket {

namespace {

void check_time(const RocketProblem& p, double t) {
  if (!(t >= 0.0 && t <= p.horizon())) {
    throw std::domain_error("rocket: time " + format_double(t) +
                            " outside [0, " + format_double(p.horizon()) + "]");
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("rocket: penalty must be finite and >= 0, got " +
                                format_double(alpha));
  }
}

// y*(t) + t^2/2: the trajectory part driven by the hard control alone.
double hard_drive(const RocketProblem& p, double t) {
  const double T = p.horizon();
  const double d = rocket_derived(p).moment_target;
  return d / (2.0 * T * T * T) * t * t * (3.0 * T - t);
}

}  // namespace

RocketProblem::RocketProblem(double horizon, double target)
    : horizon_(horizon), target_(target) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("rocket: horizon must be positive, got " +
                                format_double(horizon));
  }
  if (!std::isfinite(target)) {
    throw std::invalid_argument("rocket: target must be finite");
  }
}

double RocketDerived::contraction(double alpha) const {
  const double s = alpha * gram;
  return s / (1.0 + s);
}

RocketDerived rocket_derived(const RocketProblem& p) {
  const double T = p.horizon();
  return {p.target() + 0.5 * T * T, T * T * T / 3.0};
}

double hard_control(const RocketProblem& p, double t) {
  check_time(p, t);
  const RocketDerived k = rocket_derived(p);
  return k.moment_target / k.gram * (p.horizon() - t);
}

double hard_state(const RocketProblem& p, double t) {
  check_time(p, t);
  return hard_drive(p, t) - 0.5 * t * t;
}

double penalized_control(const RocketProblem& p, double alpha, double t) {
  check_alpha(alpha);
  check_time(p, t);
  const RocketDerived k = rocket_derived(p);
  return alpha * k.moment_target / (1.0 + alpha * k.gram) * (p.horizon() - t);
}

double penalized_state(const RocketProblem& p, double alpha, double t) {
  check_alpha(alpha);
  check_time(p, t);
  const double beta = rocket_derived(p).contraction(alpha);
  return beta * hard_drive(p, t) - 0.5 * t * t;
}

RocketErrors rocket_errors(const RocketProblem& p, double alpha,
                           int quadrature_points) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("rocket_errors: penalty must be positive");
  }
  if (quadrature_points < 2) {
    throw std::invalid_argument("rocket_errors: need at least 2 quadrature points");
  }
  const RocketDerived k = rocket_derived(p);
  const double shrink = 1.0 / (1.0 + alpha * k.gram);
  const double drive_sq = simpson(
      [&](double t) {
        const double y = hard_drive(p, t);
        return y * y;
      },
      0.0, p.horizon(), quadrature_points);

  RocketErrors e;
  // ||v*|| = |d| ||g|| / ||g||^2.
  e.control_err = std::abs(k.moment_target) / std::sqrt(k.gram) * shrink;
  e.state_err = std::sqrt(drive_sq) * shrink;
  e.terminal_mismatch = std::abs(k.moment_target) * shrink;
  return e;
}

}  // namespace soft2hard::rocket

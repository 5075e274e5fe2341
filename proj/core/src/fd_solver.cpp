#include "soft2hard/fd_solver.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "soft2hard/numeric.hpp"

namespace soft2hard::fd {

namespace {

void check_length(const Eigen::VectorXd& v, int n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(n) + ", got " + std::to_string(v.size()));
  }
}

void check_field(const SpaceTimeGrid& grid, const Eigen::MatrixXd& u, const char* what) {
  if (u.rows() != grid.nx() || u.cols() != grid.nt()) {
    throw std::invalid_argument(std::string(what) + ": control field must be " +
                                std::to_string(grid.nx()) + "x" + std::to_string(grid.nt()) +
                                ", got " + std::to_string(u.rows()) + "x" +
                                std::to_string(u.cols()));
  }
}

void check_alpha(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("fd: penalty must be finite and >= 0, got " +
                                format_double(alpha));
  }
}

}  // namespace

SpaceTimeGrid::SpaceTimeGrid(int nx, int nt, double horizon)
    : nx_(nx), nt_(nt), horizon_(horizon) {
  if (nx < 3) throw std::invalid_argument("SpaceTimeGrid: nx must be >= 3");
  if (nt < 2) throw std::invalid_argument("SpaceTimeGrid: nt must be >= 2");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("SpaceTimeGrid: horizon must be positive");
  }
}

// --- Crank-Nicolson --------------------------------------------------------

HeatStepper::HeatStepper(const SpaceTimeGrid& grid) : grid_(grid) {
  const double r = grid.dt() / (grid.dx() * grid.dx());
  diag_ = 1.0 + r;
  off_ = -0.5 * r;
  const int n = grid.nx();
  upper_.resize(static_cast<std::size_t>(n));
  inv_pivot_.resize(static_cast<std::size_t>(n));
  double prev_upper = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pivot = diag_ - (i > 0 ? off_ * prev_upper : 0.0);
    // Strictly diagonally dominant for dt > 0, so the pivot stays >= 1.
    assert(pivot > 0.0);
    inv_pivot_[static_cast<std::size_t>(i)] = 1.0 / pivot;
    prev_upper = off_ / pivot;
    upper_[static_cast<std::size_t>(i)] = prev_upper;
  }
}

Eigen::VectorXd HeatStepper::solve_implicit(const Eigen::VectorXd& rhs) const {
  const int n = grid_.nx();
  Eigen::VectorXd z(n);
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double num = rhs(i) - (i > 0 ? off_ * prev : 0.0);
    prev = num * inv_pivot_[static_cast<std::size_t>(i)];
    z(i) = prev;
  }
  for (int i = n - 2; i >= 0; --i) z(i) -= upper_[static_cast<std::size_t>(i)] * z(i + 1);
  return z;
}

Eigen::VectorXd HeatStepper::apply_explicit(const Eigen::VectorXd& y) const {
  // I + dt/2 L has diagonal 2 - diag_ and off-diagonal -off_.
  const int n = grid_.nx();
  Eigen::VectorXd out(n);
  const double d = 2.0 - diag_;
  for (int i = 0; i < n; ++i) {
    double v = d * y(i);
    if (i > 0) v -= off_ * y(i - 1);
    if (i + 1 < n) v -= off_ * y(i + 1);
    out(i) = v;
  }
  return out;
}

Eigen::VectorXd HeatStepper::step(const Eigen::VectorXd& y, const Eigen::VectorXd& u) const {
  return solve_implicit(apply_explicit(y) + grid_.dt() * u);
}

// --- Inner products --------------------------------------------------------

Eigen::VectorXd space_inner_weights(const SpaceTimeGrid& grid) {
  return Eigen::VectorXd::Constant(grid.nx(), grid.dx());
}

double space_inner(const SpaceTimeGrid& grid, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b) {
  check_length(a, grid.nx(), "space_inner");
  check_length(b, grid.nx(), "space_inner");
  return grid.dx() * a.dot(b);
}

double space_norm(const SpaceTimeGrid& grid, const Eigen::VectorXd& a) {
  return std::sqrt(space_inner(grid, a, a));
}

double spacetime_inner(const SpaceTimeGrid& grid, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& v) {
  check_field(grid, u, "spacetime_inner");
  check_field(grid, v, "spacetime_inner");
  return grid.dx() * grid.dt() * u.cwiseProduct(v).sum();
}

double spacetime_norm(const SpaceTimeGrid& grid, const Eigen::MatrixXd& u) {
  return std::sqrt(spacetime_inner(grid, u, u));
}

// --- Forward / adjoint -----------------------------------------------------

Eigen::VectorXd step_heat(const Eigen::VectorXd& state,
                          const Eigen::VectorXd& control_slice,
                          const SpaceTimeGrid& grid) {
  check_length(state, grid.nx(), "step_heat state");
  check_length(control_slice, grid.nx(), "step_heat control");
  return HeatStepper(grid).step(state, control_slice);
}

ForwardResult solve_forward(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0,
                            const Eigen::MatrixXd& control, bool keep_trajectory) {
  check_length(y0, grid.nx(), "solve_forward y0");
  check_field(grid, control, "solve_forward");
  const HeatStepper stepper(grid);
  ForwardResult result;
  if (keep_trajectory) {
    result.trajectory.emplace(grid.nx(), grid.nt() + 1);
    result.trajectory->col(0) = y0;
  }
  Eigen::VectorXd y = y0;
  for (int k = 0; k < grid.nt(); ++k) {
    y = stepper.step(y, control.col(k));
    if (keep_trajectory) result.trajectory->col(k + 1) = y;
  }
  result.terminal = std::move(y);
  return result;
}

Eigen::VectorXd apply_control_map(const SpaceTimeGrid& grid,
                                  const Eigen::MatrixXd& control) {
  return solve_forward(grid, Eigen::VectorXd::Zero(grid.nx()), control).terminal;
}

Eigen::MatrixXd apply_adjoint(const SpaceTimeGrid& grid, const Eigen::VectorXd& w) {
  check_length(w, grid.nx(), "apply_adjoint");
  const HeatStepper stepper(grid);
  // (B^T w)_k = M^{-1} A^{nt-1-k} w with M = I - dt/2 L, A = M^{-1}(I + dt/2 L);
  // the dx and dt weights of the two inner products cancel.
  Eigen::MatrixXd v(grid.nx(), grid.nt());
  Eigen::VectorXd q = w;
  for (int k = grid.nt() - 1; k >= 0; --k) {
    v.col(k) = stepper.solve_implicit(q);
    q = stepper.apply_explicit(v.col(k));
  }
  return v;
}

Eigen::VectorXd free_decay(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0) {
  return solve_forward(grid, y0, Eigen::MatrixXd::Zero(grid.nx(), grid.nt())).terminal;
}

TerminalGram assemble_terminal_gram(const SpaceTimeGrid& grid, int threads) {
  TerminalGram g{Eigen::MatrixXd(grid.nx(), grid.nx())};
  parallel_for(static_cast<std::size_t>(grid.nx()), threads, [&](std::size_t j) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(grid.nx(), static_cast<Eigen::Index>(j));
    g.matrix.col(static_cast<Eigen::Index>(j)) = apply_control_map(grid, apply_adjoint(grid, e));
  });
  return g;
}

// --- Penalized optimum -----------------------------------------------------

DiscreteSolution penalized_optimal_control_fd(const SpaceTimeGrid& grid,
                                              const Eigen::VectorXd& y0,
                                              const Eigen::VectorXd& yT, double alpha,
                                              const TerminalGram* gram) {
  check_alpha(alpha);
  check_length(y0, grid.nx(), "penalized_optimal_control_fd y0");
  check_length(yT, grid.nx(), "penalized_optimal_control_fd yT");
  std::optional<TerminalGram> owned;
  if (gram == nullptr) {
    owned = assemble_terminal_gram(grid);
    gram = &*owned;
  }
  const Eigen::MatrixXd& G = gram->matrix;
  const Eigen::VectorXd d_hat = yT - free_decay(grid, y0);

  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(grid.nx(), grid.nx()) + alpha * G;
  const Eigen::LLT<Eigen::MatrixXd> reduced(system);
  if (reduced.info() != Eigen::Success) {
    throw std::runtime_error("penalized_optimal_control_fd: I + alpha G not SPD at alpha=" +
                             format_double(alpha));
  }
  const Eigen::VectorXd m = reduced.solve(d_hat);

  DiscreteSolution s;
  s.control = alpha * apply_adjoint(grid, m);
  s.terminal_state = solve_forward(grid, y0, s.control).terminal;
  s.terminal_mismatch = -m;
  s.terminal_mismatch_norm = space_norm(grid, m);
  s.control_norm = spacetime_norm(grid, s.control);

  // u_alpha - u* = -B^T G^{-1} m, so its squared norm is <m, G^{-1} m>_x.
  const Eigen::LLT<Eigen::MatrixXd> gram_factor(G);
  if (gram_factor.info() != Eigen::Success) {
    throw std::runtime_error("penalized_optimal_control_fd: terminal Gram not SPD");
  }
  s.control_error = std::sqrt(std::max(0.0, space_inner(grid, m, gram_factor.solve(m))));
  return s;
}

double discrete_objective(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0,
                          const Eigen::VectorXd& yT, double alpha,
                          const Eigen::MatrixXd& control) {
  check_alpha(alpha);
  const Eigen::VectorXd r = solve_forward(grid, y0, control).terminal - yT;
  return 0.5 * spacetime_inner(grid, control, control) + 0.5 * alpha * space_inner(grid, r, r);
}

Eigen::MatrixXd discrete_gradient(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0,
                                  const Eigen::VectorXd& yT, double alpha,
                                  const Eigen::MatrixXd& control) {
  check_alpha(alpha);
  const Eigen::VectorXd r = solve_forward(grid, y0, control).terminal - yT;
  return control + alpha * apply_adjoint(grid, r);
}

// --- Rocket ----------------------------------------------------------------

RocketDiscreteSolution rocket_discrete_solve(double horizon, double target,
                                             double alpha, int nt) {
  if (nt < 2) throw std::invalid_argument("rocket_discrete_solve: nt must be >= 2");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("rocket_discrete_solve: horizon must be positive");
  }
  check_alpha(alpha);
  const double dt = horizon / nt;
  const Eigen::Index nodes = nt + 1;
  Eigen::VectorXd t(nodes), w(nodes), g(nodes);
  for (Eigen::Index k = 0; k < nodes; ++k) {
    t(k) = static_cast<double>(k) * dt;
    w(k) = (k == 0 || k == nodes - 1) ? 0.5 * dt : dt;
    g(k) = horizon - t(k);
  }
  const double d = target + 0.5 * horizon * horizon;

  RocketDiscreteSolution s;
  s.gram = (w.array() * g.array() * g.array()).sum();
  s.control = (alpha * d / (1.0 + alpha * s.gram)) * g;
  const Eigen::VectorXd hard = (d / s.gram) * g;

  s.terminal_mismatch = std::abs((w.array() * s.control.array() * g.array()).sum() - d);
  const Eigen::ArrayXd dv = (s.control - hard).array();
  s.control_err = std::sqrt((w.array() * dv * dv).sum());

  // y(t_k) = int_0^{t_k} (t_k - s)(v(s) - 1) ds by the trapezoid rule.
  auto trajectory = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nodes);
    for (Eigen::Index k = 1; k < nodes; ++k) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j <= k; ++j) {
        const double wj = (j == 0 || j == k) ? 0.5 * dt : dt;
        acc += wj * (t(k) - t(j)) * (v(j) - 1.0);
      }
      y(k) = acc;
    }
    return y;
  };
  const Eigen::ArrayXd dy = (trajectory(s.control) - trajectory(hard)).array();
  s.state_err = std::sqrt((w.array() * dy * dy).sum());
  return s;
}

}  // namespace soft2hard::fd

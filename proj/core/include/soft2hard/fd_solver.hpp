#pragma once

// Finite-difference counterpart of the modal solver.
//
// Space: nx interior nodes x_i = i dx, dx = 1/(nx+1), homogeneous Dirichlet.
// Time:  nt Crank-Nicolson steps of size dt = T/nt. The control is piecewise
// constant in time: column k of a control field is the value at the midpoint
// of step k, which is the average of the adjacent nodal slices.
//
//   (I - dt/2 L) y^{k+1} = (I + dt/2 L) y^k + dt u_k
//
// Inner products are weighted, <y, w>_x = dx sum y_i w_i on the terminal
// space and <u, v>_Q = dx dt sum u_ik v_ik on space-time, so B^T below is the
// true adjoint of the control-to-terminal-state map B.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace soft2hard::fd {

class SpaceTimeGrid {
 public:
  /// Throws std::invalid_argument unless nx >= 3, nt >= 2 and horizon > 0.
  SpaceTimeGrid(int nx, int nt, double horizon);

  int nx() const { return nx_; }
  int nt() const { return nt_; }
  double horizon() const { return horizon_; }
  double dx() const { return 1.0 / (nx_ + 1); }
  double dt() const { return horizon_ / nt_; }
  /// Position of interior node i (0-based).
  double x(int i) const { return (i + 1) * dx(); }

  /// f evaluated at the interior nodes.
  template <typename F>
  Eigen::VectorXd sample(F&& f) const {
    Eigen::VectorXd v(nx_);
    for (int i = 0; i < nx_; ++i) v(i) = f(x(i));
    return v;
  }

 private:
  int nx_;
  int nt_;
  double horizon_;
};

/// Pre-factored Crank-Nicolson stepper for one grid.
class HeatStepper {
 public:
  explicit HeatStepper(const SpaceTimeGrid& grid);

  /// One forward step with control slice u (already at the half step).
  Eigen::VectorXd step(const Eigen::VectorXd& y, const Eigen::VectorXd& u) const;
  /// Solves (I - dt/2 L) z = rhs.
  Eigen::VectorXd solve_implicit(const Eigen::VectorXd& rhs) const;
  /// (I + dt/2 L) y.
  Eigen::VectorXd apply_explicit(const Eigen::VectorXd& y) const;

  const SpaceTimeGrid& grid() const { return grid_; }

 private:
  SpaceTimeGrid grid_;
  double diag_;  // 1 + dt/dx^2
  double off_;   // -dt/(2 dx^2)
  // Thomas factorization of the constant implicit matrix.
  std::vector<double> upper_;
  std::vector<double> inv_pivot_;
};

Eigen::VectorXd space_inner_weights(const SpaceTimeGrid& grid);
double space_inner(const SpaceTimeGrid& grid, const Eigen::VectorXd& a,
                   const Eigen::VectorXd& b);
double space_norm(const SpaceTimeGrid& grid, const Eigen::VectorXd& a);
double spacetime_inner(const SpaceTimeGrid& grid, const Eigen::MatrixXd& u,
                       const Eigen::MatrixXd& v);
double spacetime_norm(const SpaceTimeGrid& grid, const Eigen::MatrixXd& u);

/// Single Crank-Nicolson step. Throws std::invalid_argument on length mismatch.
Eigen::VectorXd step_heat(const Eigen::VectorXd& state,
                          const Eigen::VectorXd& control_slice,
                          const SpaceTimeGrid& grid);

struct ForwardResult {
  Eigen::VectorXd terminal;
  /// nx x (nt+1) states at the time nodes, filled when requested.
  std::optional<Eigen::MatrixXd> trajectory;
};

/// Control field is nx x nt. Throws std::invalid_argument on shape mismatch.
ForwardResult solve_forward(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0,
                            const Eigen::MatrixXd& control,
                            bool keep_trajectory = false);

/// B u: terminal state from zero initial data.
Eigen::VectorXd apply_control_map(const SpaceTimeGrid& grid,
                                  const Eigen::MatrixXd& control);
/// B^T w: reverse-time adjoint sweep, an nx x nt control field.
Eigen::MatrixXd apply_adjoint(const SpaceTimeGrid& grid, const Eigen::VectorXd& w);
/// S y0: free decay over the horizon.
Eigen::VectorXd free_decay(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0);

struct TerminalGram {
  /// Coordinate matrix of B B^T on the terminal space.
  Eigen::MatrixXd matrix;
};

/// Column j is B(B^T e_j). Columns are independent and assembled on up to
/// `threads` workers with identical results for any thread count.
TerminalGram assemble_terminal_gram(const SpaceTimeGrid& grid, int threads = 1);

struct DiscreteSolution {
  Eigen::MatrixXd control;            // nx x nt
  Eigen::VectorXd terminal_state;     // forward simulation of the control
  Eigen::VectorXd terminal_mismatch;  // reduced-system value, B u - d_hat
  double terminal_mismatch_norm = 0.0;
  double control_norm = 0.0;
  /// ||u_alpha - u*||_Q against the discrete minimum-norm exact control.
  double control_error = 0.0;
};

/// Minimizes 1/2 ||u||_Q^2 + alpha/2 ||B u - d_hat||_x^2, d_hat = yT - S y0,
/// through (I + alpha G) m = d_hat, u = alpha B^T m. Reuses `gram` when given.
DiscreteSolution penalized_optimal_control_fd(const SpaceTimeGrid& grid,
                                              const Eigen::VectorXd& y0,
                                              const Eigen::VectorXd& yT, double alpha,
                                              const TerminalGram* gram = nullptr);

/// J(u) = 1/2 ||u||_Q^2 + alpha/2 ||S y0 + B u - yT||_x^2.
double discrete_objective(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0,
                          const Eigen::VectorXd& yT, double alpha,
                          const Eigen::MatrixXd& control);
/// Riesz representative of dJ in the <.,.>_Q inner product:
/// u + alpha B^T (S y0 + B u - yT).
Eigen::MatrixXd discrete_gradient(const SpaceTimeGrid& grid, const Eigen::VectorXd& y0,
                                  const Eigen::VectorXd& yT, double alpha,
                                  const Eigen::MatrixXd& control);

// --- Rocket --------------------------------------------------------------

struct RocketDiscreteSolution {
  /// Thrust at the nt+1 time nodes t_k = k T/nt.
  Eigen::VectorXd control;
  /// Trapezoid Gram a_h = <g, g>_h.
  double gram = 0.0;
  double terminal_mismatch = 0.0;  // |<v, g>_h - d|
  double control_err = 0.0;        // ||v - v_h*||_h
  double state_err = 0.0;          // ||y - y_h*||_h
};

/// Trapezoid-discretized rocket problem with the rank-one closed-form solve.
/// Throws std::invalid_argument unless nt >= 2, T > 0 and alpha >= 0.
RocketDiscreteSolution rocket_discrete_solve(double horizon, double target,
                                             double alpha, int nt);

}  // namespace soft2hard::fd

#pragma once

// Reference computations used only by the tests. Each one reaches its answer
// by a route that does not go through the library code it is compared with.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "soft2hard/fd_solver.hpp"
#include "soft2hard/heat_modal.hpp"

namespace soft2hard::testing {

using Real50 = boost::multiprecision::cpp_dec_float_50;

/// lambda_n, a_n, d_n in 50-digit decimal arithmetic.
struct ModeReference {
  double eigenvalue;
  double gram;
  double mismatch;
};

inline ModeReference mode_reference(int n, double horizon, double y0n, double yTn) {
  const Real50 pi = boost::math::constants::pi<Real50>();
  const Real50 lam = Real50(n) * Real50(n) * pi * pi;
  const Real50 T(horizon);
  const Real50 gram = (Real50(1) - exp(Real50(-2) * lam * T)) / (Real50(2) * lam);
  const Real50 d = Real50(yTn) - exp(-lam * T) * Real50(y0n);
  return {lam.convert_to<double>(), gram.convert_to<double>(), d.convert_to<double>()};
}

/// Discrete rocket problem solved as a generic equality-free QP: the full
/// (nt+1)x(nt+1) normal equations (W + alpha W g g^T W) v = alpha d W g of the
/// trapezoid-discretized functional, solved by dense LU. With alpha < 0 the
/// hard-constrained KKT system is solved instead.
inline Eigen::VectorXd rocket_qp(double horizon, double target, double alpha, int nt) {
  const double dt = horizon / nt;
  const int m = nt + 1;
  Eigen::VectorXd w(m), g(m);
  for (int k = 0; k < m; ++k) {
    w(k) = (k == 0 || k == nt) ? 0.5 * dt : dt;
    g(k) = horizon - k * dt;
  }
  const double d = target + 0.5 * horizon * horizon;
  const Eigen::VectorXd wg = w.cwiseProduct(g);
  if (alpha < 0.0) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    kkt.topLeftCorner(m, m) = w.asDiagonal();
    kkt.block(0, m, m, 1) = wg;
    kkt.block(m, 0, 1, m) = wg.transpose();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs(m) = d;
    return kkt.fullPivLu().solve(rhs).head(m);
  }
  Eigen::MatrixXd H = Eigen::MatrixXd(w.asDiagonal()) + alpha * wg * wg.transpose();
  return H.fullPivLu().solve(alpha * d * wg);
}

/// Adaptive-free high-resolution Simpson for smooth integrands.
inline double fine_simpson(const std::function<double(double)>& f, double a, double b,
                           int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Control-to-terminal matrix built column by column from nx*nt forward
/// responses to unit controls (no adjoint involved).
inline Eigen::MatrixXd brute_force_control_matrix(const fd::SpaceTimeGrid& grid) {
  const int nx = grid.nx();
  const int nt = grid.nt();
  Eigen::MatrixXd Bmat(nx, nx * nt);
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(nx, nt);
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i < nx; ++i) {
      u(i, k) = 1.0;
      Bmat.col(k * nx + i) = fd::apply_control_map(grid, u);
      u(i, k) = 0.0;
    }
  }
  return Bmat;
}

/// Discrete Dirichlet sine mode sqrt(2) sin(n pi x_i).
inline Eigen::VectorXd discrete_mode(const fd::SpaceTimeGrid& grid, int n) {
  return grid.sample([n](double x) { return heat::basis(n, x); });
}

/// Eigenvalue 2(1 - cos(n pi dx))/dx^2 of the negative second difference.
inline double discrete_eigenvalue(const fd::SpaceTimeGrid& grid, int n) {
  const double dx = grid.dx();
  return 2.0 * (1.0 - std::cos(n * M_PI * dx)) / (dx * dx);
}

inline heat::SineSpectrum random_spectrum(std::mt19937_64& rng, std::size_t modes) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> c(modes);
  for (double& v : c) v = coef(rng);
  return heat::SineSpectrum(std::move(c));
}

}  // namespace soft2hard::testing

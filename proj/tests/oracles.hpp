#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <Eigen/Dense>

#include "memmo/ocp.hpp"

namespace memmo::testing {

struct LqrSolution {
  Eigen::MatrixXd xs;  // nx x T
  Eigen::MatrixXd us;  // nu x (T-1)
};

/// Direct Riccati recursion with affine dynamics and affine-quadratic costs.
/// Cost expansions are read once at (x, u) = (0, 0); exact for problems whose
/// terms are all quadratic.
inline LqrSolution solve_lqr_riccati(const OcProblem& problem) {
  const Eigen::Index nx = problem.state_dim();
  const Eigen::Index nu = problem.control_dim();
  const Eigen::Index T = problem.T;
  const Eigen::VectorXd x_zero = Eigen::VectorXd::Zero(nx);
  const Eigen::VectorXd u_zero = Eigen::VectorXd::Zero(nu);

  std::vector<CostExpansion> expansions(static_cast<std::size_t>(T));
  for (Eigen::Index t = 0; t < T; ++t) {
    expansions[static_cast<std::size_t>(t)].resize(nx, nu);
    problem.knot_expansion(t, x_zero, u_zero, expansions[static_cast<std::size_t>(t)]);
  }

  std::vector<Eigen::MatrixXd> K(static_cast<std::size_t>(T - 1));
  std::vector<Eigen::VectorXd> k(static_cast<std::size_t>(T - 1));

  Eigen::MatrixXd P = expansions[static_cast<std::size_t>(T - 1)].lxx;
  Eigen::VectorXd p = expansions[static_cast<std::size_t>(T - 1)].lx;
  for (Eigen::Index t = T - 2; t >= 0; --t) {
    const std::size_t st = static_cast<std::size_t>(t);
    const CostExpansion& e = expansions[st];
    const AffineDynamics& dyn = problem.dynamics(t);
    const Eigen::VectorXd pc = p + P * dyn.c;
    const Eigen::VectorXd Qx = e.lx + dyn.A.transpose() * pc;
    const Eigen::VectorXd Qu = e.lu + dyn.B.transpose() * pc;
    const Eigen::MatrixXd Qxx = e.lxx + dyn.A.transpose() * P * dyn.A;
    const Eigen::MatrixXd Quu = e.luu + dyn.B.transpose() * P * dyn.B;
    const Eigen::MatrixXd Qxu = e.lxu + dyn.A.transpose() * P * dyn.B;

    const Eigen::MatrixXd Quu_inv = Quu.inverse();
    K[st] = Quu_inv * Qxu.transpose();
    k[st] = Quu_inv * Qu;
    P = Qxx - Qxu * K[st];
    P = 0.5 * (P + P.transpose()).eval();
    p = Qx - Qxu * k[st];
  }

  LqrSolution sol;
  sol.xs.resize(nx, T);
  sol.us.resize(nu, T - 1);
  sol.xs.col(0) = problem.x0;
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    const std::size_t st = static_cast<std::size_t>(t);
    sol.us.col(t) = -k[st] - K[st] * sol.xs.col(t);
    const AffineDynamics& dyn = problem.dynamics(t);
    sol.xs.col(t + 1) = dyn.A * sol.xs.col(t) + dyn.B * sol.us.col(t) + dyn.c;
  }
  return sol;
}

/// Central-difference gradient of a cost term in the state argument.
inline Eigen::VectorXd fd_gradient_x(const CostTerm& term, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    const double fp = term.value(xp, u);
    xp[i] = x[i] - h;
    const double fm = term.value(xp, u);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

inline Eigen::VectorXd fd_gradient_u(const CostTerm& term, const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& u, double h = 1e-5) {
  Eigen::VectorXd g(u.size());
  Eigen::VectorXd up = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    up[i] = u[i] + h;
    const double fp = term.value(x, up);
    up[i] = u[i] - h;
    const double fm = term.value(x, up);
    up[i] = u[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Central differences of the term's analytic gradient over a combined
/// (x, u) perturbation; returns the full (nx+nu)^2 Hessian. Differencing the
/// gradient instead of the value keeps roundoff well below the 1e-5 check
/// tolerance even for stiff terms.
inline Eigen::MatrixXd fd_hessian(const CostTerm& term, const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u, double h = 1e-6) {
  const Eigen::Index nx = x.size();
  const Eigen::Index nu = u.size();
  const Eigen::Index n = nx + nu;
  Eigen::MatrixXd H(n, n);
  Eigen::VectorXd z(n);
  z << x, u;
  auto gradient = [&](const Eigen::VectorXd& zz) {
    CostExpansion e;
    e.resize(nx, nu);
    term.accumulate(zz.head(nx), zz.tail(nu), e);
    Eigen::VectorXd g(n);
    g << e.lx, e.lu;
    return g;
  };
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd zz = z;
    zz[j] += h;
    const Eigen::VectorXd gp = gradient(zz);
    zz[j] = z[j] - h;
    const Eigen::VectorXd gm = gradient(zz);
    H.col(j) = (gp - gm) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

/// Exact conditional mean of a joint Gaussian fitted to data (maximum
/// likelihood, 1/N normalization): E[y | x].
inline Eigen::VectorXd gaussian_conditional_mean(const Eigen::MatrixXd& X,
                                                 const Eigen::MatrixXd& Y,
                                                 const Eigen::VectorXd& x_query) {
  const Eigen::Index n = X.rows();
  const Eigen::Index dx = X.cols();
  const Eigen::Index dy = Y.cols();
  Eigen::MatrixXd Z(n, dx + dy);
  Z << X, Y;
  const Eigen::RowVectorXd mean = Z.colwise().mean();
  const Eigen::MatrixXd centered = Z.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
  const Eigen::MatrixXd cov_xx = cov.topLeftCorner(dx, dx);
  const Eigen::MatrixXd cov_yx = cov.bottomLeftCorner(dy, dx);
  return mean.tail(dy).transpose() +
         cov_yx * cov_xx.inverse() * (x_query - mean.head(dx).transpose());
}

}  // namespace memmo::testing

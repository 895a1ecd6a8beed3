#pragma once

#include <Eigen/Core>

namespace memmo {

/// Isotropic squared-exponential kernel with additive observation noise.
struct GprKernel {
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
};

/// Exact GP regression over vector-valued outputs with a shared kernel and
/// zero mean function. Fitting factors the Gram matrix once (O(N^3)); each
/// prediction then costs O(N M + N d).
struct GprModel {
  Eigen::MatrixXd X;  // N x d training inputs
  Eigen::MatrixXd Y;  // N x m training outputs
  GprKernel kernel;
  Eigen::MatrixXd factor;  // lower Cholesky of K(X,X) + noise I
  Eigen::MatrixXd alpha;   // (K + noise I)^{-1} Y
};

double gpr_kernel_value(const GprKernel& kernel, const Eigen::VectorXd& a,
                        const Eigen::VectorXd& b);

/// Median-heuristic lengthscale, output-variance signal level, and a small
/// relative noise floor.
GprKernel default_gpr_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

/// Grid-refines the lengthscale around the median heuristic by held-out
/// error: the tail `n_holdout` rows validate kernels fitted on the rest, and
/// the best multiplier wins. Deterministic, no randomness involved.
GprKernel refine_gpr_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            Eigen::Index n_holdout = 0);

/// Throws if the Gram matrix stays non-SPD after jitter escalation.
GprModel gpr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const GprKernel& kernel);

/// Posterior mean at a query point.
Eigen::VectorXd gpr_predict(const GprModel& model, const Eigen::VectorXd& x);

/// Scalar posterior variance (shared across output dimensions); computed on
/// demand, predictions use the mean only.
double gpr_predict_variance(const GprModel& model, const Eigen::VectorXd& x);

}  // namespace memmo

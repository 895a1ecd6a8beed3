#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace memmo {

struct EmConfig {
  int max_iters = 200;
  double tolerance = 1e-7;        // stop when the log-likelihood gain drops below
  double covariance_floor = 1e-6; // added to every covariance diagonal each M-step
  int restarts = 5;               // best-of-restarts, seeds derived from the fit seed
};

struct GmrComponent {
  double weight = 1.0;
  Eigen::VectorXd mean;        // joint (x, y)
  Eigen::MatrixXd covariance;  // joint, SPD after flooring
};

/// Joint Gaussian mixture over (x, y), fit by EM with k-means++ style
/// initialization; prediction conditions each component on x and
/// moment-matches the mixture.
struct GmrModel {
  std::vector<GmrComponent> components;
  Eigen::Index input_dim = 0;
  std::vector<double> em_log_likelihoods;  // winning restart, one entry per EM iteration
  double final_log_likelihood = 0.0;
  bool floored = false;  // a component collapsed and needed extra regularization
};

GmrModel gmr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int n_components,
                 std::uint64_t seed, const EmConfig& config = {});

/// Posterior component responsibilities p(k | x); sums to one.
Eigen::VectorXd gmr_responsibilities(const GmrModel& model, const Eigen::VectorXd& x);

/// Moment-matched conditional mean sum_k p(k|x) (mu_y + S_yx S_xx^{-1} (x - mu_x)).
Eigen::VectorXd gmr_predict(const GmrModel& model, const Eigen::VectorXd& x);

}  // namespace memmo

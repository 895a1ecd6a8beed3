#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

namespace memmo {

/// Dirichlet-process mixture prior: Normal-inverse-Wishart base measure over
/// joint (x, y) Gaussians, stick-breaking mixing with concentration alpha,
/// truncated at a maximum component count.
struct BgmrPriorConfig {
  double concentration = 1.0;  // DP alpha
  double kappa = 0.01;         // prior mean strength
  double dof_offset = 2.0;     // nu0 = dim + dof_offset
  std::optional<Eigen::VectorXd> prior_mean;   // default: data mean
  std::optional<Eigen::MatrixXd> prior_scale;  // default: diagonal of the data covariance
  int burn_in_sweeps = 50;
  int kept_sweeps = 50;
};

/// One posterior mixture component: the NIW posterior over its Gaussian and
/// the derived joint predictive t-distribution.
struct BgmrComponent {
  double weight = 0.0;   // posterior mixing proportion (occupancy based)
  int count = 0;
  Eigen::VectorXd mean;  // NIW posterior location m_n
  double kappa = 0.0;    // NIW posterior strength
  double nu = 0.0;       // NIW posterior degrees of freedom
  Eigen::MatrixXd psi;   // NIW posterior scale matrix
  double t_dof = 0.0;    // predictive dof = nu - dim + 1
  Eigen::MatrixXd t_scale;
};

struct BgmrModel {
  int truncation = 0;
  bool truncation_saturated = false;
  Eigen::Index input_dim = 0;
  std::vector<BgmrComponent> components;
};

/// One predictive mode: the component's posterior probability at the query
/// and its conditional mean (linear in the query).
struct BgmrMode {
  double probability = 0.0;
  Eigen::VectorXd mean;
};

/// Posterior by collapsed Gibbs sampling; the returned model summarizes the
/// best-scoring kept sweep, so repeated fits with one seed are identical.
/// The effective component count is whatever the data occupies; a fully
/// saturated truncation is flagged on the model.
BgmrModel bgmr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int truncation,
                   const BgmrPriorConfig& prior, std::uint64_t seed);

/// Per-component probabilities and conditional means at the query, sorted by
/// descending probability. Top-1 is the point prediction; top-2 exposes
/// multimodal structure.
std::vector<BgmrMode> bgmr_predict(const BgmrModel& model, const Eigen::VectorXd& x);

}  // namespace memmo

#pragma once

#include <Eigen/Core>

namespace memmo {

/// Principal-component model over stacked RBF weight vectors.
struct PcaModel {
  Eigen::VectorXd mean;        // DK
  Eigen::MatrixXd components;  // M x DK, orthonormal rows
  Eigen::VectorXd eigenvalues; // M, descending
  double discarded_variance = 0.0;  // sum of the eigenvalues not retained

  Eigen::Index input_dim() const { return mean.size(); }
  Eigen::Index retained() const { return components.rows(); }
};

/// Fits the top-M principal components of the rows of W (N x DK). Eigen
/// decomposition of the (N-1)-normalized sample covariance.
PcaModel pca_fit(const Eigen::MatrixXd& W, Eigen::Index M);

Eigen::VectorXd pca_encode(const PcaModel& model, const Eigen::VectorXd& w);
Eigen::VectorXd pca_decode(const PcaModel& model, const Eigen::VectorXd& yhat);

}  // namespace memmo

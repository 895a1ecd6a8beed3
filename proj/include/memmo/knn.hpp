#pragma once

#include <Eigen/Core>

namespace memmo {

/// Nearest-neighbor lookup table; the baseline regressor.
struct KnnModel {
  Eigen::MatrixXd X;  // N x d
  Eigen::MatrixXd Y;  // N x m
  int k = 1;
};

KnnModel knn_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int k = 1);

/// Mean of the k Euclidean-nearest training outputs; distance ties resolve
/// to the lowest index.
Eigen::VectorXd knn_predict(const KnnModel& model, const Eigen::VectorXd& x);

}  // namespace memmo

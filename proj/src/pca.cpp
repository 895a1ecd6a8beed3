#include "memmo/pca.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace memmo {

PcaModel pca_fit(const Eigen::MatrixXd& W, Eigen::Index M) {
  const Eigen::Index n = W.rows();
  const Eigen::Index dim = W.cols();
  if (n < 2) throw std::invalid_argument("PCA needs at least two samples");
  if (M < 1 || M > std::min(n, dim)) throw std::invalid_argument("PCA M out of range");

  PcaModel model;
  model.mean = W.colwise().mean();
  const Eigen::MatrixXd centered = W.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov =
      centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw std::runtime_error("PCA eigendecomposition failed");

  // SelfAdjointEigenSolver sorts ascending; take the top M in descending order.
  model.components.resize(M, dim);
  model.eigenvalues.resize(M);
  for (Eigen::Index i = 0; i < M; ++i) {
    const Eigen::Index src = dim - 1 - i;
    model.components.row(i) = eig.eigenvectors().col(src).transpose();
    model.eigenvalues[i] = std::max(0.0, eig.eigenvalues()[src]);
  }
  model.discarded_variance = 0.0;
  for (Eigen::Index i = 0; i < dim - M; ++i) {
    model.discarded_variance += std::max(0.0, eig.eigenvalues()[i]);
  }
  return model;
}

Eigen::VectorXd pca_encode(const PcaModel& model, const Eigen::VectorXd& w) {
  if (w.size() != model.input_dim()) throw std::invalid_argument("PCA encode dimension mismatch");
  return model.components * (w - model.mean);
}

Eigen::VectorXd pca_decode(const PcaModel& model, const Eigen::VectorXd& yhat) {
  if (yhat.size() != model.retained()) throw std::invalid_argument("PCA decode dimension mismatch");
  return model.mean + model.components.transpose() * yhat;
}

}  // namespace memmo

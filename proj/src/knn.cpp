#include "memmo/knn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace memmo {

KnnModel knn_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int k) {
  if (X.rows() != Y.rows() || X.rows() < 1) throw std::invalid_argument("k-NN needs matching X/Y rows");
  if (k < 1 || k > X.rows()) throw std::invalid_argument("k-NN needs 1 <= k <= N");
  return {X, Y, k};
}

Eigen::VectorXd knn_predict(const KnnModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index n = model.X.rows();
  if (model.k == 1) {
    Eigen::Index best = 0;
    double best_d = (model.X.row(0).transpose() - x).squaredNorm();
    for (Eigen::Index i = 1; i < n; ++i) {
      const double d = (model.X.row(i).transpose() - x).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return model.Y.row(best).transpose();
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd d2(n);
  for (Eigen::Index i = 0; i < n; ++i) d2[i] = (model.X.row(i).transpose() - x).squaredNorm();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return d2[a] < d2[b]; });
  Eigen::VectorXd out = Eigen::VectorXd::Zero(model.Y.cols());
  for (int i = 0; i < model.k; ++i) out += model.Y.row(order[static_cast<std::size_t>(i)]);
  return out / static_cast<double>(model.k);
}

}  // namespace memmo

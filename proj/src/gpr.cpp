#include "memmo/gpr.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace memmo {

double gpr_kernel_value(const GprKernel& kernel, const Eigen::VectorXd& a,
                        const Eigen::VectorXd& b) {
  const double d2 = (a - b).squaredNorm();
  return kernel.signal_variance * std::exp(-d2 / (2.0 * kernel.lengthscale * kernel.lengthscale));
}

GprKernel default_gpr_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  const Eigen::Index n = X.rows();
  GprKernel kernel;

  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back((X.row(i) - X.row(j)).norm());
    }
  }
  if (!dists.empty()) {
    std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
    const double median = dists[dists.size() / 2];
    if (median > 0.0) kernel.lengthscale = median;
  }

  const Eigen::MatrixXd centered = Y.rowwise() - Y.colwise().mean();
  const double var = n > 1 ? centered.squaredNorm() / static_cast<double>((n - 1) * Y.cols()) : 1.0;
  kernel.signal_variance = var > 0.0 ? var : 1.0;
  kernel.noise_variance = 1e-8 * kernel.signal_variance;
  return kernel;
}

GprKernel refine_gpr_kernel(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                            Eigen::Index n_holdout) {
  const Eigen::Index n = X.rows();
  GprKernel kernel = default_gpr_kernel(X, Y);
  if (n_holdout <= 0) n_holdout = std::max<Eigen::Index>(1, n / 5);
  if (n - n_holdout < 2) return kernel;

  const Eigen::MatrixXd X_fit = X.topRows(n - n_holdout);
  const Eigen::MatrixXd Y_fit = Y.topRows(n - n_holdout);
  const Eigen::MatrixXd X_val = X.bottomRows(n_holdout);
  const Eigen::MatrixXd Y_val = Y.bottomRows(n_holdout);

  double best_err = std::numeric_limits<double>::infinity();
  double best_scale = 1.0;
  for (const double scale : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    GprKernel trial = kernel;
    trial.lengthscale = kernel.lengthscale * scale;
    double err = 0.0;
    try {
      const GprModel model = gpr_fit(X_fit, Y_fit, trial);
      for (Eigen::Index i = 0; i < n_holdout; ++i) {
        err += (gpr_predict(model, X_val.row(i).transpose()) - Y_val.row(i).transpose())
                   .squaredNorm();
      }
    } catch (const std::exception&) {
      continue;  // non-SPD at this lengthscale; skip the candidate
    }
    if (err < best_err) {
      best_err = err;
      best_scale = scale;
    }
  }
  kernel.lengthscale *= best_scale;
  return kernel;
}

GprModel gpr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, const GprKernel& kernel) {
  if (X.rows() < 1 || X.rows() != Y.rows()) throw std::invalid_argument("GPR needs matching X/Y rows");
  if (kernel.noise_variance <= 0.0) throw std::invalid_argument("GPR noise variance must be positive");

  const Eigen::Index n = X.rows();
  GprModel model;
  model.X = X;
  model.Y = Y;
  model.kernel = kernel;

  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = gpr_kernel_value(kernel, X.row(i), X.row(j));
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  gram.diagonal().array() += kernel.noise_variance;

  double jitter = 0.0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() == Eigen::Success) {
      model.factor = llt.matrixL();
      model.alpha = llt.solve(Y);
      return model;
    }
    const double bump = (jitter == 0.0) ? 1e-12 * kernel.signal_variance : 9.0 * jitter;
    gram.diagonal().array() += bump;
    jitter += bump;
  }
  throw std::runtime_error("GPR Gram matrix is not positive definite after jitter escalation");
}

Eigen::VectorXd gpr_predict(const GprModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index n = model.X.rows();
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star[i] = gpr_kernel_value(model.kernel, model.X.row(i), x);
  }
  return model.alpha.transpose() * k_star;
}

double gpr_predict_variance(const GprModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index n = model.X.rows();
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k_star[i] = gpr_kernel_value(model.kernel, model.X.row(i), x);
  }
  const Eigen::VectorXd v =
      model.factor.triangularView<Eigen::Lower>().solve(k_star);
  return std::max(0.0, gpr_kernel_value(model.kernel, x, x) - v.squaredNorm());
}

}  // namespace memmo

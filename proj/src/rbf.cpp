#include "memmo/rbf.hpp"

#include <Eigen/QR>
#include <iostream>
#include <stdexcept>

namespace memmo {

Eigen::VectorXd RbfWeights::stacked() const {
  Eigen::VectorXd v(w.rows() * w.cols());
  for (Eigen::Index d = 0; d < w.rows(); ++d) {
    v.segment(d * w.cols(), w.cols()) = w.row(d).transpose();
  }
  return v;
}

RbfWeights RbfWeights::from_stacked(const Eigen::VectorXd& v, Eigen::Index dims, Eigen::Index K) {
  if (v.size() != dims * K) throw std::invalid_argument("stacked weight length mismatch");
  RbfWeights out;
  out.w.resize(dims, K);
  for (Eigen::Index d = 0; d < dims; ++d) {
    out.w.row(d) = v.segment(d * K, K).transpose();
  }
  return out;
}

RbfBasis build_basis(Eigen::Index T, Eigen::Index K, double overlap) {
  if (K < 1 || K > T) throw std::invalid_argument("need 1 <= K <= T basis functions");
  if (overlap <= 0.0) throw std::invalid_argument("overlap must be positive");

  RbfBasis basis;
  basis.T = T;
  basis.K = K;
  basis.centers.resize(K);
  const double span = static_cast<double>(T - 1);
  double spacing = (K > 1) ? span / static_cast<double>(K - 1) : std::max(span, 1.0);
  if (K == 1) {
    basis.centers[0] = span / 2.0;
  } else {
    // Two basis spacings of margin past each end; without it the Gaussian sum
    // rolls off at the boundary knots and the fit residual concentrates there.
    const double margin = 2.0 * spacing;
    spacing = (span + 2.0 * margin) / static_cast<double>(K - 1);
    for (Eigen::Index k = 0; k < K; ++k) {
      basis.centers[k] = -margin + spacing * static_cast<double>(k);
    }
  }
  basis.sigma = overlap * spacing;

  basis.Phi.resize(T, K);
  const double inv_two_sigma2 = 1.0 / (2.0 * basis.sigma * basis.sigma);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index k = 0; k < K; ++k) {
      const double d = static_cast<double>(t) - basis.centers[k];
      basis.Phi(t, k) = std::exp(-d * d * inv_two_sigma2);
    }
  }
  return basis;
}

RbfWeights encode_rbf(const Trajectory& traj, const RbfBasis& basis) {
  if (traj.knots() != basis.T) throw std::invalid_argument("trajectory knots do not match basis");

  RbfWeights out;
  out.w.resize(traj.dims(), basis.K);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis.Phi);
  if (qr.rank() < basis.K) {
    // Ridge fallback keeps the encode well-posed on a degenerate basis.
    std::cerr << "memmo: rank-deficient RBF basis (rank " << qr.rank() << " of " << basis.K
              << "), using ridge solve\n";
    const double lambda = 1e-10;
    Eigen::MatrixXd gram = basis.Phi.transpose() * basis.Phi;
    gram.diagonal().array() += lambda;
    const Eigen::MatrixXd rhs = basis.Phi.transpose() * traj.values.transpose();
    out.w = gram.ldlt().solve(rhs).transpose();
    out.regularized = true;
    return out;
  }
  out.w = qr.solve(traj.values.transpose()).transpose();
  return out;
}

Trajectory decode_rbf(const RbfWeights& weights, const RbfBasis& basis, double dt) {
  if (weights.w.cols() != basis.K) throw std::invalid_argument("weight columns do not match basis");
  return Trajectory((basis.Phi * weights.w.transpose()).transpose(), dt);
}

}  // namespace memmo

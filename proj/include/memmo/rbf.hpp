#pragma once

#include <Eigen/Core>

#include "memmo/trajectory.hpp"

namespace memmo {

/// Gaussian radial basis over the knot grid. Centers are spread equally over
/// [0, T-1]; all bases share one width derived from the center spacing.
struct RbfBasis {
  Eigen::Index T = 0;
  Eigen::Index K = 0;
  Eigen::VectorXd centers;  // K, strictly increasing over the time axis
  double sigma = 0.0;
  Eigen::MatrixXd Phi;  // T x K

  bool operator==(const RbfBasis& other) const {
    return T == other.T && K == other.K && sigma == other.sigma && centers == other.centers &&
           Phi == other.Phi;
  }
};

/// Per-dimension basis weights; row i reconstructs dimension i as Phi * w_i.
struct RbfWeights {
  Eigen::MatrixXd w;  // D x K
  bool regularized = false;  // set when the least-squares solve needed a ridge fallback

  /// Row-major stack [w_0, ..., w_{D-1}] as one DK-vector.
  Eigen::VectorXd stacked() const;
  static RbfWeights from_stacked(const Eigen::VectorXd& v, Eigen::Index dims, Eigen::Index K);
};

/// Builds the basis; sigma = overlap * center spacing. K > T is rejected
/// (the least-squares encode would be under-determined).
RbfBasis build_basis(Eigen::Index T, Eigen::Index K, double overlap = 1.0);

/// Least-squares weights per dimension via column-pivoting QR; falls back to
/// a ridge solve (lambda = 1e-10) and flags the result when Phi is
/// rank-deficient.
RbfWeights encode_rbf(const Trajectory& traj, const RbfBasis& basis);

Trajectory decode_rbf(const RbfWeights& weights, const RbfBasis& basis, double dt);

}  // namespace memmo

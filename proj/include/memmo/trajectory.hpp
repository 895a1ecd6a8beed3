#pragma once

#include <Eigen/Core>

namespace memmo {

/// Discrete time series: one row per dimension, one column per knot.
struct Trajectory {
  Eigen::MatrixXd values;  // D x T
  double dt = 0.01;

  Trajectory() = default;
  Trajectory(Eigen::MatrixXd values_, double dt_);

  Eigen::Index dims() const { return values.rows(); }
  Eigen::Index knots() const { return values.cols(); }

  bool operator==(const Trajectory& other) const {
    return dt == other.dt && values.rows() == other.values.rows() &&
           values.cols() == other.values.cols() && values == other.values;
  }
};

}  // namespace memmo

#pragma once

#include <Eigen/Core>
#include <optional>

#include "memmo/trajectory.hpp"

namespace memmo {

/// Planar biped stepper with a 7-D configuration
/// [root_x, root_y, root_yaw, swing_x, swing_y, swing_yaw, swing_h]
/// under double-integrator dynamics; gravity loads the swing-height
/// coordinate so holding the foot up costs control effort.
struct StepperModel {
  static constexpr Eigen::Index kConfigDim = 7;
  static constexpr Eigen::Index kStateDim = 14;
  static constexpr Eigen::Index kControlDim = 7;

  static constexpr Eigen::Index kRootX = 0;
  static constexpr Eigen::Index kRootY = 1;
  static constexpr Eigen::Index kRootYaw = 2;
  static constexpr Eigen::Index kSwingX = 3;
  static constexpr Eigen::Index kSwingY = 4;
  static constexpr Eigen::Index kSwingYaw = 5;
  static constexpr Eigen::Index kSwingH = 6;

  double dt = 0.01;
  double gravity = 9.81;

  /// Semi-implicit Euler step: v' = v + dt (u - g e_h), q' = q + dt v'.
  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;

  /// Constant Jacobians of step() and the affine drift term.
  Eigen::MatrixXd state_jacobian() const;
  Eigen::MatrixXd control_jacobian() const;
  Eigen::VectorXd drift() const;
};

/// Integrates a control trajectory from x0; returns the full state series
/// (kStateDim x (knots+1)).
Eigen::MatrixXd rollout_states(const StepperModel& model, const Eigen::VectorXd& x0,
                               const Trajectory& u);

/// Configuration rows of rollout_states.
Trajectory rollout(const StepperModel& model, const Eigen::VectorXd& x0, const Trajectory& u);

/// Inverse dynamics of a configuration trajectory assuming quasi-static
/// motion: gravity compensation plus second differences over dt^2. Without
/// `v0` the initial velocity is taken from the trajectory's own first
/// difference, so a constant-velocity trajectory maps to zero acceleration;
/// passing `v0` pins the initial velocity instead (the database generator
/// passes zero so samples replay exactly from rest).
Trajectory quasi_static_controls(const Trajectory& q, const StepperModel& model,
                                 const std::optional<Eigen::VectorXd>& v0 = std::nullopt);

/// Lifts a configuration trajectory to states using the integrator's exact
/// finite-difference relation v[t] = (q[t] - q[t-1]) / dt, with v[0] = v0.
Eigen::MatrixXd lift_states(const Trajectory& q, const Eigen::VectorXd& v0);

}  // namespace memmo

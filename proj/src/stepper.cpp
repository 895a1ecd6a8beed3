#include "memmo/stepper.hpp"

#include <stdexcept>

namespace memmo {

Eigen::VectorXd StepperModel::step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  Eigen::VectorXd next(kStateDim);
  Eigen::VectorXd v = x.tail(kConfigDim) + dt * u;
  v[kSwingH] -= dt * gravity;
  next.head(kConfigDim) = x.head(kConfigDim) + dt * v;
  next.tail(kConfigDim) = v;
  return next;
}

Eigen::MatrixXd StepperModel::state_jacobian() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(kStateDim, kStateDim);
  A.topLeftCorner(kConfigDim, kConfigDim).setIdentity();
  A.topRightCorner(kConfigDim, kConfigDim) = dt * Eigen::MatrixXd::Identity(kConfigDim, kConfigDim);
  A.bottomRightCorner(kConfigDim, kConfigDim).setIdentity();
  return A;
}

Eigen::MatrixXd StepperModel::control_jacobian() const {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(kStateDim, kControlDim);
  B.topLeftCorner(kConfigDim, kControlDim) =
      dt * dt * Eigen::MatrixXd::Identity(kConfigDim, kControlDim);
  B.bottomLeftCorner(kConfigDim, kControlDim) =
      dt * Eigen::MatrixXd::Identity(kConfigDim, kControlDim);
  return B;
}

Eigen::VectorXd StepperModel::drift() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(kStateDim);
  c[kSwingH] = -dt * dt * gravity;
  c[kConfigDim + kSwingH] = -dt * gravity;
  return c;
}

Eigen::MatrixXd rollout_states(const StepperModel& model, const Eigen::VectorXd& x0,
                               const Trajectory& u) {
  if (x0.size() != StepperModel::kStateDim) throw std::invalid_argument("rollout x0 must be 14-D");
  Eigen::MatrixXd xs(StepperModel::kStateDim, u.knots() + 1);
  xs.col(0) = x0;
  for (Eigen::Index t = 0; t < u.knots(); ++t) {
    xs.col(t + 1) = model.step(xs.col(t), u.values.col(t));
  }
  return xs;
}

Trajectory rollout(const StepperModel& model, const Eigen::VectorXd& x0, const Trajectory& u) {
  return Trajectory(rollout_states(model, x0, u).topRows(StepperModel::kConfigDim), model.dt);
}

Trajectory quasi_static_controls(const Trajectory& q, const StepperModel& model,
                                 const std::optional<Eigen::VectorXd>& v0) {
  if (q.knots() < 2) throw std::invalid_argument("quasi-static controls need >= 2 knots");
  if (q.dims() != StepperModel::kConfigDim) {
    throw std::invalid_argument("quasi-static controls expect the 7-D stepper configuration");
  }
  const Eigen::Index T = q.knots();
  const Eigen::Index D = q.dims();
  const double dt = model.dt;

  // Implied knot velocities under semi-implicit Euler.
  Eigen::MatrixXd v(D, T);
  for (Eigen::Index t = 1; t < T; ++t) {
    v.col(t) = (q.values.col(t) - q.values.col(t - 1)) / dt;
  }
  v.col(0) = v0.has_value() ? *v0 : v.col(1);

  Eigen::MatrixXd u(D, T - 1);
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    u.col(t) = (v.col(t + 1) - v.col(t)) / dt;
    u(StepperModel::kSwingH, t) += model.gravity;
  }
  return Trajectory(u, dt);
}

Eigen::MatrixXd lift_states(const Trajectory& q, const Eigen::VectorXd& v0) {
  const Eigen::Index D = q.dims();
  Eigen::MatrixXd xs(2 * D, q.knots());
  xs.col(0) << q.values.col(0), v0;
  for (Eigen::Index t = 1; t < q.knots(); ++t) {
    xs.col(t) << q.values.col(t), (q.values.col(t) - q.values.col(t - 1)) / q.dt;
  }
  return xs;
}

}  // namespace memmo

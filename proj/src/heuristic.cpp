#include "memmo/heuristic.hpp"

#include <cmath>

namespace memmo {

double min_jerk(double tau) {
  const double t3 = tau * tau * tau;
  return t3 * (10.0 + tau * (-15.0 + 6.0 * tau));
}

namespace {

/// Smooth bump: 0 at both ends with vanishing first/second derivatives,
/// 1 at tau = 0.5.
double swing_bump(double tau) {
  const double p = 4.0 * tau * (1.0 - tau);
  return p * p * p;
}

}  // namespace

MotionSample heuristic_plan(const Task& task, const StepperModel& model, Eigen::Index T,
                            double h_apex) {
  if (T < 2) throw std::invalid_argument("heuristic plan needs at least two knots");

  const FootPose root0(0.0, 0.0, 0.0);
  const FootPose root_goal = midpoint_pose(task.stance_foot(), task.goal);
  const FootPose& swing0 = task.moving_foot_start();
  const double swing_dyaw = normalize_angle(task.goal.yaw - swing0.yaw);

  Eigen::MatrixXd q(StepperModel::kConfigDim, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    const double tau = static_cast<double>(t) / static_cast<double>(T - 1);
    const double s = min_jerk(tau);
    q(StepperModel::kRootX, t) = root0.x + s * (root_goal.x - root0.x);
    q(StepperModel::kRootY, t) = root0.y + s * (root_goal.y - root0.y);
    q(StepperModel::kRootYaw, t) = root0.yaw + s * normalize_angle(root_goal.yaw - root0.yaw);
    q(StepperModel::kSwingX, t) = swing0.x + s * (task.goal.x - swing0.x);
    q(StepperModel::kSwingY, t) = swing0.y + s * (task.goal.y - swing0.y);
    q(StepperModel::kSwingYaw, t) = swing0.yaw + s * swing_dyaw;
    q(StepperModel::kSwingH, t) = h_apex * swing_bump(tau);
  }

  MotionSample sample;
  sample.task = task;
  sample.q = Trajectory(std::move(q), model.dt);
  sample.u = quasi_static_controls(sample.q, model,
                                   Eigen::VectorXd::Zero(StepperModel::kConfigDim));
  sample.source = SampleSource::Heuristic;
  return sample;
}

}  // namespace memmo

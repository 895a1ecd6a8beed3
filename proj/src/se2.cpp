#include "memmo/se2.hpp"

#include <cmath>

namespace memmo {

double normalize_angle(double yaw) {
  double a = std::remainder(yaw, 2.0 * M_PI);
  if (a <= -M_PI) a += 2.0 * M_PI;  // remainder lands in [-pi, pi]; we want (-pi, pi]
  return a;
}

FootPose::FootPose(double x_, double y_, double yaw_) : x(x_), y(y_), yaw(normalize_angle(yaw_)) {}

FootPose se2_to_local(const FootPose& frame, const FootPose& pose) {
  const double c = std::cos(frame.yaw);
  const double s = std::sin(frame.yaw);
  const double dx = pose.x - frame.x;
  const double dy = pose.y - frame.y;
  return {c * dx + s * dy, -s * dx + c * dy, pose.yaw - frame.yaw};
}

FootPose se2_to_world(const FootPose& frame, const FootPose& pose) {
  const double c = std::cos(frame.yaw);
  const double s = std::sin(frame.yaw);
  return {frame.x + c * pose.x - s * pose.y, frame.y + s * pose.x + c * pose.y,
          pose.yaw + frame.yaw};
}

FootPose midpoint_pose(const FootPose& a, const FootPose& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y), a.yaw + 0.5 * normalize_angle(b.yaw - a.yaw)};
}

}  // namespace memmo

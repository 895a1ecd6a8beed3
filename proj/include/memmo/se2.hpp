#pragma once

#include <Eigen/Core>

namespace memmo {

/// Wraps an angle into (-pi, pi].
double normalize_angle(double yaw);

/// Planar foot pose: 2D position and heading. The yaw is normalized on
/// construction, so two poses describing the same placement compare equal.
struct FootPose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  FootPose() = default;
  FootPose(double x_, double y_, double yaw_);

  Eigen::Vector3d vector() const { return {x, y, yaw}; }
  static FootPose from_vector(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }

  bool operator==(const FootPose& other) const = default;
};

/// Expresses `pose` in the coordinate system attached to `frame`.
FootPose se2_to_local(const FootPose& frame, const FootPose& pose);

/// Inverse of se2_to_local for the same frame.
FootPose se2_to_world(const FootPose& frame, const FootPose& pose);

/// Pose midway between two poses (positions averaged, yaw averaged along the
/// shorter arc). Used for the root target between feet.
FootPose midpoint_pose(const FootPose& a, const FootPose& b);

}  // namespace memmo

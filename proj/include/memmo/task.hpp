#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "memmo/se2.hpp"

namespace memmo {

enum class Side { Left, Right };

std::string to_string(Side side);
Side side_from_string(const std::string& s);

/// One-step task: the initial double-support contact pair and the goal pose
/// of the moving foot, all expressed in the frame where the root starts at
/// the origin. Concatenated as [left0, right0, goal] this is the 9-D
/// regression input.
struct Task {
  FootPose left0;
  FootPose right0;
  FootPose goal;
  Side side = Side::Left;

  /// [left0, right0, goal] as a flat 9-vector.
  Eigen::Matrix<double, 9, 1> vector() const;

  const FootPose& moving_foot_start() const { return side == Side::Left ? left0 : right0; }
  const FootPose& stance_foot() const { return side == Side::Left ? right0 : left0; }

  /// Initial stance width |left0.y - right0.y|; must be positive.
  double stance_width() const { return std::abs(left0.y - right0.y); }

  bool operator==(const Task& other) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Sampling ranges for one-step tasks. Degenerate (lo > hi) intervals are
/// rejected by sample_task; lo == hi pins the value.
struct TaskRanges {
  Interval step_length{0.10, 0.40};
  Interval lateral_offset{-0.05, 0.05};
  Interval yaw_change{-0.3, 0.3};
  Interval stance_width{0.15, 0.25};
};

/// Draws a task uniformly within `ranges`, deterministic for a fixed seed.
/// The feet start level at x = 0 around the origin; the moving foot (chosen
/// by `side`) steps forward by the drawn length with the drawn lateral offset
/// and yaw change.
Task sample_task(std::uint64_t seed, Side side, const TaskRanges& ranges);

}  // namespace memmo

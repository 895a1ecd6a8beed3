#include "memmo/task.hpp"

#include <stdexcept>

#include "memmo/rng.hpp"

namespace memmo {

std::string to_string(Side side) { return side == Side::Left ? "left" : "right"; }

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  throw std::invalid_argument("unknown side: " + s);
}

Eigen::Matrix<double, 9, 1> Task::vector() const {
  Eigen::Matrix<double, 9, 1> v;
  v << left0.vector(), right0.vector(), goal.vector();
  return v;
}

namespace {
void check_interval(const Interval& iv, const char* name) {
  if (iv.lo > iv.hi) {
    throw std::invalid_argument(std::string("degenerate range for ") + name);
  }
}
}  // namespace

Task sample_task(std::uint64_t seed, Side side, const TaskRanges& ranges) {
  check_interval(ranges.step_length, "step_length");
  check_interval(ranges.lateral_offset, "lateral_offset");
  check_interval(ranges.yaw_change, "yaw_change");
  check_interval(ranges.stance_width, "stance_width");
  if (ranges.stance_width.lo <= 0.0) {
    throw std::invalid_argument("stance_width must be positive");
  }

  Rng rng(seed);
  const double length = rng.uniform(ranges.step_length.lo, ranges.step_length.hi);
  const double lateral = rng.uniform(ranges.lateral_offset.lo, ranges.lateral_offset.hi);
  const double dyaw = rng.uniform(ranges.yaw_change.lo, ranges.yaw_change.hi);
  const double width = rng.uniform(ranges.stance_width.lo, ranges.stance_width.hi);
  // Mid-gait start: the moving foot trails the stance foot by half a step
  // with a matching split of the heading, the way a boundary between two
  // consecutive steps looks. The root stays at the feet midpoint (origin).
  const double stagger = 0.5 * rng.uniform(ranges.step_length.lo, ranges.step_length.hi);
  const double split_yaw = 0.5 * rng.uniform(ranges.yaw_change.lo, ranges.yaw_change.hi);

  const double sy = side == Side::Left ? 1.0 : -1.0;
  FootPose moving(-stagger / 2.0, sy * width / 2.0, -split_yaw / 2.0);
  FootPose stance(stagger / 2.0, -sy * width / 2.0, split_yaw / 2.0);

  Task task;
  task.side = side;
  task.left0 = side == Side::Left ? moving : stance;
  task.right0 = side == Side::Left ? stance : moving;
  task.goal = FootPose(moving.x + length, moving.y + lateral, moving.yaw + dyaw);
  return task;
}

}  // namespace memmo

#pragma once

#include "memmo/database.hpp"
#include "memmo/stepper.hpp"
#include "memmo/task.hpp"

namespace memmo {

/// Quintic minimum-jerk interpolation factor: s(0)=0, s(1)=1, zero first and
/// second derivatives at both ends.
double min_jerk(double tau);

/// Heuristic one-step planner. The root glides (minimum jerk) from the origin
/// to midway between the final feet, the swing foot glides to the goal, and
/// the swing height traces a smooth bump peaking at h_apex mid-step. Controls
/// are quasi-static, so the sample replays exactly from rest; it is
/// dynamically consistent but makes no claim of optimality. The sample's
/// cost field is left at zero (the database builder evaluates it under the
/// step problem).
MotionSample heuristic_plan(const Task& task, const StepperModel& model, Eigen::Index T,
                            double h_apex = 0.05);

}  // namespace memmo

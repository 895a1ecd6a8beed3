#include "memmo/multistep.hpp"

#include <stdexcept>

namespace memmo {

namespace {

using SM = StepperModel;

Eigen::VectorXd multistep_initial_state(const ContactSequence& seq) {
  const auto& start = seq.steps.front();
  const FootPose root = midpoint_pose(start.left, start.right);
  const Side first = seq.moving_side(0);
  const FootPose& swing = first == Side::Left ? start.left : start.right;

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(SM::kStateDim);
  x0[SM::kRootX] = root.x;
  x0[SM::kRootY] = root.y;
  x0[SM::kRootYaw] = root.yaw;
  x0[SM::kSwingX] = swing.x;
  x0[SM::kSwingY] = swing.y;
  x0[SM::kSwingYaw] = swing.yaw;
  return x0;
}

/// World-frame task of step i: feet from the step's start contacts, goal
/// from the moved foot of the end contacts.
Task step_task(const ContactSequence& seq, std::size_t i) {
  Task task;
  task.side = seq.moving_side(i);
  task.left0 = seq.steps[i].left;
  task.right0 = seq.steps[i].right;
  task.goal = task.side == Side::Left ? seq.steps[i + 1].left : seq.steps[i + 1].right;
  return task;
}

}  // namespace

OcProblem make_multistep_problem(const ContactSequence& seq, const StepperModel& model,
                                 const StepCostWeights& weights, Eigen::Index T_step) {
  const std::size_t P = seq.footsteps();
  if (P < 1) throw std::invalid_argument("multistep problem needs at least one footstep");
  if (T_step < 2) throw std::invalid_argument("multistep problem needs at least two knots per step");

  OcProblem problem;
  problem.model = model;
  problem.T = static_cast<Eigen::Index>(P) * (T_step - 1) + 1;
  problem.x0 = multistep_initial_state(seq);
  problem.uniform_dynamics = {model.state_jacobian(), model.control_jacobian(), model.drift()};
  problem.knot_costs.resize(static_cast<std::size_t>(problem.T));

  const double dt = model.dt;
  auto control_reg = std::make_shared<QuadraticControlCost>(
      Eigen::VectorXd::Constant(SM::kControlDim, weights.control_reg * dt), "control_reg");
  auto control_quartic =
      std::make_shared<QuarticControlCost>(weights.control_quartic * dt, "control_quartic");
  auto clearance = std::make_shared<SwingClearanceCost>(
      weights.clearance * dt, weights.clearance_height, weights.clearance_width);
  const double w_lat = weights.heading_damping * dt;
  const double w_long = w_lat * weights.heading_long_fraction;
  auto root_heading = std::make_shared<HeadingVelocityCost>(
      w_long, w_lat, SM::kRootYaw, SM::kConfigDim + SM::kRootX, SM::kConfigDim + SM::kRootY,
      "root_heading");
  auto swing_heading = std::make_shared<HeadingVelocityCost>(
      w_long, w_lat, SM::kSwingYaw, SM::kConfigDim + SM::kSwingX, SM::kConfigDim + SM::kSwingY,
      "swing_heading");

  for (std::size_t i = 0; i < P; ++i) {
    const Task task = step_task(seq, i);
    const Eigen::Index first = static_cast<Eigen::Index>(i) * (T_step - 1);
    const Eigen::Index last = first + T_step - 1;

    // Per-step nominal: root between the step's start feet, swing standing.
    Eigen::VectorXd nominal = Eigen::VectorXd::Zero(SM::kStateDim);
    const FootPose root0 = midpoint_pose(task.left0, task.right0);
    const FootPose& swing0 = task.moving_foot_start();
    nominal[SM::kRootX] = root0.x;
    nominal[SM::kRootY] = root0.y;
    nominal[SM::kRootYaw] = root0.yaw;
    nominal[SM::kSwingX] = swing0.x;
    nominal[SM::kSwingY] = swing0.y;
    nominal[SM::kSwingYaw] = swing0.yaw;

    Eigen::VectorXd state_w = Eigen::VectorXd::Zero(SM::kStateDim);
    state_w.head(SM::kConfigDim).setConstant(weights.state_reg * dt);
    state_w.tail(SM::kConfigDim).setConstant(weights.velocity_reg * dt);
    auto state_reg =
        std::make_shared<QuadraticStateCost>(state_w, nominal, "state_reg_step" + std::to_string(i));

    for (Eigen::Index t = first; t < last; ++t) {
      auto& costs = problem.knot_costs[static_cast<std::size_t>(t)];
      costs.push_back(state_reg);
      costs.push_back(control_reg);
      if (weights.control_quartic > 0.0) costs.push_back(control_quartic);
      if (weights.clearance > 0.0) costs.push_back(clearance);
      if (weights.heading_damping > 0.0) {
        costs.push_back(root_heading);
        costs.push_back(swing_heading);
      }
    }

    if (weights.apex > 0.0) {
      Eigen::VectorXd apex_w = Eigen::VectorXd::Zero(SM::kStateDim);
      Eigen::VectorXd apex_ref = Eigen::VectorXd::Zero(SM::kStateDim);
      apex_w[SM::kSwingH] = weights.apex;
      apex_ref[SM::kSwingH] = weights.h_apex;
      problem.knot_costs[static_cast<std::size_t>(first + T_step / 2)].push_back(
          std::make_shared<QuadraticStateCost>(apex_w, apex_ref,
                                               "apex_via_step" + std::to_string(i)));
    }

    auto terminal = detail::make_step_terminal_cost(task, weights);
    if (i + 1 == P) {
      problem.knot_costs[static_cast<std::size_t>(last)].push_back(terminal);
    } else {
      // The landed state exists only pre-reset: evaluate the step's terminal
      // cost through the plain integrator at the last interval, then reset
      // the swing coordinates onto the next moving foot.
      problem.knot_costs[static_cast<std::size_t>(last - 1)].push_back(
          std::make_shared<PostDynamicsCost>(terminal, problem.uniform_dynamics.A,
                                             problem.uniform_dynamics.B,
                                             problem.uniform_dynamics.c));

      const Side next_mover = seq.moving_side(i + 1);
      const FootPose& next_swing =
          next_mover == Side::Left ? seq.steps[i + 1].left : seq.steps[i + 1].right;
      Eigen::MatrixXd S = Eigen::MatrixXd::Identity(SM::kStateDim, SM::kStateDim);
      Eigen::VectorXd r = Eigen::VectorXd::Zero(SM::kStateDim);
      for (Eigen::Index idx : {SM::kSwingX, SM::kSwingY, SM::kSwingYaw, SM::kSwingH}) {
        S(idx, idx) = 0.0;
        S(SM::kConfigDim + idx, SM::kConfigDim + idx) = 0.0;
      }
      r[SM::kSwingX] = next_swing.x;
      r[SM::kSwingY] = next_swing.y;
      r[SM::kSwingYaw] = next_swing.yaw;

      AffineDynamics reset;
      reset.A = S * problem.uniform_dynamics.A;
      reset.B = S * problem.uniform_dynamics.B;
      reset.c = S * problem.uniform_dynamics.c + r;
      problem.dynamics_overrides.emplace(last - 1, std::move(reset));
      problem.reset_knots.push_back(last);
    }
  }
  return problem;
}

namespace {

FootPose pose_at(const Eigen::MatrixXd& q, Eigen::Index base, Eigen::Index t) {
  return FootPose(q(base, t), q(base + 1, t), q(base + 2, t));
}

void set_pose(Eigen::MatrixXd& q, Eigen::Index base, Eigen::Index t, const FootPose& p) {
  q(base, t) = p.x;
  q(base + 1, t) = p.y;
  q(base + 2, t) = p.yaw;
}

}  // namespace

WarmStart build_multistep(const Memory& memory_left, const Memory& memory_right,
                          const ContactSequence& seq, UMode u_mode) {
  const std::size_t P = seq.footsteps();
  if (P < 1) throw std::invalid_argument("multistep warm start needs at least one footstep");
  if (memory_left.side != Side::Left || memory_right.side != Side::Right) {
    throw std::invalid_argument("build_multistep needs a left memory and a right memory");
  }
  const Eigen::Index T_step = memory_left.q_codec.basis.T;
  if (memory_right.q_codec.basis.T != T_step) {
    throw std::invalid_argument("left and right memories disagree on knot count");
  }
  const double dt = memory_left.model.dt;

  const Eigen::Index T_total = static_cast<Eigen::Index>(P) * (T_step - 1) + 1;
  Eigen::MatrixXd q_all(SM::kConfigDim, T_total);
  Eigen::MatrixXd u_all(SM::kControlDim, T_total - 1);
  const bool with_u = u_mode != UMode::None;

  const auto& start = seq.steps.front();
  FootPose frame = midpoint_pose(start.left, start.right);

  for (std::size_t i = 0; i < P; ++i) {
    const Side side = seq.moving_side(i);
    const Memory& memory = side == Side::Left ? memory_left : memory_right;

    Task world_task = step_task(seq, i);
    Task local_task;
    local_task.side = side;
    local_task.left0 = se2_to_local(frame, world_task.left0);
    local_task.right0 = se2_to_local(frame, world_task.right0);
    local_task.goal = se2_to_local(frame, world_task.goal);

    const WarmStart segment = predict_step(memory, local_task, u_mode);
    const Eigen::MatrixXd& q_local = segment.q_traj->values;

    // Transform the segment into the world frame; the shared boundary knot
    // takes the new segment's first knot (post-reset convention).
    const Eigen::Index offset = static_cast<Eigen::Index>(i) * (T_step - 1);
    for (Eigen::Index t = 0; t < T_step; ++t) {
      const Eigen::Index col = offset + t;
      set_pose(q_all, SM::kRootX, col, se2_to_world(frame, pose_at(q_local, SM::kRootX, t)));
      set_pose(q_all, SM::kSwingX, col, se2_to_world(frame, pose_at(q_local, SM::kSwingX, t)));
      q_all(SM::kSwingH, col) = q_local(SM::kSwingH, t);
    }

    if (with_u) {
      if (u_mode == UMode::QuasiStatic) {
        // Recompute in world coordinates for exact consistency.
        const Trajectory q_world_segment(q_all.middleCols(offset, T_step), dt);
        u_all.middleCols(offset, T_step - 1) =
            quasi_static_controls(q_world_segment, memory.model).values;
      } else {
        // Accelerations rotate with the frame; offsets cancel in differences.
        const double c = std::cos(frame.yaw);
        const double s = std::sin(frame.yaw);
        Eigen::MatrixXd u_local = segment.u_traj->values;
        for (Eigen::Index t = 0; t + 1 < T_step; ++t) {
          for (Eigen::Index base : {SM::kRootX, SM::kSwingX}) {
            const double ux = u_local(base, t);
            const double uy = u_local(base + 1, t);
            u_local(base, t) = c * ux - s * uy;
            u_local(base + 1, t) = s * ux + c * uy;
          }
        }
        u_all.middleCols(offset, T_step - 1) = u_local;
      }
    }

    frame = pose_at(q_all, SM::kRootX, offset + T_step - 1);
  }

  WarmStart warm;
  warm.q_traj = Trajectory(std::move(q_all), dt);
  if (with_u) warm.u_traj = Trajectory(std::move(u_all), dt);
  return warm;
}

}  // namespace memmo

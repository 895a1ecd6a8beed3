#include "memmo/factory.hpp"

#include <iostream>
#include <sstream>

#include "memmo/json_io.hpp"
#include "memmo/rng.hpp"

namespace memmo {

std::uint64_t generator_config_hash(const GeneratorConfig& config) {
  std::ostringstream ss;
  ss.precision(17);
  ss << config.model.dt << ':' << config.model.gravity << ':' << config.T << ':'
     << config.weights.control_reg << ':' << config.weights.control_quartic << ':' << config.weights.heading_damping << ':' << config.weights.heading_long_fraction << ':' << config.weights.state_reg << ':'
     << config.weights.velocity_reg << ':' << config.weights.apex << ':'
     << config.weights.clearance << ':' << config.weights.clearance_height << ':'
     << config.weights.clearance_width << ':' << config.weights.terminal_contact << ':'
     << config.weights.terminal_root << ':' << config.weights.terminal_velocity << ':'
     << config.weights.h_apex << ':' << config.ranges.step_length.lo << ':'
     << config.ranges.step_length.hi << ':' << config.ranges.lateral_offset.lo << ':'
     << config.ranges.lateral_offset.hi << ':' << config.ranges.yaw_change.lo << ':'
     << config.ranges.yaw_change.hi << ':' << config.ranges.stance_width.lo << ':'
     << config.ranges.stance_width.hi << ':' << config.offline.max_iters << ':'
     << config.offline.convergence_threshold;
  return fnv1a(ss.str());
}

std::optional<MotionSample> optimize_sample(const MotionSample& sample,
                                            const GeneratorConfig& config) {
  if (sample.source != SampleSource::Heuristic) {
    throw std::invalid_argument("optimize_sample expects a heuristic sample");
  }
  const OcProblem problem =
      make_step_problem(sample.task, config.model, config.weights, sample.q.knots());
  WarmStart warm;
  warm.q_traj = sample.q;
  warm.u_traj = sample.u;
  const SolveResult result = solve(problem, config.offline, warm);
  if (!result.trace.success) {
    std::cerr << "memmo: dropping sample (solver " << (result.trace.converged ? "left open gaps" : "did not converge")
              << " after " << result.trace.iterations << " iterations)\n";
    return std::nullopt;
  }
  MotionSample out;
  out.task = sample.task;
  out.q = result.q;
  out.u = result.u;
  out.cost = result.trace.final_cost;
  out.source = SampleSource::Optimized;
  return out;
}

std::pair<Database, Database> build_databases(int n, std::uint64_t seed,
                                              const GeneratorConfig& config, BuildStats* stats) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("build_databases needs an even sample count");

  DatabaseMeta meta;
  meta.dt = config.model.dt;
  meta.T = config.T;
  meta.D_q = StepperModel::kConfigDim;
  meta.D_u = StepperModel::kControlDim;
  meta.side = DatabaseSide::Mixed;
  meta.generator_hash = generator_config_hash(config);

  Database heuristic_db;
  Database optimized_db;
  heuristic_db.meta = meta;
  optimized_db.meta = meta;

  BuildStats local;
  local.requested = n;
  for (int i = 0; i < n; ++i) {
    const Side side = (i % 2 == 0) ? Side::Left : Side::Right;
    const Task task = sample_task(Rng::derive(seed, static_cast<std::uint64_t>(i)), side,
                                  config.ranges);
    MotionSample heur = heuristic_plan(task, config.model, config.T, config.weights.h_apex);
    const OcProblem problem = make_step_problem(task, config.model, config.weights, config.T);
    heur.cost = total_cost(problem, heur.q, heur.u);

    std::optional<MotionSample> opt = optimize_sample(heur, config);
    if (!opt.has_value()) {
      local.dropped += 1;
      continue;
    }
    heuristic_db.samples.push_back(std::move(heur));
    optimized_db.samples.push_back(std::move(*opt));
    local.retained += 1;
  }
  if (local.dropped > 0) {
    std::cerr << "memmo: retained " << local.retained << " of " << local.requested
              << " samples\n";
  }
  if (stats != nullptr) *stats = local;
  return {std::move(heuristic_db), std::move(optimized_db)};
}

ContactSequence plan_contact_sequence(const FootPose& left, const FootPose& right, int n_steps,
                                      const TaskRanges& ranges, std::uint64_t seed, Side first) {
  if (n_steps < 1) throw std::invalid_argument("contact sequence needs at least one step");

  ContactSequence seq;
  seq.steps.push_back({left, right});
  Side mover = first;
  for (int i = 0; i < n_steps; ++i) {
    const ContactSequence::Step& cur = seq.steps.back();
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    const double length = rng.uniform(ranges.step_length.lo, ranges.step_length.hi);
    const double lateral = rng.uniform(ranges.lateral_offset.lo, ranges.lateral_offset.hi);
    const double dyaw = rng.uniform(ranges.yaw_change.lo, ranges.yaw_change.hi);

    const FootPose frame = midpoint_pose(cur.left, cur.right);
    const FootPose moving_local =
        se2_to_local(frame, mover == Side::Left ? cur.left : cur.right);
    const FootPose target_local(moving_local.x + length, moving_local.y + lateral,
                                moving_local.yaw + dyaw);
    const FootPose target = se2_to_world(frame, target_local);

    ContactSequence::Step next = cur;
    (mover == Side::Left ? next.left : next.right) = target;
    seq.steps.push_back(next);
    mover = (mover == Side::Left) ? Side::Right : Side::Left;
  }
  return seq;
}

}  // namespace memmo

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "memmo/database.hpp"
#include "memmo/heuristic.hpp"
#include "memmo/ocp.hpp"
#include "memmo/solver.hpp"

namespace memmo {

/// Everything the offline database generator depends on; hashed into the
/// dataset header so downstream consumers can detect mismatched data.
struct GeneratorConfig {
  StepperModel model;
  StepCostWeights weights;
  TaskRanges ranges;
  SolverConfig offline;  // small threshold / generous cap
  Eigen::Index T = 100;

  GeneratorConfig() {
    offline.max_iters = 50;
    offline.convergence_threshold = 1e-5;
  }
};

std::uint64_t generator_config_hash(const GeneratorConfig& config);

/// Re-optimizes a heuristic sample by warm-starting the solver with it.
/// Returns nothing when the solver fails (the sample is dropped and logged);
/// retained samples carry the optimized trajectories, source tag, and cost.
std::optional<MotionSample> optimize_sample(const MotionSample& sample,
                                            const GeneratorConfig& config);

struct BuildStats {
  int requested = 0;
  int retained = 0;
  int dropped = 0;
};

/// Generates n tasks (half left, half right, interleaved), plans each
/// heuristically, then re-optimizes. The two returned databases share tasks
/// index-for-index; per-index seeds make generation order-independent and
/// reproducible.
std::pair<Database, Database> build_databases(int n, std::uint64_t seed,
                                              const GeneratorConfig& config,
                                              BuildStats* stats = nullptr);

/// Alternating-feet contact plan: per-step displacements drawn from the task
/// ranges, applied in the current root frame.
ContactSequence plan_contact_sequence(const FootPose& left, const FootPose& right, int n_steps,
                                      const TaskRanges& ranges, std::uint64_t seed,
                                      Side first = Side::Left);

}  // namespace memmo

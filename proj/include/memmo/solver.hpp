#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memmo/ocp.hpp"
#include "memmo/trajectory.hpp"

namespace memmo {

struct SolverConfig {
  int max_iters = 50;
  double convergence_threshold = 1e-5;  // on the expected cost improvement of a unit step
  double reg_init = 0.0;
  double reg_factor = 10.0;
  double reg_min = 1e-9;
  double reg_max = 1e10;
  std::vector<double> step_set{1.0, 0.5, 0.25, 0.1, 0.05};
  double accept_ratio = 0.1;       // accept when actual decrease >= ratio * expected
  // While gaps are open the expected improvement of a step can be negative
  // (closing the defects costs something); such steps are still accepted as
  // long as the realized increase stays within this multiple of the model.
  double accept_negstep_ratio = 2.0;
  double gap_tolerance = 1e-6;     // dynamic-consistency requirement for success
  double feasibility_tolerance = 1e-9;  // gaps below this are treated as closed
};

struct IterationRecord {
  int iteration = 0;
  double cost = 0.0;
  double gap_norm = 0.0;
  double regularization = 0.0;
  double step_length = 0.0;  // 0 when every trial step was rejected
};

struct SolverTrace {
  int iterations = 0;
  double final_cost = 0.0;
  double final_gap_norm = 0.0;
  bool converged = false;
  bool success = false;
  std::vector<IterationRecord> records;
};

/// Optional initial guess. Either component may be absent; a missing q
/// defaults to holding x0 with zero velocity, a missing u to zeros. The pair
/// need not be dynamically consistent.
struct WarmStart {
  std::optional<Trajectory> q_traj;
  std::optional<Trajectory> u_traj;
};

struct SolveResult {
  Trajectory q;
  Trajectory u;
  SolverTrace trace;
};

/// Gauss-Newton DDP with feasibility-prone gap handling: the backward pass
/// folds dynamics defects into the value expansion and the forward pass
/// contracts them with the accepted step length, so infeasible warm starts
/// are first-class inputs. The line search accepts descent steps at the
/// usual sufficient-decrease ratio; once the candidate is feasible the cost
/// sequence is non-increasing. Numerical failure yields a failure trace,
/// never a throw.
SolveResult solve(const OcProblem& problem, const SolverConfig& config, const WarmStart& warm = {});

/// CSV export of the per-iteration records (iteration, cost, gap_norm,
/// regularization, step_length).
void write_trace_csv(const SolverTrace& trace, const std::string& path);

}  // namespace memmo

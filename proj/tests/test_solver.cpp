#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "memmo/rng.hpp"
#include "memmo/solver.hpp"
#include "memmo/task.hpp"
#include "oracles.hpp"

using namespace memmo;
using SM = StepperModel;

namespace {

/// Random LQR instance on the stepper dimensions: integrator dynamics plus
/// random quadratic state/control costs with random references.
OcProblem random_lqr(std::uint64_t seed, Eigen::Index T) {
  Rng rng(seed);
  StepperModel model;
  OcProblem problem;
  problem.model = model;
  problem.T = T;
  problem.x0 = Eigen::VectorXd::Zero(SM::kStateDim);
  for (Eigen::Index i = 0; i < SM::kStateDim; ++i) problem.x0[i] = rng.uniform(-0.5, 0.5);
  problem.uniform_dynamics = {model.state_jacobian(), model.control_jacobian(), model.drift()};
  problem.knot_costs.resize(static_cast<std::size_t>(T));

  Eigen::VectorXd qw(SM::kStateDim), qref(SM::kStateDim), uw(SM::kControlDim);
  for (Eigen::Index i = 0; i < SM::kStateDim; ++i) {
    qw[i] = rng.uniform(0.01, 1.0);
    qref[i] = rng.uniform(-1.0, 1.0);
  }
  for (Eigen::Index i = 0; i < SM::kControlDim; ++i) uw[i] = rng.uniform(0.05, 0.5);
  auto running_state = std::make_shared<QuadraticStateCost>(qw * model.dt, qref, "lqr_state");
  auto running_control = std::make_shared<QuadraticControlCost>(uw * model.dt, "lqr_control");
  for (Eigen::Index t = 0; t + 1 < T; ++t) {
    problem.knot_costs[static_cast<std::size_t>(t)] = {running_state, running_control};
  }

  Eigen::VectorXd tw(SM::kStateDim), tref(SM::kStateDim);
  for (Eigen::Index i = 0; i < SM::kStateDim; ++i) {
    tw[i] = rng.uniform(1.0, 50.0);
    tref[i] = rng.uniform(-1.0, 1.0);
  }
  problem.knot_costs[static_cast<std::size_t>(T - 1)] = {
      std::make_shared<QuadraticStateCost>(tw, tref, "lqr_terminal")};
  return problem;
}

}  // namespace

TEST_CASE("solver matches the Riccati oracle on LQR instances") {
  SolverConfig config;
  config.max_iters = 10;
  config.convergence_threshold = 1e-9;

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const OcProblem problem = random_lqr(seed, 50);
    const testing::LqrSolution oracle = testing::solve_lqr_riccati(problem);
    const SolveResult result = solve(problem, config);

    CHECK(result.trace.converged);
    CHECK(result.trace.success);
    CHECK(result.trace.iterations <= 2);

    double max_err = 0.0;
    for (Eigen::Index t = 0; t < problem.T; ++t) {
      max_err = std::max(
          max_err,
          (result.q.values.col(t) - oracle.xs.col(t).head(SM::kConfigDim)).cwiseAbs().maxCoeff());
    }
    for (Eigen::Index t = 0; t + 1 < problem.T; ++t) {
      max_err =
          std::max(max_err, (result.u.values.col(t) - oracle.us.col(t)).cwiseAbs().maxCoeff());
    }
    CAPTURE(seed);
    CHECK(max_err < 1e-8);
  }
}

TEST_CASE("solver behavior on the step problem") {
  StepperModel model;
  const StepCostWeights weights;
  const Task task = sample_task(3, Side::Left, TaskRanges());
  const OcProblem problem = make_step_problem(task, model, weights, 100);

  SolverConfig offline;
  offline.max_iters = 50;
  offline.convergence_threshold = 1e-5;

  SUBCASE("cold start converges and closes the gaps") {
    const SolveResult result = solve(problem, offline);
    REQUIRE(result.trace.converged);
    CHECK(result.trace.success);
    CHECK(result.trace.final_gap_norm <= 1e-6);
    CHECK(result.trace.iterations <= 50);

    // Accepted steps never increase the cost.
    for (std::size_t i = 1; i < result.trace.records.size(); ++i) {
      CHECK(result.trace.records[i].cost <= result.trace.records[i - 1].cost + 1e-12);
    }

    // The trace's final cost is the trajectory's cost.
    CHECK(total_cost(problem, result.q, result.u) ==
          doctest::Approx(result.trace.final_cost).epsilon(1e-10));

    // The swing foot lands on the goal.
    const Eigen::Index last = problem.T - 1;
    CHECK(std::abs(result.q.values(SM::kSwingX, last) - task.goal.x) < 5e-3);
    CHECK(std::abs(result.q.values(SM::kSwingY, last) - task.goal.y) < 5e-3);
  }
  SUBCASE("re-solving from the returned optimum is a fixed point") {
    const SolveResult first = solve(problem, offline);
    REQUIRE(first.trace.success);
    WarmStart warm;
    warm.q_traj = first.q;
    warm.u_traj = first.u;
    const SolveResult second = solve(problem, offline, warm);
    CHECK(second.trace.success);
    CHECK(second.trace.iterations <= 1);
    CHECK(second.trace.final_cost == doctest::Approx(first.trace.final_cost).epsilon(1e-9));
  }
  SUBCASE("stationary task stays near the hold-still strategy") {
    Task still = task;
    still.goal = still.moving_foot_start();
    StepCostWeights flat = weights;
    flat.h_apex = 0.0;
    const OcProblem p = make_step_problem(still, model, flat, 100);
    const SolveResult result = solve(p, offline);
    REQUIRE(result.trace.success);

    // Reference strategy: hold the configuration, compensate gravity.
    Eigen::MatrixXd q_hold = p.x0.head(SM::kConfigDim).replicate(1, 100);
    Eigen::MatrixXd u_hold = Eigen::MatrixXd::Zero(SM::kControlDim, 99);
    u_hold.row(SM::kSwingH).setConstant(model.gravity);
    const double hold_cost = total_cost(p, Trajectory(q_hold, model.dt), Trajectory(u_hold, model.dt));
    CHECK(result.trace.final_cost <= hold_cost + 1e-9);
    const Eigen::MatrixXd dq = result.q.values.colwise() - p.x0.head(SM::kConfigDim);
    CHECK(dq.cwiseAbs().maxCoeff() < 0.02);
  }
  SUBCASE("failure trace on non-finite warm start cost") {
    WarmStart warm;
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(SM::kConfigDim, 100);
    bad(0, 50) = 1e200;  // drives the quadratic cost to overflow
    bad(1, 51) = 1e200;
    warm.q_traj = Trajectory(bad, model.dt);
    const SolveResult result = solve(problem, offline, warm);
    CHECK(!result.trace.success);
  }
}

TEST_CASE("warm starts need fewer iterations than cold starts") {
  StepperModel model;
  const StepCostWeights weights;
  SolverConfig online;
  online.max_iters = 20;
  online.convergence_threshold = 1e-2;

  SolverConfig offline;
  offline.max_iters = 50;
  offline.convergence_threshold = 1e-5;

  double cold_total = 0.0;
  double warm_total = 0.0;
  int n = 0;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const Task task = sample_task(seed, seed % 2 == 0 ? Side::Left : Side::Right, TaskRanges());
    const OcProblem problem = make_step_problem(task, model, weights, 100);
    const SolveResult exact = solve(problem, offline);
    REQUIRE(exact.trace.success);

    const SolveResult cold = solve(problem, online);
    WarmStart warm;
    warm.q_traj = exact.q;
    warm.u_traj = exact.u;
    const SolveResult warm_result = solve(problem, online, warm);
    CHECK(warm_result.trace.success);

    cold_total += cold.trace.iterations;
    warm_total += warm_result.trace.iterations;
    ++n;
  }
  MESSAGE("mean iterations cold=", cold_total / n, " warm(exact)=", warm_total / n);
  CHECK(warm_total < cold_total);
}

TEST_CASE("trace CSV export") {
  const OcProblem problem = random_lqr(4, 20);
  SolverConfig config;
  const SolveResult result = solve(problem, config);
  const std::string path = "test_trace.csv";
  write_trace_csv(result.trace, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "iteration,cost,gap_norm,regularization,step_length");
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) ++lines;
  }
  CHECK(lines == result.trace.iterations);
  in.close();
  std::remove(path.c_str());
}

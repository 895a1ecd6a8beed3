// Acceptance suite: runs every acceptance criterion end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "memmo/benchmark.hpp"
#include "memmo/evaluate.hpp"
#include "memmo/factory.hpp"
#include "memmo/memory.hpp"
#include "memmo/multistep.hpp"
#include "memmo/rng.hpp"
#include "oracles.hpp"

using namespace memmo;
using SM = StepperModel;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << std::fixed << v;
  return ss.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: Riccati oracle on random LQR instances.

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

void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  SolverConfig config;
  config.max_iters = 10;
  config.convergence_threshold = 1e-9;

  double worst = 0.0;
  int worst_iters = 0;
  bool all_ok = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const OcProblem problem = random_lqr(seed, 50);
    const testing::LqrSolution oracle = testing::solve_lqr_riccati(problem);
    const SolveResult result = solve(problem, config);
    all_ok = all_ok && result.trace.success;
    worst_iters = std::max(worst_iters, result.trace.iterations);
    for (Eigen::Index t = 0; t < problem.T; ++t) {
      worst = std::max(worst, (result.q.values.col(t) - oracle.xs.col(t).head(SM::kConfigDim))
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    for (Eigen::Index t = 0; t + 1 < problem.T; ++t) {
      worst = std::max(worst, (result.u.values.col(t) - oracle.us.col(t)).cwiseAbs().maxCoeff());
    }
  }
  const double elapsed = seconds_since(t0);
  const bool ok = all_ok && worst <= 1e-8 && worst_iters <= 2 && elapsed < 5.0;
  std::ostringstream ss;
  ss << "Riccati oracle on 20 LQR instances: max error " << worst << " (<= 1e-8), max iterations "
     << worst_iters << " (<= 2), " << fmt(elapsed, 1) << " s (< 5)";
  report(1, ok, ss.str());
}

// ---------------------------------------------------------------------------
// Criteria 2-6: the single-step and multi-step experiments.

struct Experiment {
  GeneratorConfig config;
  SolverConfig online;
  Database crl_train_left, crl_train_right, crl_test;
  Database hpp_train_left, hpp_train_right;
  MemoryPair crl_gpr, hpp_gpr;
  BenchmarkReport single_report;
  double single_seconds = 0.0;
};

Experiment run_single_step_experiment() {
  Experiment exp;
  exp.online.max_iters = 20;
  exp.online.convergence_threshold = 1e-2;

  auto [hpp, crl] = build_databases(1200, 7, exp.config);

  auto split_by_side = [](const Database& db, std::uint64_t seed) {
    const Database left = filter_side(db, Side::Left);
    const Database right = filter_side(db, Side::Right);
    auto [lt, lv] = split_database(left, 500, 100, seed);
    auto [rt, rv] = split_database(right, 500, 100, seed + 1);
    Database test = lv;
    test.meta.side = DatabaseSide::Mixed;
    test.samples.insert(test.samples.end(), rv.samples.begin(), rv.samples.end());
    return std::make_tuple(lt, rt, test);
  };
  std::tie(exp.crl_train_left, exp.crl_train_right, exp.crl_test) = split_by_side(crl, 11);
  Database hpp_test_unused;
  std::tie(exp.hpp_train_left, exp.hpp_train_right, hpp_test_unused) = split_by_side(hpp, 11);

  exp.crl_gpr.label = "gpr_crl";
  exp.crl_gpr.left = train_memory(exp.crl_train_left, 60, 60, RegressorKind::Gpr, true, 21);
  exp.crl_gpr.right = train_memory(exp.crl_train_right, 60, 60, RegressorKind::Gpr, true, 22);
  exp.hpp_gpr.label = "gpr_hpp";
  exp.hpp_gpr.left = train_memory(exp.hpp_train_left, 60, 60, RegressorKind::Gpr, true, 21);
  exp.hpp_gpr.right = train_memory(exp.hpp_train_right, 60, 60, RegressorKind::Gpr, true, 22);

  std::vector<Task> tasks;
  for (const MotionSample& sample : exp.crl_test.samples) tasks.push_back(sample.task);

  std::vector<BenchmarkMethod> methods;
  methods.push_back(BenchmarkMethod::cold());
  methods.push_back({"gpr_crl(q,u0)", &exp.crl_gpr, true, UMode::QuasiStatic});
  methods.push_back({"gpr_hpp(q,u0)", &exp.hpp_gpr, true, UMode::QuasiStatic});
  methods.push_back({"gpr_crl(q)", &exp.crl_gpr, true, UMode::None});
  methods.push_back({"gpr_crl(q,u)", &exp.crl_gpr, true, UMode::Predicted});
  methods.push_back({"gpr_crl(u)", &exp.crl_gpr, false, UMode::Predicted});

  const auto t0 = std::chrono::steady_clock::now();
  exp.single_report = run_single_benchmark(methods, tasks, exp.config.model, exp.config.weights,
                                           exp.online, exp.config.T);
  exp.single_seconds = seconds_since(t0);
  return exp;
}

void criteria_2_3_4(const Experiment& exp, double setup_seconds) {
  const BenchmarkRow& cold = exp.single_report.row("cold");
  const BenchmarkRow& crl = exp.single_report.row("gpr_crl(q,u0)");
  const BenchmarkRow& hpp = exp.single_report.row("gpr_hpp(q,u0)");
  const BenchmarkRow& q_only = exp.single_report.row("gpr_crl(q)");
  const BenchmarkRow& qu = exp.single_report.row("gpr_crl(q,u)");
  const BenchmarkRow& u_only = exp.single_report.row("gpr_crl(u)");

  {
    const double total = setup_seconds + exp.single_seconds;
    const bool ok = crl.iter_mean <= 0.6 * cold.iter_mean && crl.success_rate >= 99.0 &&
                    total < 600.0;
    std::ostringstream ss;
    ss << "warm-start speedup: gpr_crl " << fmt(crl.iter_mean) << " vs cold "
       << fmt(cold.iter_mean) << " iterations (ratio " << fmt(crl.iter_mean / cold.iter_mean)
       << " <= 0.6), warm success " << fmt(crl.success_rate, 1) << "% (>= 99), runtime "
       << fmt(total, 1) << " s (< 600)";
    report(2, ok, ss.str());
  }
  {
    const bool ok = crl.iter_mean + 0.5 <= hpp.iter_mean && hpp.iter_mean + 0.5 <= cold.iter_mean;
    std::ostringstream ss;
    ss << "database ordering: optimized " << fmt(crl.iter_mean) << " < heuristic "
       << fmt(hpp.iter_mean) << " < cold " << fmt(cold.iter_mean)
       << " mean iterations (each gap >= 0.5)";
    report(3, ok, ss.str());
  }
  {
    const bool ok = qu.iter_mean <= crl.iter_mean + 0.25 && crl.iter_mean < q_only.iter_mean &&
                    u_only.iter_mean < cold.iter_mean;
    std::ostringstream ss;
    ss << "ablation ordering: (q,u) " << fmt(qu.iter_mean) << " <= (q,u0) " << fmt(crl.iter_mean)
       << " + 0.25, (q,u0) < (q) " << fmt(q_only.iter_mean) << ", (u) " << fmt(u_only.iter_mean)
       << " < cold " << fmt(cold.iter_mean);
    report(4, ok, ss.str());
  }
}

void criterion_5(const Experiment& exp) {
  auto evaluate_kind = [&](RegressorKind kind) {
    const Memory left = kind == RegressorKind::Gpr
                            ? *exp.crl_gpr.left
                            : train_memory(exp.crl_train_left, 60, 60, kind, false, 21);
    const Memory right = kind == RegressorKind::Gpr
                             ? *exp.crl_gpr.right
                             : train_memory(exp.crl_train_right, 60, 60, kind, false, 22);
    const AccuracyStats l = eval_accuracy(left, filter_side(exp.crl_test, Side::Left));
    const AccuracyStats r = eval_accuracy(right, filter_side(exp.crl_test, Side::Right));
    return std::make_pair(0.5 * (l.traj_err.mean + r.traj_err.mean),
                          0.5 * (l.contact_err.mean + r.contact_err.mean));
  };
  const auto [gpr_traj, gpr_cont] = evaluate_kind(RegressorKind::Gpr);
  const auto [gmr_traj, gmr_cont] = evaluate_kind(RegressorKind::Gmr);
  const auto [knn_traj, knn_cont] = evaluate_kind(RegressorKind::Knn);

  const bool ok = gpr_traj < gmr_traj && gmr_traj < knn_traj && gpr_cont < gmr_cont &&
                  gmr_cont < knn_cont && knn_traj / gpr_traj >= 1.5;
  std::ostringstream ss;
  ss.precision(4);
  ss << "accuracy ordering: traj GPR " << gpr_traj << " < GMR " << gmr_traj << " < KNN "
     << knn_traj << "; contact GPR " << gpr_cont << " < GMR " << gmr_cont << " < KNN " << knn_cont
     << "; KNN/GPR traj ratio " << fmt(knn_traj / gpr_traj, 2) << " (>= 1.5)";
  report(5, ok, ss.str());
}

void criterion_6(const Experiment& exp) {
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<ContactSequence> sequences;
  const TaskRanges& ranges = exp.config.ranges;
  for (int i = 0; i < 25; ++i) {
    const double width = 0.5 * (ranges.stance_width.lo + ranges.stance_width.hi);
    sequences.push_back(plan_contact_sequence(FootPose(0, width / 2, 0),
                                              FootPose(0, -width / 2, 0), 3, ranges,
                                              Rng::derive(31, static_cast<std::uint64_t>(i)),
                                              i % 2 == 0 ? Side::Left : Side::Right));
  }

  // Boundary-knot sharing: rebuild each segment's prediction through the
  // frame recursion and check the concatenation reuses the exact knots.
  bool continuity = true;
  const Eigen::Index T_step = exp.config.T;
  for (const ContactSequence& seq : sequences) {
    const WarmStart warm =
        build_multistep(*exp.crl_gpr.left, *exp.crl_gpr.right, seq, UMode::QuasiStatic);
    continuity = continuity &&
                 warm.q_traj->knots() == static_cast<Eigen::Index>(seq.footsteps()) * (T_step - 1) + 1;
    continuity = continuity && warm.u_traj->knots() == warm.q_traj->knots() - 1;

    FootPose frame = midpoint_pose(seq.steps[0].left, seq.steps[0].right);
    for (std::size_t i = 0; i < seq.footsteps() && continuity; ++i) {
      const Side side = seq.moving_side(i);
      Task local;
      local.side = side;
      local.left0 = se2_to_local(frame, seq.steps[i].left);
      local.right0 = se2_to_local(frame, seq.steps[i].right);
      local.goal = se2_to_local(frame, side == Side::Left ? seq.steps[i + 1].left
                                                          : seq.steps[i + 1].right);
      const WarmStart segment = predict_step(
          side == Side::Left ? *exp.crl_gpr.left : *exp.crl_gpr.right, local, UMode::None);
      const Eigen::Index boundary = static_cast<Eigen::Index>(i) * (T_step - 1);
      // The shared boundary knot carries this segment's first knot exactly.
      const FootPose root_world =
          se2_to_world(frame, FootPose(segment.q_traj->values(SM::kRootX, 0),
                                       segment.q_traj->values(SM::kRootY, 0),
                                       segment.q_traj->values(SM::kRootYaw, 0)));
      continuity = continuity &&
                   warm.q_traj->values(SM::kRootX, boundary) == root_world.x &&
                   warm.q_traj->values(SM::kRootY, boundary) == root_world.y;
      const Eigen::Index last = T_step - 1;
      frame = se2_to_world(frame, FootPose(segment.q_traj->values(SM::kRootX, last),
                                           segment.q_traj->values(SM::kRootY, last),
                                           segment.q_traj->values(SM::kRootYaw, last)));
    }
  }

  std::vector<BenchmarkMethod> methods;
  methods.push_back(BenchmarkMethod::cold());
  methods.push_back({"gpr_crl(q,u0)", &exp.crl_gpr, true, UMode::QuasiStatic});
  const BenchmarkReport report_multi = run_multistep_benchmark(
      methods, sequences, exp.config.model, exp.config.weights, exp.online, T_step);

  const BenchmarkRow& cold = report_multi.row("cold");
  const BenchmarkRow& warm = report_multi.row("gpr_crl(q,u0)");
  const double elapsed = seconds_since(t0);
  const bool ok = warm.iter_mean < cold.iter_mean && continuity && elapsed < 600.0;
  std::ostringstream ss;
  ss << "multi-step: warm " << fmt(warm.iter_mean) << " < cold " << fmt(cold.iter_mean)
     << " mean iterations over 25 three-step sequences, boundary knots shared exactly ("
     << (continuity ? "yes" : "no") << "), runtime " << fmt(elapsed, 1) << " s (< 600)";
  report(6, ok, ss.str());
}

// ---------------------------------------------------------------------------
// Criterion 7: codec suite.

void criterion_7(const Experiment& exp) {
  // Round-trip error on 100 database trajectories at K=60, against the
  // per-dimension range across those trajectories.
  std::vector<Trajectory> trajs;
  for (std::size_t i = 0; i < 100 && i < exp.crl_train_left.size(); ++i) {
    trajs.push_back(exp.crl_train_left.samples[i].q);
  }
  const TrajectoryCodec codec = fit_codec(trajs, 60, 60);

  Eigen::VectorXd lo = Eigen::VectorXd::Constant(SM::kConfigDim, 1e300);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(SM::kConfigDim, -1e300);
  for (const Trajectory& y : trajs) {
    lo = lo.cwiseMin(y.values.rowwise().minCoeff());
    hi = hi.cwiseMax(y.values.rowwise().maxCoeff());
  }
  double worst_rel = 0.0;
  for (const Trajectory& y : trajs) {
    const Trajectory back = decompress(codec, compress(codec, y));
    for (Eigen::Index d = 0; d < SM::kConfigDim; ++d) {
      const double range = hi[d] - lo[d];
      const double err = (back.values.row(d) - y.values.row(d)).cwiseAbs().maxCoeff();
      worst_rel = std::max(worst_rel, err / range);
    }
  }

  // Full-rank PCA round-trip.
  Rng rng(77);
  Eigen::MatrixXd W(30, 8);
  for (Eigen::Index i = 0; i < W.size(); ++i) W(i / 8, i % 8) = rng.normal();
  const PcaModel full = pca_fit(W, 8);
  double full_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v(8);
    for (Eigen::Index i = 0; i < 8; ++i) v[i] = rng.uniform(-3, 3);
    full_err = std::max(full_err, (pca_decode(full, pca_encode(full, v)) - v).cwiseAbs().maxCoeff());
  }

  // Reconstruction MSE equals the discarded eigenvalue mass.
  Eigen::MatrixXd W2(40, 10);
  for (Eigen::Index i = 0; i < W2.size(); ++i) W2(i / 10, i % 10) = rng.normal();
  const PcaModel part = pca_fit(W2, 4);
  double residual = 0.0;
  for (Eigen::Index i = 0; i < 40; ++i) {
    residual +=
        (W2.row(i).transpose() - pca_decode(part, pca_encode(part, W2.row(i).transpose())))
            .squaredNorm();
  }
  residual /= 39.0;
  const double identity_gap = std::abs(residual - part.discarded_variance);

  const bool ok = worst_rel < 0.01 && full_err < 1e-10 && identity_gap < 1e-8;
  std::ostringstream ss;
  ss.precision(3);
  ss << "codec: worst round-trip error " << worst_rel * 100.0
     << "% of range (< 1%), full-rank PCA round-trip " << full_err
     << " (< 1e-10), MSE/discarded-eigenvalue gap " << identity_gap << " (< 1e-8)";
  report(7, ok, ss.str());
}

// ---------------------------------------------------------------------------
// Criterion 8: regressor oracles.

void criterion_8() {
  Rng rng(88);

  // GMR with one component equals the closed-form Gaussian conditional.
  double gmr_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 40;
    Eigen::MatrixXd X(n, 2), Y(n, 2);
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      X(i, 0) = rng.normal();
      X(i, 1) = rng.normal();
      Y(i, 0) = a * X(i, 0) + b * X(i, 1) + 0.1 * rng.normal();
      Y(i, 1) = c * X(i, 0) - X(i, 1) + 0.1 * rng.normal();
    }
    EmConfig config;
    config.covariance_floor = 0.0;
    const GmrModel model = gmr_fit(X, Y, 1, 1, config);
    Eigen::VectorXd q(2);
    q << rng.uniform(-1, 1), rng.uniform(-1, 1);
    gmr_err = std::max(gmr_err, (gmr_predict(model, q) -
                                 testing::gaussian_conditional_mean(X, Y, q))
                                    .cwiseAbs()
                                    .maxCoeff());
  }

  // GPR reproduces training outputs with a tiny nugget.
  Eigen::MatrixXd Xg(50, 9), Yg(50, 3);
  for (Eigen::Index i = 0; i < Xg.size(); ++i) Xg(i / 9, i % 9) = rng.uniform(-1, 1);
  for (Eigen::Index i = 0; i < Yg.size(); ++i) Yg(i / 3, i % 3) = rng.uniform(-1, 1);
  GprKernel kernel{1.0, 1.0, 1e-12};
  const GprModel gpr = gpr_fit(Xg, Yg, kernel);
  double gpr_err = 0.0;
  for (Eigen::Index i = 0; i < 50; ++i) {
    gpr_err = std::max(gpr_err,
                       (gpr_predict(gpr, Xg.row(i).transpose()) - Yg.row(i).transpose())
                           .cwiseAbs()
                           .maxCoeff());
  }

  // k-NN matches the exhaustive scan.
  Eigen::MatrixXd Xk(200, 5), Yk(200, 2);
  for (Eigen::Index i = 0; i < Xk.size(); ++i) Xk(i / 5, i % 5) = rng.uniform(-1, 1);
  for (Eigen::Index i = 0; i < Yk.size(); ++i) Yk(i / 2, i % 2) = rng.uniform(-1, 1);
  const KnnModel knn = knn_fit(Xk, Yk, 1);
  bool knn_ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd q(5);
    for (Eigen::Index j = 0; j < 5; ++j) q[j] = rng.uniform(-1.2, 1.2);
    Eigen::Index best = 0;
    double best_d = 1e300;
    for (Eigen::Index i = 0; i < 200; ++i) {
      const double d = (Xk.row(i).transpose() - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    knn_ok = knn_ok && knn_predict(knn, q) == Yk.row(best).transpose();
  }

  // BGMR recovers both modes of the bimodal toy mapping.
  Eigen::MatrixXd Xb(200, 1), Yb(200, 1);
  {
    Rng toy(12345);
    Eigen::Index row = 0;
    for (int i = 0; i < 60; ++i) {
      const double x = toy.uniform(0.0, 4.0);
      Xb(row, 0) = x;
      Yb(row++, 0) = 30.0 - 6.0 * x + 0.4 * toy.normal();
    }
    for (int i = 0; i < 60; ++i) {
      const double x = toy.uniform(0.0, 4.0);
      Xb(row, 0) = x;
      Yb(row++, 0) = 50.0 - 4.125 * x + 0.4 * toy.normal();
    }
    for (int i = 0; i < 40; ++i) {
      const double x = toy.uniform(4.0, 6.0);
      Xb(row, 0) = x;
      Yb(row++, 0) = 5.0 + 2.0 * x + 0.4 * toy.normal();
    }
    for (int i = 0; i < 40; ++i) {
      const double x = toy.uniform(6.0, 10.0);
      Xb(row, 0) = x;
      Yb(row++, 0) = 70.0 - 3.0 * x + 0.4 * toy.normal();
    }
  }
  const BgmrModel bgmr = bgmr_fit(Xb, Yb, 10, BgmrPriorConfig{}, 2024);
  Eigen::VectorXd qb(1);
  qb << 0.8;
  const std::vector<BgmrMode> modes = bgmr_predict(bgmr, qb);
  bool bgmr_ok = modes.size() >= 2;
  double mode_lo = 0.0, mode_hi = 0.0;
  if (bgmr_ok) {
    mode_lo = std::min(modes[0].mean[0], modes[1].mean[0]);
    mode_hi = std::max(modes[0].mean[0], modes[1].mean[0]);
    bgmr_ok = std::abs(mode_lo - 25.2) < 1.0 && std::abs(mode_hi - 46.7) < 1.0 &&
              modes[0].probability > 0.3 && modes[0].probability < 0.7 &&
              modes[1].probability > 0.3 && modes[1].probability < 0.7;
  }

  const bool ok = gmr_err < 1e-10 && gpr_err < 1e-6 && knn_ok && bgmr_ok;
  std::ostringstream ss;
  ss.precision(3);
  ss << "regressor oracles: GMR(K=1) conditional error " << gmr_err
     << " (< 1e-10), GPR interpolation error " << gpr_err << " (< 1e-6), k-NN scan match "
     << (knn_ok ? "yes" : "no") << ", BGMR modes " << fmt(mode_lo, 1) << "/" << fmt(mode_hi, 1)
     << " near 25.2/46.7 with balanced probabilities (" << (bgmr_ok ? "yes" : "no") << ")";
  report(8, ok, ss.str());
}

// ---------------------------------------------------------------------------
// Criterion 9: derivative checks for every cost term.

void criterion_9() {
  Rng rng(99);
  StepperModel model;
  const StepCostWeights weights;
  const Task task = sample_task(5, Side::Left, TaskRanges());
  const OcProblem single = make_step_problem(task, model, weights, 30);

  ContactSequence seq;
  seq.steps.push_back({FootPose(0, 0.1, 0), FootPose(0, -0.1, 0)});
  seq.steps.push_back({FootPose(0.2, 0.1, 0.1), FootPose(0, -0.1, 0)});
  seq.steps.push_back({FootPose(0.2, 0.1, 0.1), FootPose(0.4, -0.1, 0.2)});
  const OcProblem multi = make_multistep_problem(seq, model, weights, 20);

  std::vector<std::shared_ptr<const CostTerm>> terms;
  std::vector<std::string> seen;
  for (const OcProblem* problem : {&single, &multi}) {
    for (const auto& knot : problem->knot_costs) {
      for (const auto& term : knot) {
        if (std::find(seen.begin(), seen.end(), term->name()) == seen.end()) {
          seen.push_back(term->name());
          terms.push_back(term);
        }
      }
    }
  }

  double worst = 0.0;
  std::string worst_term;
  for (const auto& term : terms) {
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::VectorXd x(SM::kStateDim), u(SM::kControlDim);
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-0.5, 0.5);
      for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.uniform(-3, 3);

      CostExpansion e;
      e.resize(SM::kStateDim, SM::kControlDim);
      term->accumulate(x, u, e);

      const Eigen::VectorXd gx = testing::fd_gradient_x(*term, x, u);
      const Eigen::VectorXd gu = testing::fd_gradient_u(*term, x, u);
      const Eigen::MatrixXd H = testing::fd_hessian(*term, x, u);

      double rel = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        rel = std::max(rel, std::abs(e.lx[i] - gx[i]) / std::max(1.0, std::abs(e.lx[i])));
      }
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        rel = std::max(rel, std::abs(e.lu[i] - gu[i]) / std::max(1.0, std::abs(e.lu[i])));
      }
      const Eigen::Index nx = x.size();
      for (Eigen::Index i = 0; i < nx; ++i) {
        for (Eigen::Index j = 0; j < nx; ++j) {
          rel = std::max(rel,
                         std::abs(e.lxx(i, j) - H(i, j)) / std::max(1.0, std::abs(e.lxx(i, j))));
        }
        for (Eigen::Index j = 0; j < u.size(); ++j) {
          rel = std::max(rel, std::abs(e.lxu(i, j) - H(i, nx + j)) /
                                  std::max(1.0, std::abs(e.lxu(i, j))));
        }
      }
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        for (Eigen::Index j = 0; j < u.size(); ++j) {
          rel = std::max(rel, std::abs(e.luu(i, j) - H(nx + i, nx + j)) /
                                  std::max(1.0, std::abs(e.luu(i, j))));
        }
      }
      if (rel > worst) {
        worst = rel;
        worst_term = term->name();
      }
    }
  }
  const bool ok = worst < 1e-5;
  std::ostringstream ss;
  ss.precision(3);
  ss << "derivative checks on " << terms.size() << " cost terms x 50 points: worst relative error "
     << worst << " (< 1e-5, worst term: " << worst_term << ")";
  report(9, ok, ss.str());
}

// ---------------------------------------------------------------------------
// Criterion 10: CLI determinism.

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void criterion_10(const std::string& cli) {
  const std::string dir = "acceptance_tmp";
  if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) {
    report(10, false, "determinism: could not create a scratch directory");
    return;
  }
  const std::string quiet = " > /dev/null 2>&1";

  bool ok = true;
  std::string failed_step;
  auto run_twice = [&](const std::string& args, const std::vector<std::string>& outputs,
                       const std::string& label) {
    if (!ok) return;
    std::vector<std::string> first;
    if (std::system((cli + " " + args + quiet).c_str()) != 0) {
      ok = false;
      failed_step = label + " (nonzero exit)";
      return;
    }
    for (const std::string& f : outputs) first.push_back(slurp(dir + "/" + f));
    if (std::system((cli + " " + args + quiet).c_str()) != 0) {
      ok = false;
      failed_step = label + " (nonzero exit on rerun)";
      return;
    }
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      if (slurp(dir + "/" + outputs[i]) != first[i] || first[i].empty()) {
        ok = false;
        failed_step = label + " (" + outputs[i] + " differs or empty)";
        return;
      }
    }
  };

  run_twice("gen-db --n 20 --seed 3 --out-heuristic " + dir + "/hpp.jsonl --out-optimized " + dir +
                "/crl.jsonl --manifest " + dir + "/manifest.json",
            {"hpp.jsonl", "crl.jsonl", "manifest.json"}, "gen-db");
  run_twice("train --db " + dir + "/crl.jsonl --kind gpr --K 40 --M 30 --with-u-model --seed 4 " +
                "--label gpr_crl --out " + dir + "/mem.json",
            {"mem.json"}, "train");
  run_twice("bench-single --memories " + dir + "/mem.json --test-db " + dir +
                "/crl.jsonl --ablation --out " + dir + "/single.csv",
            {"single.csv"}, "bench-single");
  run_twice("gen-seq --n 4 --steps 3 --seed 5 --out " + dir + "/seqs.json", {"seqs.json"},
            "gen-seq");
  run_twice("bench-multi --memories " + dir + "/mem.json --sequences " + dir +
                "/seqs.json --T-step 100 --out " + dir + "/multi.csv",
            {"multi.csv"}, "bench-multi");

  if (std::system(("rm -rf " + dir).c_str()) != 0) {
    std::cerr << "warning: could not remove " << dir << "\n";
  }
  std::ostringstream ss;
  ss << "determinism: gen-db, train, bench-single, bench-multi byte-identical across reruns";
  if (!ok) ss << " — failed at " << failed_step;
  report(10, ok, ss.str());
}

}  // namespace

int main(int argc, char** argv) {
  std::printf("memmo acceptance suite\n");
  const auto t0 = std::chrono::steady_clock::now();

  criterion_1();

  const auto t_exp = std::chrono::steady_clock::now();
  Experiment exp = run_single_step_experiment();
  const double setup_seconds = seconds_since(t_exp);
  criteria_2_3_4(exp, setup_seconds);
  criterion_5(exp);
  criterion_6(exp);
  criterion_7(exp);
  criterion_8();
  criterion_9();

  if (argc > 1) {
    criterion_10(argv[1]);
  } else {
    report(10, false, "determinism: CLI path missing (pass the memmo binary as argv[1])");
  }

  std::printf("%d/10 criteria passed in %.1f s\n", 10 - g_failures, seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}

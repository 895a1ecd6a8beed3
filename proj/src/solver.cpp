#include "memmo/solver.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace memmo {

namespace {

struct Workspace {
  Eigen::Index nx = 0, nu = 0, T = 0;
  std::vector<Eigen::VectorXd> xs, us, xs_try, us_try;
  std::vector<Eigen::VectorXd> gaps;  // gaps[t] = f(xs[t-1], us[t-1]) - xs[t], gaps[0] = 0
  std::vector<CostExpansion> expansions;
  std::vector<Eigen::VectorXd> k;  // feedforward
  std::vector<Eigen::MatrixXd> K; // feedback
  std::vector<Eigen::VectorXd> Qu;
  std::vector<Eigen::MatrixXd> Quu;
  std::vector<Eigen::VectorXd> Vx;
  std::vector<Eigen::MatrixXd> Vxx;
};

double max_gap_norm(const Workspace& ws) {
  double g = 0.0;
  for (const auto& gap : ws.gaps) g = std::max(g, gap.lpNorm<Eigen::Infinity>());
  return g;
}

void compute_gaps(const OcProblem& problem, Workspace& ws) {
  ws.gaps[0].setZero();
  for (Eigen::Index t = 0; t + 1 < ws.T; ++t) {
    const AffineDynamics& dyn = problem.dynamics(t);
    ws.gaps[static_cast<std::size_t>(t + 1)] =
        dyn.A * ws.xs[static_cast<std::size_t>(t)] + dyn.B * ws.us[static_cast<std::size_t>(t)] +
        dyn.c - ws.xs[static_cast<std::size_t>(t + 1)];
  }
}

double total_cost_of(const OcProblem& problem, const std::vector<Eigen::VectorXd>& xs,
                     const std::vector<Eigen::VectorXd>& us, const Eigen::VectorXd& u_zero) {
  double cost = 0.0;
  for (Eigen::Index t = 0; t + 1 < problem.T; ++t) {
    cost += problem.knot_cost(t, xs[static_cast<std::size_t>(t)], us[static_cast<std::size_t>(t)]);
  }
  cost += problem.knot_cost(problem.T - 1, xs[static_cast<std::size_t>(problem.T - 1)], u_zero);
  return cost;
}

}  // namespace

SolveResult solve(const OcProblem& problem, const SolverConfig& config, const WarmStart& warm) {
  const Eigen::Index nx = problem.state_dim();
  const Eigen::Index nu = problem.control_dim();
  const Eigen::Index T = problem.T;
  if (static_cast<Eigen::Index>(problem.knot_costs.size()) != T) {
    throw std::invalid_argument("problem knot_costs must cover every knot");
  }
  if (config.max_iters < 1 || config.convergence_threshold <= 0.0 || config.step_set.empty()) {
    throw std::invalid_argument("solver config needs max_iters >= 1, a positive threshold, and steps");
  }

  Workspace ws;
  ws.nx = nx;
  ws.nu = nu;
  ws.T = T;
  ws.xs.assign(static_cast<std::size_t>(T), Eigen::VectorXd::Zero(nx));
  ws.xs_try = ws.xs;
  ws.us.assign(static_cast<std::size_t>(T - 1), Eigen::VectorXd::Zero(nu));
  ws.us_try = ws.us;
  ws.gaps.assign(static_cast<std::size_t>(T), Eigen::VectorXd::Zero(nx));
  ws.expansions.resize(static_cast<std::size_t>(T));
  for (auto& e : ws.expansions) e.resize(nx, nu);
  ws.k.assign(static_cast<std::size_t>(T - 1), Eigen::VectorXd::Zero(nu));
  ws.K.assign(static_cast<std::size_t>(T - 1), Eigen::MatrixXd::Zero(nu, nx));
  ws.Qu = ws.k;
  ws.Quu.assign(static_cast<std::size_t>(T - 1), Eigen::MatrixXd::Zero(nu, nu));
  ws.Vx.assign(static_cast<std::size_t>(T), Eigen::VectorXd::Zero(nx));
  ws.Vxx.assign(static_cast<std::size_t>(T), Eigen::MatrixXd::Zero(nx, nx));

  // Initial candidate: x0 is always pinned; missing warm-start components
  // fall back to the cold defaults (hold x0, zero controls).
  if (warm.u_traj.has_value()) {
    if (warm.u_traj->dims() != nu || warm.u_traj->knots() != T - 1) {
      throw std::invalid_argument("warm-start controls have wrong shape");
    }
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
      ws.us[static_cast<std::size_t>(t)] = warm.u_traj->values.col(t);
    }
  }
  if (warm.q_traj.has_value()) {
    if (warm.q_traj->dims() != nx / 2 || warm.q_traj->knots() != T) {
      throw std::invalid_argument("warm-start configurations have wrong shape");
    }
    const Eigen::MatrixXd lifted = problem.lift(*warm.q_traj);
    for (Eigen::Index t = 1; t < T; ++t) ws.xs[static_cast<std::size_t>(t)] = lifted.col(t);
  } else {
    Eigen::VectorXd hold = problem.x0;
    hold.tail(nx / 2).setZero();
    for (Eigen::Index t = 1; t < T; ++t) ws.xs[static_cast<std::size_t>(t)] = hold;
  }
  ws.xs[0] = problem.x0;

  const Eigen::VectorXd u_zero = Eigen::VectorXd::Zero(nu);

  SolverTrace trace;
  auto finish = [&](bool success) {
    SolveResult result;
    Eigen::MatrixXd q(nx / 2, T);
    Eigen::MatrixXd u(nu, T - 1);
    for (Eigen::Index t = 0; t < T; ++t) q.col(t) = ws.xs[static_cast<std::size_t>(t)].head(nx / 2);
    for (Eigen::Index t = 0; t + 1 < T; ++t) u.col(t) = ws.us[static_cast<std::size_t>(t)];
    result.q = Trajectory(std::move(q), problem.model.dt);
    result.u = Trajectory(std::move(u), problem.model.dt);
    compute_gaps(problem, ws);
    trace.final_gap_norm = max_gap_norm(ws);
    trace.success = success && trace.converged && trace.final_gap_norm <= config.gap_tolerance;
    result.trace = trace;
    return result;
  };

  double cost = total_cost_of(problem, ws.xs, ws.us, u_zero);
  if (!std::isfinite(cost)) return finish(false);

  double reg = config.reg_init;
  auto bump_reg = [&]() { reg = (reg <= 0.0) ? config.reg_min : std::min(reg * config.reg_factor, config.reg_max); };
  auto drop_reg = [&]() {
    if (reg > 0.0) {
      reg /= config.reg_factor;
      if (reg < config.reg_min) reg = 0.0;
    }
  };

  for (int iter = 0; iter < config.max_iters; ++iter) {
    compute_gaps(problem, ws);
    const double gap_norm = max_gap_norm(ws);
    const bool feasible = gap_norm <= config.feasibility_tolerance;

    for (Eigen::Index t = 0; t < T; ++t) {
      const Eigen::VectorXd& u = (t + 1 < T) ? ws.us[static_cast<std::size_t>(t)] : u_zero;
      problem.knot_expansion(t, ws.xs[static_cast<std::size_t>(t)], u,
                             ws.expansions[static_cast<std::size_t>(t)]);
    }

    // Backward pass; repeats with more regularization if a Quu factorization
    // fails. Gap terms follow the feasibility-prone recursion: the value
    // gradient at each node is deflected by Vxx * gap before propagating.
    bool backward_ok = false;
    while (!backward_ok) {
      backward_ok = true;
      const std::size_t last = static_cast<std::size_t>(T - 1);
      ws.Vxx[last] = ws.expansions[last].lxx;
      ws.Vx[last] = ws.expansions[last].lx;
      if (!feasible) ws.Vx[last] += ws.Vxx[last] * ws.gaps[last];

      for (Eigen::Index t = T - 2; t >= 0; --t) {
        const std::size_t st = static_cast<std::size_t>(t);
        const AffineDynamics& dyn = problem.dynamics(t);
        const CostExpansion& e = ws.expansions[st];
        const Eigen::VectorXd& Vx_next = ws.Vx[st + 1];
        const Eigen::MatrixXd& Vxx_next = ws.Vxx[st + 1];

        const Eigen::MatrixXd AtV = dyn.A.transpose() * Vxx_next;
        const Eigen::MatrixXd BtV = dyn.B.transpose() * Vxx_next;
        const Eigen::VectorXd Qx = e.lx + dyn.A.transpose() * Vx_next;
        ws.Qu[st] = e.lu + dyn.B.transpose() * Vx_next;
        const Eigen::MatrixXd Qxx = e.lxx + AtV * dyn.A;
        const Eigen::MatrixXd Qxu = e.lxu + AtV * dyn.B;
        ws.Quu[st] = e.luu + BtV * dyn.B;
        ws.Quu[st].diagonal().array() += reg;

        Eigen::LLT<Eigen::MatrixXd> llt(ws.Quu[st]);
        if (llt.info() != Eigen::Success) {
          if (reg >= config.reg_max) {
            trace.final_cost = cost;
            return finish(false);
          }
          bump_reg();
          backward_ok = false;
          break;
        }
        ws.k[st] = llt.solve(ws.Qu[st]);
        ws.K[st] = llt.solve(Qxu.transpose());

        ws.Vx[st] = Qx + ws.K[st].transpose() * (ws.Quu[st] * ws.k[st]) -
                    2.0 * (ws.K[st].transpose() * ws.Qu[st]);
        ws.Vxx[st] = Qxx - Qxu * ws.K[st];
        ws.Vxx[st] = 0.5 * (ws.Vxx[st] + ws.Vxx[st].transpose()).eval();
        if (!feasible) ws.Vx[st] += ws.Vxx[st] * ws.gaps[st];

        if (!ws.Vx[st].allFinite() || !ws.Vxx[st].allFinite()) {
          trace.final_cost = cost;
          return finish(false);
        }
      }
    }

    // Expected improvement of a unit step, with gap contributions.
    double dg = 0.0, dq = 0.0;
    for (Eigen::Index t = 0; t + 1 < T; ++t) {
      const std::size_t st = static_cast<std::size_t>(t);
      dg += ws.Qu[st].dot(ws.k[st]);
      dq -= ws.k[st].dot(ws.Quu[st] * ws.k[st]);
    }
    if (!feasible) {
      for (Eigen::Index t = 0; t < T; ++t) {
        const std::size_t st = static_cast<std::size_t>(t);
        dg -= ws.Vx[st].dot(ws.gaps[st]);
        dq += ws.gaps[st].dot(ws.Vxx[st] * ws.gaps[st]);
      }
    }

    if (feasible && dg + 0.5 * dq < config.convergence_threshold) {
      trace.converged = true;
      trace.final_cost = cost;
      return finish(true);
    }

    // Line search over the configured step set; only cost-decreasing steps
    // are accepted, so the cost sequence is monotone.
    bool accepted = false;
    double used_step = 0.0;
    for (double alpha : config.step_set) {
      ws.xs_try[0] = problem.x0;
      bool finite = true;
      for (Eigen::Index t = 0; t + 1 < T; ++t) {
        const std::size_t st = static_cast<std::size_t>(t);
        const Eigen::VectorXd dx = ws.xs_try[st] - ws.xs[st];
        ws.us_try[st] = ws.us[st] - alpha * ws.k[st] - ws.K[st] * dx;
        const AffineDynamics& dyn = problem.dynamics(t);
        Eigen::VectorXd xnext = dyn.A * ws.xs_try[st] + dyn.B * ws.us_try[st] + dyn.c;
        if (!feasible && alpha < 1.0) {
          xnext -= (1.0 - alpha) * ws.gaps[st + 1];
        }
        if (!xnext.allFinite()) {
          finite = false;
          break;
        }
        ws.xs_try[st + 1] = std::move(xnext);
      }
      if (!finite) continue;

      const double cost_try = total_cost_of(problem, ws.xs_try, ws.us_try, u_zero);
      if (!std::isfinite(cost_try)) continue;

      double dv = 0.0;
      if (!feasible) {
        for (Eigen::Index t = 0; t < T; ++t) {
          const std::size_t st = static_cast<std::size_t>(t);
          dv -= ws.gaps[st].dot(ws.Vxx[st] * (ws.xs_try[st] - ws.xs[st]));
        }
      }
      const double d1 = dg + dv;
      const double d2 = dq - 2.0 * dv;
      const double expected = alpha * (d1 + 0.5 * alpha * d2);
      const double actual = cost - cost_try;

      bool accept = false;
      if (expected > 0.0) {
        accept = actual > config.accept_ratio * expected;
      } else if (!feasible) {
        // Gap-closing step: the model predicts a bounded cost increase.
        accept = actual > config.accept_negstep_ratio * expected;
      }
      if (accept) {
        ws.xs.swap(ws.xs_try);
        ws.us.swap(ws.us_try);
        cost = cost_try;
        accepted = true;
        used_step = alpha;
        break;
      }
    }

    trace.records.push_back({iter + 1, cost, gap_norm, reg, used_step});
    trace.iterations = iter + 1;

    if (accepted) {
      if (used_step >= config.step_set.front()) {
        drop_reg();
      } else if (used_step <= config.step_set.back()) {
        bump_reg();
        if (reg >= config.reg_max) {
          trace.final_cost = cost;
          return finish(false);
        }
      }
    } else {
      if (reg >= config.reg_max) {
        trace.final_cost = cost;
        return finish(false);
      }
      bump_reg();
    }
  }

  trace.final_cost = cost;
  return finish(true);  // hit the iteration cap; success still needs converged + closed gaps
}

void write_trace_csv(const SolverTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "iteration,cost,gap_norm,regularization,step_length\n";
  out.precision(17);
  for (const IterationRecord& rec : trace.records) {
    out << rec.iteration << ',' << rec.cost << ',' << rec.gap_norm << ',' << rec.regularization
        << ',' << rec.step_length << "\n";
  }
}

}  // namespace memmo

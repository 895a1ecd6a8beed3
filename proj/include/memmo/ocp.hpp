#pragma once

#include <Eigen/Core>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "memmo/stepper.hpp"
#include "memmo/task.hpp"
#include "memmo/trajectory.hpp"

namespace memmo {

/// Quadratic expansion of the cost at one knot.
struct CostExpansion {
  double value = 0.0;
  Eigen::VectorXd lx, lu;
  Eigen::MatrixXd lxx, luu, lxu;

  void resize(Eigen::Index nx, Eigen::Index nu);
  void set_zero();
};

/// One additive cost term attached to a knot. Terms provide exact analytic
/// gradients and Hessians; the backward pass consumes them directly.
class CostTerm {
 public:
  virtual ~CostTerm() = default;
  virtual double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const = 0;
  virtual void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          CostExpansion& e) const = 0;
  virtual std::string name() const = 0;
};

/// 0.5 (x - ref)^T diag(w) (x - ref) over the full state.
class QuadraticStateCost : public CostTerm {
 public:
  QuadraticStateCost(Eigen::VectorXd weights, Eigen::VectorXd reference, std::string name);
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  CostExpansion& e) const override;
  std::string name() const override { return name_; }

 private:
  Eigen::VectorXd weights_;
  Eigen::VectorXd reference_;
  std::string name_;
};

/// 0.5 u^T diag(w) u.
class QuadraticControlCost : public CostTerm {
 public:
  QuadraticControlCost(Eigen::VectorXd weights, std::string name);
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  CostExpansion& e) const override;
  std::string name() const override { return name_; }

 private:
  Eigen::VectorXd weights_;
  std::string name_;
};

/// 0.25 w sum_i u_i^4. Prices sustained large controls (gravity support)
/// superlinearly; a cold start's quadratic model underestimates it until the
/// iterates carry realistic controls, which is what makes control warm
/// starts informative under linear dynamics.
class QuarticControlCost : public CostTerm {
 public:
  QuarticControlCost(double weight, std::string name);
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  CostExpansion& e) const override;
  std::string name() const override { return name_; }

 private:
  double weight_;
  std::string name_;
};

/// Heading-anisotropic velocity penalty for one (yaw, vx, vy) triple:
/// 0.5 (w_long v_long^2 + w_lat v_lat^2) with [v_long, v_lat] the planar
/// velocity rotated into the body heading. Sideways sliding costs more than
/// rolling forward, so optimal paths curve with the yaw.
class HeadingVelocityCost : public CostTerm {
 public:
  HeadingVelocityCost(double weight_long, double weight_lat, Eigen::Index yaw_index,
                      Eigen::Index vx_index, Eigen::Index vy_index, std::string name);
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  CostExpansion& e) const override;
  std::string name() const override { return name_; }

 private:
  double weight_long_;
  double weight_lat_;
  Eigen::Index iyaw_, ivx_, ivy_;
  std::string name_;
};

/// Ground-clearance penalty: w * sigma(h) * 0.5 |v_xy|^2 with a logistic
/// sigma(h) = 1 / (1 + exp((h - h_ref)/width)). Dragging the swing foot near
/// the ground is expensive; lifting it turns the penalty off. This is the
/// term that makes the step problem genuinely nonlinear.
class SwingClearanceCost : public CostTerm {
 public:
  SwingClearanceCost(double weight, double h_ref, double width);
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  CostExpansion& e) const override;
  std::string name() const override { return "swing_clearance"; }

 private:
  double weight_;
  double h_ref_;
  double width_;
};

/// Evaluates a wrapped state cost on the integrator image A x + B u + c.
/// Used at step boundaries of multi-step problems, where the landed foot pose
/// exists only pre-reset.
class PostDynamicsCost : public CostTerm {
 public:
  PostDynamicsCost(std::shared_ptr<const CostTerm> inner, Eigen::MatrixXd A, Eigen::MatrixXd B,
                   Eigen::VectorXd c);
  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const override;
  void accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  CostExpansion& e) const override;
  std::string name() const override { return "post_dynamics(" + inner_->name() + ")"; }

 private:
  std::shared_ptr<const CostTerm> inner_;
  Eigen::MatrixXd A_, B_;
  Eigen::VectorXd c_;
};

struct AffineDynamics {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::VectorXd c;
};

/// Cost weights of the one-step problem. Running weights are per unit time;
/// problem construction folds in dt.
struct StepCostWeights {
  double control_reg = 2e-3;
  double control_quartic = 3e-3;
  double state_reg = 5e-1;
  double velocity_reg = 1e-2;
  double apex = 2e4;
  double clearance = 400.0;
  double heading_damping = 30.0;       // lateral-velocity weight, root and swing
  double heading_long_fraction = 0.01; // longitudinal weight as a fraction of lateral
  double clearance_height = 0.02;
  double clearance_width = 0.01;
  double terminal_contact = 4e4;
  double terminal_root = 4e3;
  double terminal_velocity = 400.0;
  double h_apex = 0.05;
};

/// A discrete optimal-control instance over the stepper: per-interval affine
/// dynamics (uniform unless overridden at step-boundary resets), per-knot
/// additive cost terms, and the initial state.
struct OcProblem {
  StepperModel model;
  Eigen::VectorXd x0;
  Eigen::Index T = 0;  // knot count; controls live on 0 .. T-2

  AffineDynamics uniform_dynamics;
  std::map<Eigen::Index, AffineDynamics> dynamics_overrides;  // keyed by interval index
  std::vector<Eigen::Index> reset_knots;  // knots whose swing coordinates are reset

  std::vector<std::vector<std::shared_ptr<const CostTerm>>> knot_costs;  // size T

  const AffineDynamics& dynamics(Eigen::Index interval) const;
  Eigen::Index state_dim() const { return x0.size(); }
  Eigen::Index control_dim() const { return uniform_dynamics.B.cols(); }

  double knot_cost(Eigen::Index t, const Eigen::VectorXd& x, const Eigen::VectorXd& u) const;
  void knot_expansion(Eigen::Index t, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                      CostExpansion& e) const;

  /// Lifts a configuration warm start to full states: velocities from the
  /// integrator's exact finite-difference relation, swing velocities zeroed
  /// at reset knots.
  Eigen::MatrixXd lift(const Trajectory& q) const;
};

/// Builds the single-step problem for a task: start at rest with the root at
/// the origin and the swing foot at its initial pose; running state/control
/// regularization, mid-step apex via-point, ground clearance; terminal goal
/// placement, root-between-feet, and zero-velocity costs.
OcProblem make_step_problem(const Task& task, const StepperModel& model,
                            const StepCostWeights& weights, Eigen::Index T);

/// Total cost of a configuration/control trajectory pair under the problem's
/// cost terms (states lifted with the problem's convention).
double total_cost(const OcProblem& problem, const Trajectory& q, const Trajectory& u);

namespace detail {
/// One step's end-of-step cost bundle: goal placement of the moving foot,
/// root between the final feet, zero velocity. Shared between the single and
/// multi-step builders.
std::shared_ptr<const CostTerm> make_step_terminal_cost(const Task& task,
                                                        const StepCostWeights& weights);
Eigen::VectorXd state_reg_reference(const Eigen::VectorXd& x0);
}  // namespace detail

}  // namespace memmo

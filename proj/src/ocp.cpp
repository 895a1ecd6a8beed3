#include "memmo/ocp.hpp"

#include <cmath>
#include <stdexcept>

namespace memmo {

void CostExpansion::resize(Eigen::Index nx, Eigen::Index nu) {
  lx.resize(nx);
  lu.resize(nu);
  lxx.resize(nx, nx);
  luu.resize(nu, nu);
  lxu.resize(nx, nu);
  set_zero();
}

void CostExpansion::set_zero() {
  value = 0.0;
  lx.setZero();
  lu.setZero();
  lxx.setZero();
  luu.setZero();
  lxu.setZero();
}

QuadraticStateCost::QuadraticStateCost(Eigen::VectorXd weights, Eigen::VectorXd reference,
                                       std::string name)
    : weights_(std::move(weights)), reference_(std::move(reference)), name_(std::move(name)) {
  if (weights_.size() != reference_.size()) {
    throw std::invalid_argument("state cost weights/reference mismatch");
  }
}

double QuadraticStateCost::value(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  const Eigen::VectorXd r = x - reference_;
  return 0.5 * r.dot(weights_.cwiseProduct(r));
}

void QuadraticStateCost::accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd&,
                                    CostExpansion& e) const {
  const Eigen::VectorXd r = x - reference_;
  const Eigen::VectorXd wr = weights_.cwiseProduct(r);
  e.value += 0.5 * r.dot(wr);
  e.lx += wr;
  e.lxx.diagonal() += weights_;
}

QuadraticControlCost::QuadraticControlCost(Eigen::VectorXd weights, std::string name)
    : weights_(std::move(weights)), name_(std::move(name)) {}

QuarticControlCost::QuarticControlCost(double weight, std::string name)
    : weight_(weight), name_(std::move(name)) {}

double QuarticControlCost::value(const Eigen::VectorXd&, const Eigen::VectorXd& u) const {
  return 0.25 * weight_ * u.array().square().square().sum();
}

void QuarticControlCost::accumulate(const Eigen::VectorXd&, const Eigen::VectorXd& u,
                                    CostExpansion& e) const {
  e.value += 0.25 * weight_ * u.array().square().square().sum();
  e.lu += weight_ * u.array().cube().matrix();
  e.luu.diagonal() += 3.0 * weight_ * u.array().square().matrix();
}

double QuadraticControlCost::value(const Eigen::VectorXd&, const Eigen::VectorXd& u) const {
  return 0.5 * u.dot(weights_.cwiseProduct(u));
}

void QuadraticControlCost::accumulate(const Eigen::VectorXd&, const Eigen::VectorXd& u,
                                      CostExpansion& e) const {
  const Eigen::VectorXd wu = weights_.cwiseProduct(u);
  e.value += 0.5 * u.dot(wu);
  e.lu += wu;
  e.luu.diagonal() += weights_;
}

HeadingVelocityCost::HeadingVelocityCost(double weight_long, double weight_lat,
                                         Eigen::Index yaw_index, Eigen::Index vx_index,
                                         Eigen::Index vy_index, std::string name)
    : weight_long_(weight_long),
      weight_lat_(weight_lat),
      iyaw_(yaw_index),
      ivx_(vx_index),
      ivy_(vy_index),
      name_(std::move(name)) {}

double HeadingVelocityCost::value(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  const double c = std::cos(x[iyaw_]);
  const double s = std::sin(x[iyaw_]);
  const double v_long = c * x[ivx_] + s * x[ivy_];
  const double v_lat = -s * x[ivx_] + c * x[ivy_];
  return 0.5 * (weight_long_ * v_long * v_long + weight_lat_ * v_lat * v_lat);
}

void HeadingVelocityCost::accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd&,
                                     CostExpansion& e) const {
  const double c = std::cos(x[iyaw_]);
  const double s = std::sin(x[iyaw_]);
  const double vx = x[ivx_];
  const double vy = x[ivy_];
  const double a = c * vx + s * vy;   // v_long
  const double b = -s * vx + c * vy;  // v_lat

  e.value += 0.5 * (weight_long_ * a * a + weight_lat_ * b * b);

  // grad a = (b, c, s), grad b = (-a, -s, c) in the (yaw, vx, vy) block.
  const double ga = weight_long_ * a;
  const double gb = weight_lat_ * b;
  e.lx[iyaw_] += ga * b - gb * a;
  e.lx[ivx_] += ga * c - gb * s;
  e.lx[ivy_] += ga * s + gb * c;

  // Hessian: w (grad grad^T + v * hess(v)) per component, with
  // hess(a) = [[-a, -s, c], [-s, 0, 0], [c, 0, 0]] and
  // hess(b) = [[-b, -c, -s], [-c, 0, 0], [-s, 0, 0]].
  const Eigen::Index idx[3] = {iyaw_, ivx_, ivy_};
  const double grad_a[3] = {b, c, s};
  const double grad_b[3] = {-a, -s, c};
  double hess_a[3][3] = {{-a, -s, c}, {-s, 0, 0}, {c, 0, 0}};
  double hess_b[3][3] = {{-b, -c, -s}, {-c, 0, 0}, {-s, 0, 0}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      e.lxx(idx[i], idx[j]) += weight_long_ * (grad_a[i] * grad_a[j] + a * hess_a[i][j]) +
                               weight_lat_ * (grad_b[i] * grad_b[j] + b * hess_b[i][j]);
    }
  }
}

SwingClearanceCost::SwingClearanceCost(double weight, double h_ref, double width)
    : weight_(weight), h_ref_(h_ref), width_(width) {
  if (width_ <= 0.0) throw std::invalid_argument("clearance width must be positive");
}

namespace {
constexpr Eigen::Index kH = StepperModel::kSwingH;
constexpr Eigen::Index kVx = StepperModel::kConfigDim + StepperModel::kSwingX;
constexpr Eigen::Index kVy = StepperModel::kConfigDim + StepperModel::kSwingY;
}  // namespace

double SwingClearanceCost::value(const Eigen::VectorXd& x, const Eigen::VectorXd&) const {
  const double sig = 1.0 / (1.0 + std::exp((x[kH] - h_ref_) / width_));
  const double speed2 = x[kVx] * x[kVx] + x[kVy] * x[kVy];
  return weight_ * sig * 0.5 * speed2;
}

void SwingClearanceCost::accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd&,
                                    CostExpansion& e) const {
  const double sig = 1.0 / (1.0 + std::exp((x[kH] - h_ref_) / width_));
  const double dsig = -sig * (1.0 - sig) / width_;
  const double d2sig = sig * (1.0 - sig) * (1.0 - 2.0 * sig) / (width_ * width_);
  const double half_speed2 = 0.5 * (x[kVx] * x[kVx] + x[kVy] * x[kVy]);

  e.value += weight_ * sig * half_speed2;
  e.lx[kH] += weight_ * dsig * half_speed2;
  e.lx[kVx] += weight_ * sig * x[kVx];
  e.lx[kVy] += weight_ * sig * x[kVy];
  e.lxx(kH, kH) += weight_ * d2sig * half_speed2;
  e.lxx(kVx, kVx) += weight_ * sig;
  e.lxx(kVy, kVy) += weight_ * sig;
  e.lxx(kH, kVx) += weight_ * dsig * x[kVx];
  e.lxx(kVx, kH) += weight_ * dsig * x[kVx];
  e.lxx(kH, kVy) += weight_ * dsig * x[kVy];
  e.lxx(kVy, kH) += weight_ * dsig * x[kVy];
}

PostDynamicsCost::PostDynamicsCost(std::shared_ptr<const CostTerm> inner, Eigen::MatrixXd A,
                                   Eigen::MatrixXd B, Eigen::VectorXd c)
    : inner_(std::move(inner)), A_(std::move(A)), B_(std::move(B)), c_(std::move(c)) {}

double PostDynamicsCost::value(const Eigen::VectorXd& x, const Eigen::VectorXd& u) const {
  const Eigen::VectorXd xp = A_ * x + B_ * u + c_;
  return inner_->value(xp, Eigen::VectorXd::Zero(B_.cols()));
}

void PostDynamicsCost::accumulate(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                  CostExpansion& e) const {
  const Eigen::VectorXd xp = A_ * x + B_ * u + c_;
  CostExpansion inner;
  inner.resize(xp.size(), B_.cols());
  inner_->accumulate(xp, Eigen::VectorXd::Zero(B_.cols()), inner);

  e.value += inner.value;
  e.lx += A_.transpose() * inner.lx;
  e.lu += B_.transpose() * inner.lx;
  e.lxx += A_.transpose() * inner.lxx * A_;
  e.luu += B_.transpose() * inner.lxx * B_;
  e.lxu += A_.transpose() * inner.lxx * B_;
}

const AffineDynamics& OcProblem::dynamics(Eigen::Index interval) const {
  auto it = dynamics_overrides.find(interval);
  return it == dynamics_overrides.end() ? uniform_dynamics : it->second;
}

double OcProblem::knot_cost(Eigen::Index t, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u) const {
  double total = 0.0;
  for (const auto& term : knot_costs[static_cast<std::size_t>(t)]) total += term->value(x, u);
  return total;
}

void OcProblem::knot_expansion(Eigen::Index t, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                               CostExpansion& e) const {
  e.set_zero();
  for (const auto& term : knot_costs[static_cast<std::size_t>(t)]) term->accumulate(x, u, e);
}

Eigen::MatrixXd OcProblem::lift(const Trajectory& q) const {
  Eigen::MatrixXd xs = lift_states(q, x0.tail(StepperModel::kConfigDim));
  for (Eigen::Index knot : reset_knots) {
    if (knot <= 0 || knot >= q.knots()) continue;
    // Post-reset state: the new swing foot stands still.
    xs(StepperModel::kConfigDim + StepperModel::kSwingX, knot) = 0.0;
    xs(StepperModel::kConfigDim + StepperModel::kSwingY, knot) = 0.0;
    xs(StepperModel::kConfigDim + StepperModel::kSwingYaw, knot) = 0.0;
    xs(StepperModel::kConfigDim + StepperModel::kSwingH, knot) = 0.0;
  }
  return xs;
}

namespace {

Eigen::VectorXd step_initial_state(const Task& task) {
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(StepperModel::kStateDim);
  const FootPose& start = task.moving_foot_start();
  x0[StepperModel::kSwingX] = start.x;
  x0[StepperModel::kSwingY] = start.y;
  x0[StepperModel::kSwingYaw] = start.yaw;
  return x0;
}

}  // namespace

/// Shared helper: appends the single-step cost structure for a step whose
/// knots span [first, last] within the problem. `terminal_state_only` terms
/// act on the knot state directly; pre-reset placement uses PostDynamicsCost
/// at the caller's discretion.
namespace detail {

Eigen::VectorXd state_reg_reference(const Eigen::VectorXd& x0) {
  Eigen::VectorXd ref = x0;
  ref.tail(StepperModel::kConfigDim).setZero();
  return ref;
}

std::shared_ptr<const CostTerm> make_step_terminal_cost(const Task& task,
                                                        const StepCostWeights& w) {
  // Goal placement of the moving foot (swing_h pinned to the ground), the
  // root centered between the final stance pair, and zero velocity.
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(StepperModel::kStateDim);
  Eigen::VectorXd ref = Eigen::VectorXd::Zero(StepperModel::kStateDim);

  weights[StepperModel::kSwingX] = w.terminal_contact;
  weights[StepperModel::kSwingY] = w.terminal_contact;
  weights[StepperModel::kSwingYaw] = w.terminal_contact;
  weights[StepperModel::kSwingH] = w.terminal_contact;
  ref[StepperModel::kSwingX] = task.goal.x;
  ref[StepperModel::kSwingY] = task.goal.y;
  ref[StepperModel::kSwingYaw] = task.goal.yaw;
  ref[StepperModel::kSwingH] = 0.0;

  const FootPose root_ref = midpoint_pose(task.stance_foot(), task.goal);
  weights[StepperModel::kRootX] = w.terminal_root;
  weights[StepperModel::kRootY] = w.terminal_root;
  weights[StepperModel::kRootYaw] = w.terminal_root;
  ref[StepperModel::kRootX] = root_ref.x;
  ref[StepperModel::kRootY] = root_ref.y;
  ref[StepperModel::kRootYaw] = root_ref.yaw;

  weights.tail(StepperModel::kConfigDim).setConstant(w.terminal_velocity);
  return std::make_shared<QuadraticStateCost>(std::move(weights), std::move(ref),
                                              "step_terminal");
}

}  // namespace detail

OcProblem make_step_problem(const Task& task, const StepperModel& model,
                            const StepCostWeights& weights, Eigen::Index T) {
  if (T < 2) throw std::invalid_argument("step problem needs at least two knots");
  for (const double w :
       {weights.control_reg, weights.control_quartic, weights.state_reg, weights.velocity_reg,
        weights.apex, weights.clearance, weights.heading_damping, weights.terminal_contact,
        weights.terminal_root, weights.terminal_velocity}) {
    if (w < 0.0) throw std::invalid_argument("step cost weights must be non-negative");
  }

  OcProblem problem;
  problem.model = model;
  problem.T = T;
  problem.x0 = step_initial_state(task);
  problem.uniform_dynamics = {model.state_jacobian(), model.control_jacobian(), model.drift()};
  problem.knot_costs.resize(static_cast<std::size_t>(T));

  const double dt = model.dt;

  Eigen::VectorXd state_w = Eigen::VectorXd::Zero(StepperModel::kStateDim);
  state_w.head(StepperModel::kConfigDim).setConstant(weights.state_reg * dt);
  state_w.tail(StepperModel::kConfigDim).setConstant(weights.velocity_reg * dt);
  auto state_reg = std::make_shared<QuadraticStateCost>(
      state_w, detail::state_reg_reference(problem.x0), "state_reg");

  auto control_reg = std::make_shared<QuadraticControlCost>(
      Eigen::VectorXd::Constant(StepperModel::kControlDim, weights.control_reg * dt),
      "control_reg");

  auto control_quartic =
      std::make_shared<QuarticControlCost>(weights.control_quartic * dt, "control_quartic");

  auto clearance = std::make_shared<SwingClearanceCost>(weights.clearance * dt,
                                                        weights.clearance_height,
                                                        weights.clearance_width);

  const double w_lat = weights.heading_damping * dt;
  const double w_long = w_lat * weights.heading_long_fraction;
  auto root_heading = std::make_shared<HeadingVelocityCost>(
      w_long, w_lat, StepperModel::kRootYaw, StepperModel::kConfigDim + StepperModel::kRootX,
      StepperModel::kConfigDim + StepperModel::kRootY, "root_heading");
  auto swing_heading = std::make_shared<HeadingVelocityCost>(
      w_long, w_lat, StepperModel::kSwingYaw, StepperModel::kConfigDim + StepperModel::kSwingX,
      StepperModel::kConfigDim + StepperModel::kSwingY, "swing_heading");

  for (Eigen::Index t = 0; t + 1 < T; ++t) {
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
    Eigen::VectorXd apex_w = Eigen::VectorXd::Zero(StepperModel::kStateDim);
    Eigen::VectorXd apex_ref = Eigen::VectorXd::Zero(StepperModel::kStateDim);
    apex_w[StepperModel::kSwingH] = weights.apex;
    apex_ref[StepperModel::kSwingH] = weights.h_apex;
    problem.knot_costs[static_cast<std::size_t>(T / 2)].push_back(
        std::make_shared<QuadraticStateCost>(apex_w, apex_ref, "apex_via"));
  }

  problem.knot_costs[static_cast<std::size_t>(T - 1)].push_back(
      detail::make_step_terminal_cost(task, weights));
  return problem;
}

double total_cost(const OcProblem& problem, const Trajectory& q, const Trajectory& u) {
  if (q.knots() != problem.T || u.knots() != problem.T - 1 ||
      q.dims() != StepperModel::kConfigDim || u.dims() != StepperModel::kControlDim) {
    throw std::invalid_argument("total_cost trajectory shape mismatch");
  }
  const Eigen::MatrixXd xs = problem.lift(q);
  const Eigen::VectorXd u_zero = Eigen::VectorXd::Zero(problem.control_dim());
  double cost = 0.0;
  for (Eigen::Index t = 0; t + 1 < problem.T; ++t) {
    cost += problem.knot_cost(t, xs.col(t), u.values.col(t));
  }
  cost += problem.knot_cost(problem.T - 1, xs.col(problem.T - 1), u_zero);
  return cost;
}

}  // namespace memmo

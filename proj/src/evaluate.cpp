#include "memmo/evaluate.hpp"

#include <cmath>
#include <stdexcept>

namespace memmo {

namespace {

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  const double n = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

}  // namespace

AccuracyStats eval_accuracy(const Memory& memory, const Database& db_test) {
  if (db_test.samples.empty()) throw std::invalid_argument("eval_accuracy needs a non-empty test set");

  std::vector<double> traj_errs;
  std::vector<double> contact_errs;
  for (const MotionSample& sample : db_test.samples) {
    if (sample.task.side != memory.side) continue;
    const WarmStart warm = predict_step(memory, sample.task, UMode::None);
    const Eigen::MatrixXd& pred = warm.q_traj->values;
    if (pred.rows() != sample.q.values.rows() || pred.cols() != sample.q.values.cols()) {
      throw std::invalid_argument("eval_accuracy metadata mismatch between memory and test set");
    }
    traj_errs.push_back((sample.q.values - pred).norm());

    const Eigen::Index last = sample.q.knots() - 1;
    const Eigen::Vector3d c_true = sample.q.values.block<3, 1>(StepperModel::kSwingX, last);
    const Eigen::Vector3d c_pred = pred.block<3, 1>(StepperModel::kSwingX, last);
    contact_errs.push_back((c_true - c_pred).norm());
  }
  if (traj_errs.empty()) {
    throw std::invalid_argument("eval_accuracy found no test samples for the memory's side");
  }

  AccuracyStats stats;
  stats.traj_err = mean_std(traj_errs);
  stats.contact_err = mean_std(contact_errs);
  stats.n = static_cast<int>(traj_errs.size());
  return stats;
}

}  // namespace memmo

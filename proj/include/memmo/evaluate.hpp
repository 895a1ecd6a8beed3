#pragma once

#include "memmo/database.hpp"
#include "memmo/memory.hpp"

namespace memmo {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

struct AccuracyStats {
  MeanStd traj_err;     // ||q_true - q_pred||_F per test sample
  MeanStd contact_err;  // final moving-foot pose error per test sample
  int n = 0;
};

/// Prediction accuracy against held-out samples: trajectory error is the
/// flattened 2-norm between true and predicted configuration trajectories,
/// contact error the 2-norm between the moving-foot poses read from the last
/// knot of each.
AccuracyStats eval_accuracy(const Memory& memory, const Database& db_test);

}  // namespace memmo

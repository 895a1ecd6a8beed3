#pragma once

#include <string>
#include <vector>

#include "memmo/database.hpp"
#include "memmo/memory.hpp"
#include "memmo/multistep.hpp"
#include "memmo/solver.hpp"

namespace memmo {

/// One benchmark row specification. A null memory runs the cold start; with
/// a memory, use_q / u_mode pick which warm-start components are supplied
/// (the (q), (q,u0), (q,u), (u) ablations).
struct BenchmarkMethod {
  std::string label;
  const MemoryPair* memories = nullptr;
  bool use_q = true;
  UMode u_mode = UMode::QuasiStatic;

  static BenchmarkMethod cold() { return {"cold", nullptr, false, UMode::None}; }
};

struct BenchmarkRow {
  std::string method;
  double success_rate = 0.0;  // percent
  double cost_mean = 0.0;
  double cost_std = 0.0;
  double iter_mean = 0.0;
  double iter_std = 0.0;
  int n = 0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;

  const BenchmarkRow& row(const std::string& method) const;
};

/// Warm-vs-cold comparison on single-step tasks: every method solves every
/// test task at the online solver configuration; rows aggregate success rate
/// and cost/iteration statistics.
BenchmarkReport run_single_benchmark(const std::vector<BenchmarkMethod>& methods,
                                     const std::vector<Task>& tasks, const StepperModel& model,
                                     const StepCostWeights& weights, const SolverConfig& online,
                                     Eigen::Index T);

/// Same comparison over multi-step contact sequences; warm starts come from
/// the concatenated single-step predictions.
BenchmarkReport run_multistep_benchmark(const std::vector<BenchmarkMethod>& methods,
                                        const std::vector<ContactSequence>& sequences,
                                        const StepperModel& model, const StepCostWeights& weights,
                                        const SolverConfig& online, Eigen::Index T_step);

enum class ReportFormat { Csv, Markdown };

/// Fixed column order: method, success_rate, cost_mean, cost_std, iter_mean,
/// iter_std, n.
void write_report(const BenchmarkReport& report, const std::string& path, ReportFormat format);

/// Parses a CSV previously written by write_report.
BenchmarkReport read_report_csv(const std::string& path);

}  // namespace memmo

#pragma once

#include <json.hpp>
#include <string>

#include "memmo/factory.hpp"

namespace memmo {

/// Experiment-wide knobs shared by the CLI subcommands: model, cost weights,
/// task ranges, splits, and the offline/online solver configurations.
struct ExperimentConfig {
  GeneratorConfig generator;
  SolverConfig online;
  std::uint64_t seed = 0;

  ExperimentConfig() {
    online.max_iters = 20;
    online.convergence_threshold = 1e-2;
  }
};

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace memmo

#include "memmo/config.hpp"

#include <fstream>

namespace memmo {

using nlohmann::json;

namespace {

json interval_to_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Interval interval_from_json(const json& j, const Interval& fallback) {
  if (j.is_null()) return fallback;
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json solver_to_json(const SolverConfig& s) {
  return json{{"max_iters", s.max_iters},
              {"convergence_threshold", s.convergence_threshold},
              {"reg_init", s.reg_init},
              {"reg_factor", s.reg_factor},
              {"reg_min", s.reg_min},
              {"reg_max", s.reg_max},
              {"step_set", s.step_set}};
}

SolverConfig solver_from_json(const json& j, SolverConfig s) {
  s.max_iters = j.value("max_iters", s.max_iters);
  s.convergence_threshold = j.value("convergence_threshold", s.convergence_threshold);
  s.reg_init = j.value("reg_init", s.reg_init);
  s.reg_factor = j.value("reg_factor", s.reg_factor);
  s.reg_min = j.value("reg_min", s.reg_min);
  s.reg_max = j.value("reg_max", s.reg_max);
  if (j.contains("step_set")) s.step_set = j.at("step_set").get<std::vector<double>>();
  return s;
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
  const GeneratorConfig& g = config.generator;
  json j;
  j["seed"] = config.seed;
  j["model"] = json{{"dt", g.model.dt}, {"gravity", g.model.gravity}};
  j["T"] = g.T;
  j["weights"] = json{{"control_reg", g.weights.control_reg},
                      {"control_quartic", g.weights.control_quartic},
                      {"heading_damping", g.weights.heading_damping},
                      {"heading_long_fraction", g.weights.heading_long_fraction},
                      {"state_reg", g.weights.state_reg},
                      {"velocity_reg", g.weights.velocity_reg},
                      {"apex", g.weights.apex},
                      {"clearance", g.weights.clearance},
                      {"clearance_height", g.weights.clearance_height},
                      {"clearance_width", g.weights.clearance_width},
                      {"terminal_contact", g.weights.terminal_contact},
                      {"terminal_root", g.weights.terminal_root},
                      {"terminal_velocity", g.weights.terminal_velocity},
                      {"h_apex", g.weights.h_apex}};
  j["task_ranges"] = json{{"step_length", interval_to_json(g.ranges.step_length)},
                          {"lateral_offset", interval_to_json(g.ranges.lateral_offset)},
                          {"yaw_change", interval_to_json(g.ranges.yaw_change)},
                          {"stance_width", interval_to_json(g.ranges.stance_width)}};
  j["offline"] = solver_to_json(g.offline);
  j["online"] = solver_to_json(config.online);
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  GeneratorConfig& g = config.generator;
  config.seed = j.value("seed", config.seed);
  if (j.contains("model")) {
    g.model.dt = j.at("model").value("dt", g.model.dt);
    g.model.gravity = j.at("model").value("gravity", g.model.gravity);
  }
  g.T = j.value("T", g.T);
  if (j.contains("weights")) {
    const json& w = j.at("weights");
    g.weights.control_reg = w.value("control_reg", g.weights.control_reg);
    g.weights.control_quartic = w.value("control_quartic", g.weights.control_quartic);
    g.weights.heading_damping = w.value("heading_damping", g.weights.heading_damping);
    g.weights.heading_long_fraction = w.value("heading_long_fraction", g.weights.heading_long_fraction);
    g.weights.state_reg = w.value("state_reg", g.weights.state_reg);
    g.weights.velocity_reg = w.value("velocity_reg", g.weights.velocity_reg);
    g.weights.apex = w.value("apex", g.weights.apex);
    g.weights.clearance = w.value("clearance", g.weights.clearance);
    g.weights.clearance_height = w.value("clearance_height", g.weights.clearance_height);
    g.weights.clearance_width = w.value("clearance_width", g.weights.clearance_width);
    g.weights.terminal_contact = w.value("terminal_contact", g.weights.terminal_contact);
    g.weights.terminal_root = w.value("terminal_root", g.weights.terminal_root);
    g.weights.terminal_velocity = w.value("terminal_velocity", g.weights.terminal_velocity);
    g.weights.h_apex = w.value("h_apex", g.weights.h_apex);
  }
  if (j.contains("task_ranges")) {
    const json& r = j.at("task_ranges");
    g.ranges.step_length = interval_from_json(r.value("step_length", json()), g.ranges.step_length);
    g.ranges.lateral_offset =
        interval_from_json(r.value("lateral_offset", json()), g.ranges.lateral_offset);
    g.ranges.yaw_change = interval_from_json(r.value("yaw_change", json()), g.ranges.yaw_change);
    g.ranges.stance_width =
        interval_from_json(r.value("stance_width", json()), g.ranges.stance_width);
  }
  if (j.contains("offline")) g.offline = solver_from_json(j.at("offline"), g.offline);
  if (j.contains("online")) config.online = solver_from_json(j.at("online"), config.online);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed config: ") + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << config_to_json(config).dump(2) << "\n";
}

}  // namespace memmo

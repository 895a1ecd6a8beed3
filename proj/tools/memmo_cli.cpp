// Command-line front end for the memory-of-motion pipeline: offline database
// generation, memory training, accuracy evaluation, warm-start benchmarking,
// and single-task queries.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>

#include "memmo/benchmark.hpp"
#include "memmo/config.hpp"
#include "memmo/evaluate.hpp"
#include "memmo/factory.hpp"
#include "memmo/json_io.hpp"
#include "memmo/memory.hpp"
#include "memmo/multistep.hpp"
#include "memmo/rng.hpp"

namespace {

using namespace memmo;

ExperimentConfig load_or_default(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return load_config(path);
}

void write_manifest(const ExperimentConfig& config, int n, const std::string& path) {
  nlohmann::json manifest = config_to_json(config);
  manifest["n"] = n;
  manifest["generator_hash"] = generator_config_hash(config.generator);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << manifest.dump(2) << "\n";
}

int cmd_gen_db(int n, std::uint64_t seed, const std::string& out_heuristic,
               const std::string& out_optimized, const std::string& config_path,
               const std::string& manifest_path) {
  ExperimentConfig config = load_or_default(config_path);
  config.seed = seed;
  BuildStats stats;
  auto [heur, opt] = build_databases(n, seed, config.generator, &stats);
  save_database(heur, out_heuristic);
  save_database(opt, out_optimized);
  write_manifest(config, n,
                 manifest_path.empty() ? out_optimized + ".manifest.json" : manifest_path);
  std::cout << "generated " << stats.retained << "/" << stats.requested << " sample pairs ("
            << stats.dropped << " dropped)\n";
  return 0;
}

int cmd_gen_seq(int n, int steps, std::uint64_t seed, const std::string& out,
                const std::string& config_path) {
  const ExperimentConfig config = load_or_default(config_path);
  std::vector<ContactSequence> seqs;
  const TaskRanges& ranges = config.generator.ranges;
  for (int i = 0; i < n; ++i) {
    const double width = 0.5 * (ranges.stance_width.lo + ranges.stance_width.hi);
    seqs.push_back(plan_contact_sequence(FootPose(0.0, width / 2.0, 0.0),
                                         FootPose(0.0, -width / 2.0, 0.0), steps, ranges,
                                         Rng::derive(seed, static_cast<std::uint64_t>(i)),
                                         i % 2 == 0 ? Side::Left : Side::Right));
  }
  save_sequences(seqs, out);
  std::cout << "wrote " << seqs.size() << " sequences of " << steps << " footsteps\n";
  return 0;
}

int cmd_train(const std::string& db_path, const std::string& kind_str, int K, int M,
              bool with_u_model, std::uint64_t seed, const std::string& out,
              const std::string& label) {
  const Database db = load_database(db_path);
  const RegressorKind kind = regressor_kind_from_string(kind_str);

  MemoryPair pair;
  pair.label = label.empty() ? kind_str : label;
  const Database left = filter_side(db, Side::Left);
  const Database right = filter_side(db, Side::Right);
  if (!left.samples.empty()) {
    pair.left = train_memory(left, K, M, kind, with_u_model, seed);
  }
  if (!right.samples.empty()) {
    pair.right = train_memory(right, K, M, kind, with_u_model, seed + 1);
  }
  if (!pair.left.has_value() && !pair.right.has_value()) {
    throw std::runtime_error("database has no samples to train on");
  }
  save_memory(pair, out);
  std::cout << "trained " << kind_str << " memory"
            << (pair.left && pair.right ? " (both sides)" : " (one side)") << " -> " << out
            << "\n";
  return 0;
}

int cmd_eval_accuracy(const std::string& memory_path, const std::string& test_db_path) {
  const MemoryPair pair = load_memory(memory_path);
  const Database test = load_database(test_db_path);

  double traj_sum = 0.0, contact_sum = 0.0;
  int groups = 0;
  std::cout << "memory,side,traj_err_mean,traj_err_std,contact_err_mean,contact_err_std,n\n";
  for (const Side side : {Side::Left, Side::Right}) {
    const std::optional<Memory>& memory = side == Side::Left ? pair.left : pair.right;
    if (!memory.has_value()) continue;
    const Database subset = filter_side(test, side);
    if (subset.samples.empty()) continue;
    const AccuracyStats stats = eval_accuracy(*memory, subset);
    std::cout << pair.label << ',' << to_string(side) << ',' << stats.traj_err.mean << ','
              << stats.traj_err.std << ',' << stats.contact_err.mean << ','
              << stats.contact_err.std << ',' << stats.n << "\n";
    traj_sum += stats.traj_err.mean;
    contact_sum += stats.contact_err.mean;
    ++groups;
  }
  if (groups == 0) throw std::runtime_error("no matching sides between memory and test set");
  std::cout << pair.label << ",both," << traj_sum / groups << ",," << contact_sum / groups
            << ",,\n";
  return 0;
}

std::vector<BenchmarkMethod> build_methods(const std::vector<MemoryPair>& pairs, bool ablation) {
  std::vector<BenchmarkMethod> methods;
  methods.push_back(BenchmarkMethod::cold());
  for (const MemoryPair& pair : pairs) {
    methods.push_back({pair.label + "(q,u0)", &pair, true, UMode::QuasiStatic});
    if (ablation) {
      methods.push_back({pair.label + "(q)", &pair, true, UMode::None});
      const bool has_u = (pair.left && pair.left->has_u_model()) ||
                         (pair.right && pair.right->has_u_model());
      if (has_u) {
        methods.push_back({pair.label + "(q,u)", &pair, true, UMode::Predicted});
        methods.push_back({pair.label + "(u)", &pair, false, UMode::Predicted});
      }
    }
  }
  return methods;
}

int cmd_bench_single(const std::vector<std::string>& memory_paths, const std::string& test_db_path,
                     const std::string& config_path, const std::string& out,
                     const std::string& format, bool ablation) {
  const ExperimentConfig config = load_or_default(config_path);
  const Database test = load_database(test_db_path);
  if (test.samples.empty()) throw std::runtime_error("test database is empty");

  std::vector<MemoryPair> pairs;
  pairs.reserve(memory_paths.size());
  for (const std::string& path : memory_paths) pairs.push_back(load_memory(path));

  std::vector<Task> tasks;
  tasks.reserve(test.size());
  for (const MotionSample& sample : test.samples) tasks.push_back(sample.task);

  const std::vector<BenchmarkMethod> methods = build_methods(pairs, ablation);
  const BenchmarkReport report =
      run_single_benchmark(methods, tasks, config.generator.model, config.generator.weights,
                           config.online, test.meta.T);
  write_report(report, out, format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv);
  std::cout << "wrote " << report.rows.size() << " rows -> " << out << "\n";
  return 0;
}

int cmd_bench_multi(const std::vector<std::string>& memory_paths, const std::string& sequences_path,
                    const std::string& config_path, const std::string& out,
                    const std::string& format, Eigen::Index T_step) {
  const ExperimentConfig config = load_or_default(config_path);
  const std::vector<ContactSequence> sequences = load_sequences(sequences_path);

  std::vector<MemoryPair> pairs;
  pairs.reserve(memory_paths.size());
  for (const std::string& path : memory_paths) pairs.push_back(load_memory(path));

  const std::vector<BenchmarkMethod> methods = build_methods(pairs, false);
  const Eigen::Index T = T_step > 0 ? T_step : config.generator.T;
  const BenchmarkReport report = run_multistep_benchmark(
      methods, sequences, config.generator.model, config.generator.weights, config.online, T);
  write_report(report, out, format == "markdown" ? ReportFormat::Markdown : ReportFormat::Csv);
  std::cout << "wrote " << report.rows.size() << " rows -> " << out << "\n";
  return 0;
}

int cmd_query(const std::string& memory_path, const std::string& task_str,
              const std::string& side_str, const std::string& u_mode_str,
              const std::string& out) {
  const MemoryPair pair = load_memory(memory_path);
  std::istringstream ss(task_str);
  std::vector<double> values;
  double v;
  while (ss >> v) values.push_back(v);
  if (values.size() != 9) {
    throw std::runtime_error("--task needs 9 numbers (left pose, right pose, goal pose)");
  }

  Task task;
  task.side = side_from_string(side_str);
  task.left0 = FootPose(values[0], values[1], values[2]);
  task.right0 = FootPose(values[3], values[4], values[5]);
  task.goal = FootPose(values[6], values[7], values[8]);

  double latency = 0.0;
  const WarmStart warm =
      predict_step(pair.for_side(task.side), task, u_mode_from_string(u_mode_str), &latency);

  nlohmann::json j;
  j["query_seconds"] = latency;
  j["q"] = matrix_to_json(warm.q_traj->values);
  j["q_rows"] = warm.q_traj->dims();
  j["q_cols"] = warm.q_traj->knots();
  if (warm.u_traj.has_value()) {
    j["u"] = matrix_to_json(warm.u_traj->values);
    j["u_rows"] = warm.u_traj->dims();
    j["u_cols"] = warm.u_traj->knots();
  }
  if (out.empty()) {
    std::cout << j.dump() << "\n";
  } else {
    std::ofstream file(out);
    if (!file) throw std::runtime_error("cannot open for writing: " + out);
    file << j.dump() << "\n";
    std::cerr << "query took " << latency * 1e3 << " ms\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memmo: memory of motion for warm-starting a step optimal-control solver"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "experiment config JSON (defaults apply when absent)");

  // gen-db
  auto* gen_db = app.add_subcommand("gen-db", "generate heuristic + optimized databases");
  int n = 1200;
  std::uint64_t seed = 0;
  std::string out_heuristic, out_optimized, manifest;
  gen_db->add_option("--n", n, "sample count (half left, half right)")->required();
  gen_db->add_option("--seed", seed, "generation seed")->required();
  gen_db->add_option("--out-heuristic", out_heuristic, "heuristic database path")->required();
  gen_db->add_option("--out-optimized", out_optimized, "optimized database path")->required();
  gen_db->add_option("--manifest", manifest,
                     "manifest path (default: <out-optimized>.manifest.json)");

  // gen-seq
  auto* gen_seq = app.add_subcommand("gen-seq", "generate multi-step contact sequences");
  int seq_n = 50, seq_steps = 3;
  std::string seq_out;
  gen_seq->add_option("--n", seq_n, "sequence count")->required();
  gen_seq->add_option("--steps", seq_steps, "footsteps per sequence");
  gen_seq->add_option("--seed", seed, "generation seed")->required();
  gen_seq->add_option("--out", seq_out, "output path")->required();

  // train
  auto* train = app.add_subcommand("train", "train a memory on a database");
  std::string db_path, kind = "gpr", train_out, label;
  int K = 60, M = 60;
  bool with_u_model = false;
  train->add_option("--db", db_path, "training database")->required();
  train->add_option("--kind", kind, "regressor: gpr|gmr|bgmr|knn")
      ->check(CLI::IsMember({"gpr", "gmr", "bgmr", "knn"}));
  train->add_option("--K", K, "RBF basis count");
  train->add_option("--M", M, "PCA components");
  train->add_flag("--with-u-model", with_u_model, "also train a control-trajectory model");
  train->add_option("--seed", seed, "training seed");
  train->add_option("--label", label, "method label used in benchmark rows");
  train->add_option("--out", train_out, "output memory file")->required();

  // eval-accuracy
  auto* eval = app.add_subcommand("eval-accuracy", "prediction accuracy on a test database");
  std::string memory_path, test_db;
  eval->add_option("--memory", memory_path, "memory file")->required();
  eval->add_option("--test-db", test_db, "test database")->required();

  // bench-single
  auto* bench_single = app.add_subcommand("bench-single", "warm vs cold on single steps");
  std::vector<std::string> memories;
  std::string report_out = "report.csv", format = "csv";
  bool ablation = false;
  bench_single->add_option("--memories", memories, "memory files")->required()->expected(-1);
  bench_single->add_option("--test-db", test_db, "test database (tasks)")->required();
  bench_single->add_option("--out", report_out, "report path");
  bench_single->add_option("--format", format, "csv|markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  bench_single->add_flag("--ablation", ablation, "add (q), (q,u), (u) warm-start component rows");

  // bench-multi
  auto* bench_multi = app.add_subcommand("bench-multi", "warm vs cold on contact sequences");
  std::string sequences_path;
  Eigen::Index t_step = 0;
  bench_multi->add_option("--memories", memories, "memory files")->required()->expected(-1);
  bench_multi->add_option("--sequences", sequences_path, "sequence file")->required();
  bench_multi->add_option("--out", report_out, "report path");
  bench_multi->add_option("--format", format, "csv|markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  bench_multi->add_option("--T-step", t_step, "knots per step (default: config T)");

  // query
  auto* query = app.add_subcommand("query", "predict a warm start for one task");
  std::string task_str, side_str = "left", u_mode = "quasistatic", query_out;
  query->add_option("--memory", memory_path, "memory file")->required();
  query->add_option("--task", task_str, "9 numbers: left pose, right pose, goal pose")->required();
  query->add_option("--side", side_str, "moving foot: left|right")
      ->check(CLI::IsMember({"left", "right"}));
  query->add_option("--u-mode", u_mode, "none|quasistatic|predicted")
      ->check(CLI::IsMember({"none", "quasistatic", "predicted"}));
  query->add_option("--out", query_out, "write the prediction JSON here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_db->parsed()) {
      return cmd_gen_db(n, seed, out_heuristic, out_optimized, config_path, manifest);
    }
    if (gen_seq->parsed()) {
      return cmd_gen_seq(seq_n, seq_steps, seed, seq_out, config_path);
    }
    if (train->parsed()) {
      return cmd_train(db_path, kind, K, M, with_u_model, seed, train_out, label);
    }
    if (eval->parsed()) {
      return cmd_eval_accuracy(memory_path, test_db);
    }
    if (bench_single->parsed()) {
      return cmd_bench_single(memories, test_db, config_path, report_out, format, ablation);
    }
    if (bench_multi->parsed()) {
      return cmd_bench_multi(memories, sequences_path, config_path, report_out, format, t_step);
    }
    if (query->parsed()) {
      return cmd_query(memory_path, task_str, side_str, u_mode, query_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

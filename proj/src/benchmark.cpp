#include "memmo/benchmark.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace memmo {

namespace {

struct Accumulator {
  std::vector<double> costs;
  std::vector<double> iters;
  int successes = 0;

  void add(const SolverTrace& trace) {
    costs.push_back(trace.final_cost);
    iters.push_back(static_cast<double>(trace.iterations));
    if (trace.success) successes += 1;
  }

  BenchmarkRow finalize(const std::string& label) const {
    BenchmarkRow row;
    row.method = label;
    row.n = static_cast<int>(costs.size());
    if (row.n == 0) return row;
    const double n = static_cast<double>(row.n);
    for (double c : costs) row.cost_mean += c;
    for (double i : iters) row.iter_mean += i;
    row.cost_mean /= n;
    row.iter_mean /= n;
    if (row.n > 1) {
      double sc = 0.0, si = 0.0;
      for (double c : costs) sc += (c - row.cost_mean) * (c - row.cost_mean);
      for (double i : iters) si += (i - row.iter_mean) * (i - row.iter_mean);
      row.cost_std = std::sqrt(sc / (n - 1.0));
      row.iter_std = std::sqrt(si / (n - 1.0));
    }
    row.success_rate = 100.0 * static_cast<double>(successes) / n;
    return row;
  }
};

WarmStart method_warm_start(const BenchmarkMethod& method, const Task& task) {
  if (method.memories == nullptr) return {};
  const Memory& memory = method.memories->for_side(task.side);
  WarmStart warm = predict_step(memory, task, method.u_mode);
  if (!method.use_q) warm.q_traj.reset();
  return warm;
}

WarmStart method_warm_start_multi(const BenchmarkMethod& method, const ContactSequence& seq) {
  if (method.memories == nullptr) return {};
  WarmStart warm = build_multistep(method.memories->for_side(Side::Left),
                                   method.memories->for_side(Side::Right), seq, method.u_mode);
  if (!method.use_q) warm.q_traj.reset();
  return warm;
}

}  // namespace

const BenchmarkRow& BenchmarkReport::row(const std::string& method) const {
  for (const BenchmarkRow& r : rows) {
    if (r.method == method) return r;
  }
  throw std::out_of_range("no benchmark row labelled '" + method + "'");
}

BenchmarkReport run_single_benchmark(const std::vector<BenchmarkMethod>& methods,
                                     const std::vector<Task>& tasks, const StepperModel& model,
                                     const StepCostWeights& weights, const SolverConfig& online,
                                     Eigen::Index T) {
  if (tasks.empty()) throw std::invalid_argument("benchmark needs at least one task");

  std::vector<Accumulator> acc(methods.size());
  for (const Task& task : tasks) {
    const OcProblem problem = make_step_problem(task, model, weights, T);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const SolveResult result = solve(problem, online, method_warm_start(methods[m], task));
      acc[m].add(result.trace);
    }
  }

  BenchmarkReport report;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    report.rows.push_back(acc[m].finalize(methods[m].label));
  }
  return report;
}

BenchmarkReport run_multistep_benchmark(const std::vector<BenchmarkMethod>& methods,
                                        const std::vector<ContactSequence>& sequences,
                                        const StepperModel& model, const StepCostWeights& weights,
                                        const SolverConfig& online, Eigen::Index T_step) {
  if (sequences.empty()) throw std::invalid_argument("benchmark needs at least one sequence");

  std::vector<Accumulator> acc(methods.size());
  for (const ContactSequence& seq : sequences) {
    const OcProblem problem = make_multistep_problem(seq, model, weights, T_step);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const SolveResult result = solve(problem, online, method_warm_start_multi(methods[m], seq));
      acc[m].add(result.trace);
    }
  }

  BenchmarkReport report;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    report.rows.push_back(acc[m].finalize(methods[m].label));
  }
  return report;
}

namespace {

/// Quotes a CSV field when it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_read_field(std::istringstream& ss) {
  std::string field;
  if (ss.peek() == '"') {
    ss.get();
    char c;
    while (ss.get(c)) {
      if (c == '"') {
        if (ss.peek() == '"') {
          field += '"';
          ss.get();
        } else {
          break;
        }
      } else {
        field += c;
      }
    }
    if (ss.peek() == ',') ss.get();
  } else {
    std::getline(ss, field, ',');
  }
  return field;
}

}  // namespace

void write_report(const BenchmarkReport& report, const std::string& path, ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  if (format == ReportFormat::Csv) {
    out << "method,success_rate,cost_mean,cost_std,iter_mean,iter_std,n\n";
    for (const BenchmarkRow& row : report.rows) {
      out << csv_escape(row.method) << ',' << row.success_rate << ',' << row.cost_mean << ','
          << row.cost_std << ',' << row.iter_mean << ',' << row.iter_std << ',' << row.n << "\n";
    }
  } else {
    out << "| method | success rate (%) | cost | iterations | n |\n";
    out << "| --- | --- | --- | --- | --- |\n";
    out.precision(4);
    for (const BenchmarkRow& row : report.rows) {
      out << "| " << row.method << " | " << row.success_rate << " | " << row.cost_mean << " ± "
          << row.cost_std << " | " << row.iter_mean << " ± " << row.iter_std << " | " << row.n
          << " |\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

BenchmarkReport read_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "method,success_rate,cost_mean,cost_std,iter_mean,iter_std,n") {
    throw std::runtime_error("unexpected report CSV header in " + path);
  }
  BenchmarkReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    BenchmarkRow row;
    std::string field;
    row.method = csv_read_field(ss);
    std::getline(ss, field, ',');
    row.success_rate = std::stod(field);
    std::getline(ss, field, ',');
    row.cost_mean = std::stod(field);
    std::getline(ss, field, ',');
    row.cost_std = std::stod(field);
    std::getline(ss, field, ',');
    row.iter_mean = std::stod(field);
    std::getline(ss, field, ',');
    row.iter_std = std::stod(field);
    std::getline(ss, field, ',');
    row.n = std::stoi(field);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace memmo

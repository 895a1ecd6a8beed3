#include "memmo/memory.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include "memmo/json_io.hpp"
#include "memmo/rng.hpp"

namespace memmo {

using nlohmann::json;

std::string to_string(RegressorKind kind) {
  switch (kind) {
    case RegressorKind::Gpr: return "gpr";
    case RegressorKind::Gmr: return "gmr";
    case RegressorKind::Bgmr: return "bgmr";
    default: return "knn";
  }
}

RegressorKind regressor_kind_from_string(const std::string& s) {
  if (s == "gpr") return RegressorKind::Gpr;
  if (s == "gmr") return RegressorKind::Gmr;
  if (s == "bgmr") return RegressorKind::Bgmr;
  if (s == "knn") return RegressorKind::Knn;
  throw std::invalid_argument("unknown regressor kind: " + s);
}

std::string to_string(UMode mode) {
  switch (mode) {
    case UMode::None: return "none";
    case UMode::QuasiStatic: return "quasistatic";
    default: return "predicted";
  }
}

UMode u_mode_from_string(const std::string& s) {
  if (s == "none") return UMode::None;
  if (s == "quasistatic") return UMode::QuasiStatic;
  if (s == "predicted") return UMode::Predicted;
  throw std::invalid_argument("unknown u-mode: " + s);
}

Eigen::VectorXd regressor_predict(const RegressorModel& model, const Eigen::VectorXd& x) {
  return std::visit(
      [&](const auto& m) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GprModel>) {
          return gpr_predict(m, x);
        } else if constexpr (std::is_same_v<T, GmrModel>) {
          return gmr_predict(m, x);
        } else if constexpr (std::is_same_v<T, BgmrModel>) {
          return bgmr_predict(m, x).front().mean;
        } else {
          return knn_predict(m, x);
        }
      },
      model);
}

namespace {

RegressorModel fit_regressor(RegressorKind kind, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& Y, std::uint64_t seed,
                             const TrainOptions& options) {
  switch (kind) {
    case RegressorKind::Gpr: {
      const GprKernel kernel = options.gpr_kernel.value_or(refine_gpr_kernel(X, Y));
      return gpr_fit(X, Y, kernel);
    }
    case RegressorKind::Gmr: {
      const int K = std::min<int>(options.gmr_components, static_cast<int>(X.rows()));
      return gmr_fit(X, Y, K, seed, options.em);
    }
    case RegressorKind::Bgmr:
      return bgmr_fit(X, Y, options.bgmr_truncation, options.bgmr_prior, seed);
    default:
      return knn_fit(X, Y, options.knn_k);
  }
}

}  // namespace

Memory train_memory(const Database& db_train, Eigen::Index K, Eigen::Index M, RegressorKind kind,
                    bool with_u_model, std::uint64_t seed, const TrainOptions& options) {
  if (db_train.samples.empty()) throw std::invalid_argument("train_memory needs a non-empty database");
  if (db_train.meta.side == DatabaseSide::Mixed) {
    throw std::invalid_argument("train_memory needs a single-side database (filter_side first)");
  }
  db_train.validate();

  Memory memory;
  memory.side = db_train.meta.side == DatabaseSide::Left ? Side::Left : Side::Right;
  memory.trained_on = db_train.samples.front().source;
  memory.kind = kind;
  memory.model.dt = db_train.meta.dt;
  memory.db_hash = database_hash(db_train);

  const Eigen::Index n = static_cast<Eigen::Index>(db_train.samples.size());
  Eigen::MatrixXd X(n, 9);
  for (Eigen::Index i = 0; i < n; ++i) {
    X.row(i) = db_train.samples[static_cast<std::size_t>(i)].task.vector().transpose();
  }

  std::vector<Trajectory> q_trajs;
  q_trajs.reserve(static_cast<std::size_t>(n));
  for (const MotionSample& sample : db_train.samples) q_trajs.push_back(sample.q);
  memory.q_codec = fit_codec(q_trajs, K, M, options.overlap);
  memory.q_codec_hash = codec_hash(memory.q_codec);

  Eigen::MatrixXd Yq(n, memory.q_codec.compressed_dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    Yq.row(i) =
        compress(memory.q_codec, db_train.samples[static_cast<std::size_t>(i)].q).transpose();
  }
  memory.q_model = fit_regressor(kind, X, Yq, Rng::derive(seed, 1), options);

  if (with_u_model) {
    std::vector<Trajectory> u_trajs;
    u_trajs.reserve(static_cast<std::size_t>(n));
    for (const MotionSample& sample : db_train.samples) u_trajs.push_back(sample.u);
    memory.u_codec = fit_codec(u_trajs, std::min(K, db_train.meta.T - 1), M, options.overlap);
    memory.u_codec_hash = codec_hash(*memory.u_codec);

    Eigen::MatrixXd Yu(n, memory.u_codec->compressed_dim());
    for (Eigen::Index i = 0; i < n; ++i) {
      Yu.row(i) =
          compress(*memory.u_codec, db_train.samples[static_cast<std::size_t>(i)].u).transpose();
    }
    memory.u_model = fit_regressor(kind, X, Yu, Rng::derive(seed, 2), options);
  }
  return memory;
}

WarmStart predict_step(const Memory& memory, const Task& task, UMode u_mode,
                       double* query_seconds) {
  if (task.side != memory.side) throw std::invalid_argument("task side does not match memory side");
  if (u_mode == UMode::Predicted && !memory.has_u_model()) {
    throw std::invalid_argument("u-mode 'predicted' needs a memory trained with a u-model");
  }

  const auto start = std::chrono::steady_clock::now();
  WarmStart warm;
  const Eigen::VectorXd x = task.vector();
  warm.q_traj = decompress(memory.q_codec, regressor_predict(memory.q_model, x));
  switch (u_mode) {
    case UMode::None:
      break;
    case UMode::QuasiStatic:
      warm.u_traj = quasi_static_controls(*warm.q_traj, memory.model);
      break;
    case UMode::Predicted:
      warm.u_traj = decompress(*memory.u_codec, regressor_predict(*memory.u_model, x));
      break;
  }
  if (query_seconds != nullptr) {
    *query_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return warm;
}

namespace {

json regressor_to_json(const RegressorModel& model) {
  json j;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, GprModel>) {
          j["type"] = "gpr";
          j["X"] = matrix_to_json(m.X);
          j["Y"] = matrix_to_json(m.Y);
          j["rows"] = m.X.rows();
          j["x_cols"] = m.X.cols();
          j["y_cols"] = m.Y.cols();
          j["lengthscale"] = m.kernel.lengthscale;
          j["signal_variance"] = m.kernel.signal_variance;
          j["noise_variance"] = m.kernel.noise_variance;
        } else if constexpr (std::is_same_v<T, GmrModel>) {
          j["type"] = "gmr";
          j["input_dim"] = m.input_dim;
          json comps = json::array();
          for (const GmrComponent& c : m.components) {
            comps.push_back(json{{"weight", c.weight},
                                 {"mean", vector_to_json(c.mean)},
                                 {"covariance", matrix_to_json(c.covariance)}});
          }
          j["components"] = comps;
          j["final_log_likelihood"] = m.final_log_likelihood;
          j["floored"] = m.floored;
        } else if constexpr (std::is_same_v<T, BgmrModel>) {
          j["type"] = "bgmr";
          j["input_dim"] = m.input_dim;
          j["truncation"] = m.truncation;
          j["truncation_saturated"] = m.truncation_saturated;
          json comps = json::array();
          for (const BgmrComponent& c : m.components) {
            comps.push_back(json{{"weight", c.weight},
                                 {"count", c.count},
                                 {"mean", vector_to_json(c.mean)},
                                 {"kappa", c.kappa},
                                 {"nu", c.nu},
                                 {"psi", matrix_to_json(c.psi)}});
          }
          j["components"] = comps;
        } else {
          j["type"] = "knn";
          j["X"] = matrix_to_json(m.X);
          j["Y"] = matrix_to_json(m.Y);
          j["rows"] = m.X.rows();
          j["x_cols"] = m.X.cols();
          j["y_cols"] = m.Y.cols();
          j["k"] = m.k;
        }
      },
      model);
  return j;
}

RegressorModel regressor_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "gpr") {
    GprKernel kernel;
    kernel.lengthscale = j.at("lengthscale").get<double>();
    kernel.signal_variance = j.at("signal_variance").get<double>();
    kernel.noise_variance = j.at("noise_variance").get<double>();
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    return gpr_fit(matrix_from_json(j.at("X"), rows, j.at("x_cols").get<Eigen::Index>()),
                   matrix_from_json(j.at("Y"), rows, j.at("y_cols").get<Eigen::Index>()), kernel);
  }
  if (type == "gmr") {
    GmrModel m;
    m.input_dim = j.at("input_dim").get<Eigen::Index>();
    for (const json& cj : j.at("components")) {
      GmrComponent c;
      c.weight = cj.at("weight").get<double>();
      c.mean = vector_from_json(cj.at("mean"));
      c.covariance = matrix_from_json(cj.at("covariance"), c.mean.size(), c.mean.size());
      m.components.push_back(std::move(c));
    }
    m.final_log_likelihood = j.at("final_log_likelihood").get<double>();
    m.floored = j.at("floored").get<bool>();
    return m;
  }
  if (type == "bgmr") {
    BgmrModel m;
    m.input_dim = j.at("input_dim").get<Eigen::Index>();
    m.truncation = j.at("truncation").get<int>();
    m.truncation_saturated = j.at("truncation_saturated").get<bool>();
    for (const json& cj : j.at("components")) {
      BgmrComponent c;
      c.weight = cj.at("weight").get<double>();
      c.count = cj.at("count").get<int>();
      c.mean = vector_from_json(cj.at("mean"));
      c.kappa = cj.at("kappa").get<double>();
      c.nu = cj.at("nu").get<double>();
      c.psi = matrix_from_json(cj.at("psi"), c.mean.size(), c.mean.size());
      const double d = static_cast<double>(c.mean.size());
      c.t_dof = c.nu - d + 1.0;
      c.t_scale = c.psi * ((c.kappa + 1.0) / (c.kappa * c.t_dof));
      m.components.push_back(std::move(c));
    }
    return m;
  }
  if (type == "knn") {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    return knn_fit(matrix_from_json(j.at("X"), rows, j.at("x_cols").get<Eigen::Index>()),
                   matrix_from_json(j.at("Y"), rows, j.at("y_cols").get<Eigen::Index>()),
                   j.at("k").get<int>());
  }
  throw std::runtime_error("unknown regressor type in model file: " + type);
}

}  // namespace

json memory_to_json(const Memory& memory) {
  json j;
  j["side"] = to_string(memory.side);
  j["trained_on"] = to_string(memory.trained_on);
  j["kind"] = to_string(memory.kind);
  j["dt"] = memory.model.dt;
  j["gravity"] = memory.model.gravity;
  j["db_hash"] = memory.db_hash;
  j["q_codec"] = codec_to_json(memory.q_codec);
  j["q_codec_hash"] = memory.q_codec_hash;
  j["q_model"] = regressor_to_json(memory.q_model);
  if (memory.u_codec.has_value()) {
    j["u_codec"] = codec_to_json(*memory.u_codec);
    j["u_codec_hash"] = memory.u_codec_hash;
    j["u_model"] = regressor_to_json(*memory.u_model);
  }
  return j;
}

Memory memory_from_json(const json& j) {
  Memory memory;
  memory.side = side_from_string(j.at("side").get<std::string>());
  memory.trained_on = source_from_string(j.at("trained_on").get<std::string>());
  memory.kind = regressor_kind_from_string(j.at("kind").get<std::string>());
  memory.model.dt = j.at("dt").get<double>();
  memory.model.gravity = j.at("gravity").get<double>();
  memory.db_hash = j.at("db_hash").get<std::uint64_t>();

  memory.q_codec = codec_from_json(j.at("q_codec"));
  memory.q_codec_hash = j.at("q_codec_hash").get<std::uint64_t>();
  if (codec_hash(memory.q_codec) != memory.q_codec_hash) {
    throw std::runtime_error("memory file q-model was trained against a different codec");
  }
  memory.q_model = regressor_from_json(j.at("q_model"));

  if (j.contains("u_codec")) {
    memory.u_codec = codec_from_json(j.at("u_codec"));
    memory.u_codec_hash = j.at("u_codec_hash").get<std::uint64_t>();
    if (codec_hash(*memory.u_codec) != memory.u_codec_hash) {
      throw std::runtime_error("memory file u-model was trained against a different codec");
    }
    memory.u_model = regressor_from_json(j.at("u_model"));
  }
  return memory;
}

const Memory& MemoryPair::for_side(Side side) const {
  const std::optional<Memory>& m = side == Side::Left ? left : right;
  if (!m.has_value()) {
    throw std::runtime_error("memory '" + label + "' has no " + memmo::to_string(side) + " side");
  }
  return *m;
}

void save_memory(const MemoryPair& pair, const std::string& path) {
  json j;
  j["format_version"] = 1;
  j["label"] = pair.label;
  if (pair.left.has_value()) j["left"] = memory_to_json(*pair.left);
  if (pair.right.has_value()) j["right"] = memory_to_json(*pair.right);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

MemoryPair load_memory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed memory file: ") + e.what());
  }
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error("unsupported memory file format version");
  }
  MemoryPair pair;
  pair.label = j.value("label", std::string());
  if (j.contains("left")) pair.left = memory_from_json(j.at("left"));
  if (j.contains("right")) pair.right = memory_from_json(j.at("right"));
  return pair;
}

}  // namespace memmo

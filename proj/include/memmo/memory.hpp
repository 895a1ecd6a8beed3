#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <variant>

#include "memmo/bgmr.hpp"
#include "memmo/codec.hpp"
#include "memmo/database.hpp"
#include "memmo/gmr.hpp"
#include "memmo/gpr.hpp"
#include "memmo/knn.hpp"
#include "memmo/solver.hpp"

namespace memmo {

enum class RegressorKind { Gpr, Gmr, Bgmr, Knn };
enum class UMode { None, QuasiStatic, Predicted };

std::string to_string(RegressorKind kind);
RegressorKind regressor_kind_from_string(const std::string& s);
std::string to_string(UMode mode);
UMode u_mode_from_string(const std::string& s);

using RegressorModel = std::variant<GprModel, GmrModel, BgmrModel, KnnModel>;

/// Point prediction of the compressed trajectory for a task vector.
Eigen::VectorXd regressor_predict(const RegressorModel& model, const Eigen::VectorXd& x);

struct TrainOptions {
  double overlap = 1.0;
  int gmr_components = 5;
  EmConfig em;
  int bgmr_truncation = 10;
  BgmrPriorConfig bgmr_prior;
  int knn_k = 1;
  std::optional<GprKernel> gpr_kernel;  // default: median-heuristic kernel
};

/// A trained single-side memory of motion: codec plus regressor for q, and
/// optionally for u. Codec hashes tie the models to the codec they were
/// trained with; the database hash ties both to the training split.
struct Memory {
  Side side = Side::Left;
  SampleSource trained_on = SampleSource::Optimized;
  RegressorKind kind = RegressorKind::Gpr;
  StepperModel model;

  TrajectoryCodec q_codec;
  RegressorModel q_model;
  std::uint64_t q_codec_hash = 0;

  std::optional<TrajectoryCodec> u_codec;
  std::optional<RegressorModel> u_model;
  std::uint64_t u_codec_hash = 0;

  std::uint64_t db_hash = 0;

  bool has_u_model() const { return u_model.has_value(); }
};

/// Fits codec (K bases, M components) and regressor on a single-side
/// database; with_u_model adds a second codec/regressor pair for controls.
Memory train_memory(const Database& db_train, Eigen::Index K, Eigen::Index M, RegressorKind kind,
                    bool with_u_model, std::uint64_t seed, const TrainOptions& options = {});

/// Queries the memory for a warm start. u_traj follows u_mode: absent,
/// quasi-static from the predicted q, or decoded from the u-model (which must
/// exist). The optional out-parameter reports the query wall time.
WarmStart predict_step(const Memory& memory, const Task& task, UMode u_mode,
                       double* query_seconds = nullptr);

nlohmann::json memory_to_json(const Memory& memory);
Memory memory_from_json(const nlohmann::json& j);

/// Left/right memories trained the same way, stored as one file.
struct MemoryPair {
  std::string label;
  std::optional<Memory> left;
  std::optional<Memory> right;

  const Memory& for_side(Side side) const;
};

void save_memory(const MemoryPair& pair, const std::string& path);
MemoryPair load_memory(const std::string& path);

}  // namespace memmo

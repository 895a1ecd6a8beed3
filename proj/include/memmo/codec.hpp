#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <json.hpp>

#include "memmo/pca.hpp"
#include "memmo/rbf.hpp"
#include "memmo/trajectory.hpp"

namespace memmo {

/// The two-stage trajectory compression: per-dimension RBF weights, then PCA
/// over the stacked weight vectors of a whole database.
struct TrajectoryCodec {
  RbfBasis basis;
  PcaModel pca;
  Eigen::Index dims = 0;
  double dt = 0.01;

  Eigen::Index compressed_dim() const { return pca.retained(); }
};

/// Fits basis (K bases, given overlap) and PCA (M components) on the given
/// trajectories, which must share shape. M is clamped to the achievable rank
/// with a warning on stderr.
TrajectoryCodec fit_codec(const std::vector<Trajectory>& trajectories, Eigen::Index K,
                          Eigen::Index M, double overlap = 1.0);

/// RBF-encode then PCA-encode.
Eigen::VectorXd compress(const TrajectoryCodec& codec, const Trajectory& traj);

/// PCA-decode then RBF-decode.
Trajectory decompress(const TrajectoryCodec& codec, const Eigen::VectorXd& yhat);

nlohmann::json codec_to_json(const TrajectoryCodec& codec);
TrajectoryCodec codec_from_json(const nlohmann::json& j);

/// Stable hash of the fitted codec parameters; models record it so a model
/// can refuse to run against a codec it was not trained with.
std::uint64_t codec_hash(const TrajectoryCodec& codec);

}  // namespace memmo

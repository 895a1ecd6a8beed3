#include "memmo/codec.hpp"

#include <iostream>
#include <sstream>
#include <stdexcept>

#include "memmo/json_io.hpp"

namespace memmo {

TrajectoryCodec fit_codec(const std::vector<Trajectory>& trajectories, Eigen::Index K,
                          Eigen::Index M, double overlap) {
  if (trajectories.size() < 2) throw std::invalid_argument("codec fit needs at least two trajectories");
  const Eigen::Index dims = trajectories.front().dims();
  const Eigen::Index T = trajectories.front().knots();
  for (const Trajectory& traj : trajectories) {
    if (traj.dims() != dims || traj.knots() != T) {
      throw std::invalid_argument("codec fit needs trajectories of one shape");
    }
  }

  TrajectoryCodec codec;
  codec.dims = dims;
  codec.dt = trajectories.front().dt;
  codec.basis = build_basis(T, K, overlap);

  const Eigen::Index n = static_cast<Eigen::Index>(trajectories.size());
  Eigen::MatrixXd W(n, dims * K);
  for (Eigen::Index i = 0; i < n; ++i) {
    W.row(i) = encode_rbf(trajectories[static_cast<std::size_t>(i)], codec.basis).stacked();
  }

  Eigen::Index m = M;
  const Eigen::Index max_rank = std::min(n, dims * K);
  if (m > max_rank) {
    std::cerr << "memmo: reducing PCA components from " << m << " to " << max_rank
              << " (limited by data rank)\n";
    m = max_rank;
  }
  codec.pca = pca_fit(W, m);
  return codec;
}

Eigen::VectorXd compress(const TrajectoryCodec& codec, const Trajectory& traj) {
  if (traj.dims() != codec.dims) throw std::invalid_argument("compress dimension mismatch");
  return pca_encode(codec.pca, encode_rbf(traj, codec.basis).stacked());
}

Trajectory decompress(const TrajectoryCodec& codec, const Eigen::VectorXd& yhat) {
  const Eigen::VectorXd stacked = pca_decode(codec.pca, yhat);
  return decode_rbf(RbfWeights::from_stacked(stacked, codec.dims, codec.basis.K), codec.basis,
                    codec.dt);
}

nlohmann::json codec_to_json(const TrajectoryCodec& codec) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["dims"] = codec.dims;
  j["dt"] = codec.dt;
  j["T"] = codec.basis.T;
  j["K"] = codec.basis.K;
  j["sigma"] = codec.basis.sigma;
  j["centers"] = vector_to_json(codec.basis.centers);
  j["pca_mean"] = vector_to_json(codec.pca.mean);
  j["pca_components"] = matrix_to_json(codec.pca.components);
  j["pca_eigenvalues"] = vector_to_json(codec.pca.eigenvalues);
  j["pca_discarded_variance"] = codec.pca.discarded_variance;
  return j;
}

TrajectoryCodec codec_from_json(const nlohmann::json& j) {
  if (j.value("format_version", 0) != 1) {
    throw std::runtime_error("unsupported codec format version");
  }
  TrajectoryCodec codec;
  codec.dims = j.at("dims").get<Eigen::Index>();
  codec.dt = j.at("dt").get<double>();
  codec.basis.T = j.at("T").get<Eigen::Index>();
  codec.basis.K = j.at("K").get<Eigen::Index>();
  codec.basis.sigma = j.at("sigma").get<double>();
  codec.basis.centers = vector_from_json(j.at("centers"));
  codec.basis.Phi.resize(codec.basis.T, codec.basis.K);
  const double inv_two_sigma2 = 1.0 / (2.0 * codec.basis.sigma * codec.basis.sigma);
  for (Eigen::Index t = 0; t < codec.basis.T; ++t) {
    for (Eigen::Index k = 0; k < codec.basis.K; ++k) {
      const double d = static_cast<double>(t) - codec.basis.centers[k];
      codec.basis.Phi(t, k) = std::exp(-d * d * inv_two_sigma2);
    }
  }

  const Eigen::VectorXd mean = vector_from_json(j.at("pca_mean"));
  const Eigen::VectorXd eigenvalues = vector_from_json(j.at("pca_eigenvalues"));
  codec.pca.mean = mean;
  codec.pca.eigenvalues = eigenvalues;
  codec.pca.components = matrix_from_json(j.at("pca_components"), eigenvalues.size(), mean.size());
  codec.pca.discarded_variance = j.at("pca_discarded_variance").get<double>();
  return codec;
}

std::uint64_t codec_hash(const TrajectoryCodec& codec) {
  std::ostringstream ss;
  ss.precision(17);
  ss << codec.dims << ':' << codec.dt << ':' << codec.basis.T << ':' << codec.basis.K << ':'
     << codec.basis.sigma << ':' << codec.pca.mean.sum() << ':' << codec.pca.components.sum()
     << ':' << codec.pca.eigenvalues.sum();
  return fnv1a(ss.str());
}

}  // namespace memmo

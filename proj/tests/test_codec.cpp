#include <doctest.h>

#include <cmath>

#include "memmo/codec.hpp"
#include "memmo/rng.hpp"

using namespace memmo;

namespace {

Trajectory min_jerk_traj(Eigen::Index dims, Eigen::Index T, Rng& rng) {
  Eigen::MatrixXd values(dims, T);
  for (Eigen::Index d = 0; d < dims; ++d) {
    const double a = rng.uniform(-1, 1);
    const double b = rng.uniform(-1, 1);
    for (Eigen::Index t = 0; t < T; ++t) {
      const double tau = static_cast<double>(t) / static_cast<double>(T - 1);
      const double s = tau * tau * tau * (10.0 + tau * (-15.0 + 6.0 * tau));
      values(d, t) = a + s * (b - a);
    }
  }
  return Trajectory(values, 0.01);
}

}  // namespace

TEST_CASE("rbf basis construction") {
  SUBCASE("single basis peaks at mid-grid") {
    const RbfBasis basis = build_basis(50, 1);
    CHECK(basis.Phi.cols() == 1);
    Eigen::Index argmax = 0;
    basis.Phi.col(0).maxCoeff(&argmax);
    CHECK(argmax == 24);  // centers at 24.5; grid maximum at the adjacent knot
    CHECK(basis.Phi.col(0).maxCoeff() <= 1.0);
    CHECK(basis.Phi.minCoeff() > 0.0);
  }
  SUBCASE("K greater than T is rejected") {
    CHECK_THROWS_AS(build_basis(50, 60), std::invalid_argument);
  }
  SUBCASE("the paper-scale configuration is accepted") {
    const RbfBasis basis = build_basis(100, 60);
    CHECK(basis.K == 60);
    CHECK(basis.centers.size() == 60);
    for (Eigen::Index k = 1; k < 60; ++k) CHECK(basis.centers[k] > basis.centers[k - 1]);
    // sigma = overlap * spacing
    CHECK(basis.sigma == doctest::Approx(basis.centers[1] - basis.centers[0]));
    for (Eigen::Index k = 0; k < 60; ++k) CHECK(basis.Phi.col(k).maxCoeff() > 0.1);
    CHECK(basis.Phi.maxCoeff() <= 1.0);
    CHECK(basis.Phi.minCoeff() >= 0.0);  // far tails underflow to zero in double
  }
}

TEST_CASE("rbf encode/decode") {
  const RbfBasis basis = build_basis(50, 20);

  SUBCASE("zero trajectory gives zero weights and back") {
    const Trajectory zero(Eigen::MatrixXd::Zero(3, 50), 0.01);
    const RbfWeights w = encode_rbf(zero, basis);
    CHECK(w.w.cwiseAbs().maxCoeff() < 1e-12);
    const Trajectory back = decode_rbf(w, basis, 0.01);
    CHECK(back.values.cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("forward synthesis recovers planted weights") {
    Rng rng(5);
    Eigen::MatrixXd w_star(4, 20);
    for (Eigen::Index i = 0; i < w_star.size(); ++i) {
      w_star(i / 20, i % 20) = rng.uniform(-2, 2);
    }
    const Trajectory y((basis.Phi * w_star.transpose()).transpose(), 0.01);
    const RbfWeights w = encode_rbf(y, basis);
    CHECK(!w.regularized);
    CHECK((w.w - w_star).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("smooth trajectory reconstructs within 1% of its range") {
    Rng rng(6);
    const Trajectory y = min_jerk_traj(2, 50, rng);
    const RbfBasis half = build_basis(50, 25);
    const Trajectory back = decode_rbf(encode_rbf(y, half), half, y.dt);
    for (Eigen::Index d = 0; d < 2; ++d) {
      const double range = y.values.row(d).maxCoeff() - y.values.row(d).minCoeff();
      const double err = (y.values.row(d) - back.values.row(d)).cwiseAbs().maxCoeff();
      CHECK(err < 0.01 * range);
    }
  }
  SUBCASE("encode is linear") {
    Rng rng(7);
    const Trajectory y1 = min_jerk_traj(3, 50, rng);
    const Trajectory y2 = min_jerk_traj(3, 50, rng);
    const double a = 0.7, b = -1.3;
    const Trajectory mix(a * y1.values + b * y2.values, y1.dt);
    const Eigen::MatrixXd lhs = encode_rbf(mix, basis).w;
    const Eigen::MatrixXd rhs = a * encode_rbf(y1, basis).w + b * encode_rbf(y2, basis).w;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("stacking round-trip") {
    Rng rng(8);
    const Trajectory y = min_jerk_traj(3, 50, rng);
    const RbfWeights w = encode_rbf(y, basis);
    const RbfWeights w2 = RbfWeights::from_stacked(w.stacked(), 3, basis.K);
    CHECK(w.w == w2.w);
  }
}

TEST_CASE("pca") {
  SUBCASE("rank-1 data reconstructs exactly with one component") {
    Rng rng(9);
    Eigen::MatrixXd W(20, 3);
    const Eigen::Vector3d dir(1.0, -2.0, 0.5);
    for (Eigen::Index i = 0; i < 20; ++i) {
      W.row(i) = (rng.uniform(-1, 1) * dir).transpose();
    }
    const PcaModel model = pca_fit(W, 1);
    for (Eigen::Index i = 0; i < 20; ++i) {
      const Eigen::VectorXd rec = pca_decode(model, pca_encode(model, W.row(i).transpose()));
      CHECK((rec - W.row(i).transpose()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("full basis reconstructs any vector exactly") {
    Rng rng(10);
    Eigen::MatrixXd W(6, 4);
    for (Eigen::Index i = 0; i < W.size(); ++i) W(i / 4, i % 4) = rng.uniform(-1, 1);
    const PcaModel model = pca_fit(W, 4);
    const Eigen::MatrixXd identity = model.components * model.components.transpose();
    CHECK((identity - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    Eigen::VectorXd v(4);
    v << 3.0, -1.0, 0.25, 9.0;  // off the training data on purpose
    const Eigen::VectorXd rec = pca_decode(model, pca_encode(model, v));
    CHECK((rec - v).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("reconstruction MSE equals the discarded eigenvalue mass") {
    Rng rng(11);
    const Eigen::Index n = 40, dim = 10, M = 4;
    Eigen::MatrixXd W(n, dim);
    for (Eigen::Index i = 0; i < W.size(); ++i) W(i / dim, i % dim) = rng.normal();
    const PcaModel model = pca_fit(W, M);
    double residual = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd rec = pca_decode(model, pca_encode(model, W.row(i).transpose()));
      residual += (W.row(i).transpose() - rec).squaredNorm();
    }
    residual /= static_cast<double>(n - 1);
    CHECK(residual == doctest::Approx(model.discarded_variance).epsilon(1e-8));
  }
  SUBCASE("eigenvalues descend and reconstruction error is monotone in M") {
    Rng rng(12);
    const Eigen::Index n = 30, dim = 8;
    Eigen::MatrixXd W(n, dim);
    for (Eigen::Index i = 0; i < W.size(); ++i) W(i / dim, i % dim) = rng.normal();
    double prev_err = 1e100;
    for (Eigen::Index M = 1; M <= dim; ++M) {
      const PcaModel model = pca_fit(W, M);
      for (Eigen::Index k = 1; k < M; ++k) CHECK(model.eigenvalues[k] <= model.eigenvalues[k - 1]);
      double err = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        err += (W.row(i).transpose() - pca_decode(model, pca_encode(model, W.row(i).transpose())))
                   .squaredNorm();
      }
      CHECK(err <= prev_err + 1e-9);
      prev_err = err;
    }
  }
  SUBCASE("mean maps to zero and zero decodes to mean") {
    Rng rng(13);
    Eigen::MatrixXd W(15, 6);
    for (Eigen::Index i = 0; i < W.size(); ++i) W(i / 6, i % 6) = rng.uniform(-3, 3);
    const PcaModel model = pca_fit(W, 3);
    CHECK(pca_encode(model, model.mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((pca_decode(model, Eigen::Vector3d::Zero()) - model.mean).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("projection idempotence") {
    Rng rng(14);
    Eigen::MatrixXd W(25, 7);
    for (Eigen::Index i = 0; i < W.size(); ++i) W(i / 7, i % 7) = rng.normal();
    const PcaModel model = pca_fit(W, 3);
    Eigen::VectorXd yhat(3);
    yhat << 0.4, -1.1, 2.2;
    const Eigen::VectorXd again = pca_encode(model, pca_decode(model, yhat));
    CHECK((again - yhat).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("M out of range rejected") {
    Eigen::MatrixXd W = Eigen::MatrixXd::Random(5, 3);
    CHECK_THROWS_AS(pca_fit(W, 0), std::invalid_argument);
    CHECK_THROWS_AS(pca_fit(W, 4), std::invalid_argument);
  }
}

TEST_CASE("two-stage codec") {
  Rng rng(15);
  std::vector<Trajectory> trajs;
  for (int i = 0; i < 80; ++i) trajs.push_back(min_jerk_traj(7, 100, rng));

  SUBCASE("paper-scale dimensions") {
    const TrajectoryCodec codec = fit_codec(trajs, 60, 60);
    CHECK(codec.compressed_dim() == 60);
    const Eigen::VectorXd yhat = compress(codec, trajs.front());
    CHECK(yhat.size() == 60);
  }
  SUBCASE("round-trip on smooth data stays within codec tolerance") {
    const TrajectoryCodec codec = fit_codec(trajs, 60, 40);
    for (const Trajectory& y : trajs) {
      const Trajectory back = decompress(codec, compress(codec, y));
      CHECK((back.values - y.values).cwiseAbs().maxCoeff() < 1e-3);
    }
  }
  SUBCASE("a constant dimension survives the round-trip through the mean") {
    std::vector<Trajectory> fixed = trajs;
    for (Trajectory& y : fixed) y.values.row(3).setConstant(0.77);
    const TrajectoryCodec codec = fit_codec(fixed, 40, 20);
    const Trajectory back = decompress(codec, compress(codec, fixed.front()));
    // PCA adds nothing on a zero-variance dimension: the round trip equals
    // the plain RBF fit of the constant.
    const Trajectory rbf_only =
        decode_rbf(encode_rbf(fixed.front(), codec.basis), codec.basis, fixed.front().dt);
    CHECK((back.values.row(3) - rbf_only.values.row(3)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((back.values.row(3).array() - 0.77).abs().maxCoeff() < 1e-4);
  }
  SUBCASE("serialization round-trips the codec") {
    const TrajectoryCodec codec = fit_codec(trajs, 30, 20);
    const TrajectoryCodec loaded = codec_from_json(codec_to_json(codec));
    CHECK(codec_hash(loaded) == codec_hash(codec));
    CHECK(loaded.basis.Phi == codec.basis.Phi);
    const Eigen::VectorXd a = compress(codec, trajs[5]);
    const Eigen::VectorXd b = compress(loaded, trajs[5]);
    CHECK(a == b);
  }
}

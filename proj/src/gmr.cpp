#include "memmo/gmr.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "memmo/rng.hpp"

namespace memmo {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

/// Log-density helper bound to one component; factors the covariance once.
struct GaussianEval {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double log_norm = 0.0;
  bool ok = false;

  void compute(const Eigen::MatrixXd& cov) {
    llt.compute(cov);
    ok = llt.info() == Eigen::Success;
    if (!ok) return;
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < cov.rows(); ++i) {
      log_det += std::log(llt.matrixLLT()(i, i));
    }
    log_norm = -0.5 * static_cast<double>(cov.rows()) * kLog2Pi - log_det;
  }

  double log_density(const Eigen::VectorXd& diff) const {
    const Eigen::VectorXd w = llt.matrixL().solve(diff);
    return log_norm - 0.5 * w.squaredNorm();
  }
};

/// Ensures a covariance factors; escalates diagonal jitter if needed.
bool make_spd(Eigen::MatrixXd& cov, GaussianEval& eval, bool& floored_flag) {
  eval.compute(cov);
  double jitter = 1e-12;
  for (int attempt = 0; attempt < 12 && !eval.ok; ++attempt) {
    cov.diagonal().array() += jitter;
    floored_flag = true;
    eval.compute(cov);
    jitter *= 10.0;
  }
  return eval.ok;
}

struct EmRun {
  GmrModel model;
  double loglik = -std::numeric_limits<double>::infinity();
  bool ok = false;
};

EmRun run_em(const Eigen::MatrixXd& Z, int n_components, std::uint64_t seed,
             const EmConfig& config, Eigen::Index input_dim) {
  const Eigen::Index n = Z.rows();
  const int K = n_components;
  Rng rng(seed);

  // k-means++ style seeding on the joint data.
  std::vector<Eigen::Index> center_idx;
  center_idx.push_back(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd d2 = (Z.rowwise() - Z.row(center_idx[0])).rowwise().squaredNorm();
  while (static_cast<int>(center_idx.size()) < K) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double r = rng.uniform01() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= d2[i];
        if (r <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    center_idx.push_back(pick);
    d2 = d2.cwiseMin((Z.rowwise() - Z.row(pick)).rowwise().squaredNorm());
  }

  // Hard assignment to the seeds gives the initial parameters.
  Eigen::MatrixXd resp = Eigen::MatrixXd::Zero(n, K);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      const double dist = (Z.row(i) - Z.row(center_idx[static_cast<std::size_t>(k)])).squaredNorm();
      if (dist < best_d) {
        best_d = dist;
        best = k;
      }
    }
    resp(i, best) = 1.0;
  }

  EmRun run;
  GmrModel& model = run.model;
  model.input_dim = input_dim;
  model.components.resize(static_cast<std::size_t>(K));

  std::vector<GaussianEval> evals(static_cast<std::size_t>(K));
  const Eigen::MatrixXd global_cov = [&] {
    const Eigen::RowVectorXd mean = Z.colwise().mean();
    const Eigen::MatrixXd c = Z.rowwise() - mean;
    Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(n);
    cov.diagonal().array() += config.covariance_floor;
    return cov;
  }();

  auto m_step = [&]() -> bool {
    for (int k = 0; k < K; ++k) {
      GmrComponent& comp = model.components[static_cast<std::size_t>(k)];
      const double nk = resp.col(k).sum();
      if (nk < 1e-10) {
        // Collapsed component: reseed on a random point with the global shape.
        comp.weight = 1e-10;
        comp.mean =
            Z.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)))).transpose();
        comp.covariance = global_cov;
        model.floored = true;
      } else {
        comp.weight = nk / static_cast<double>(n);
        comp.mean = (resp.col(k).transpose() * Z).transpose() / nk;
        const Eigen::MatrixXd centered = Z.rowwise() - comp.mean.transpose();
        comp.covariance =
            centered.transpose() * resp.col(k).asDiagonal() * centered / nk;
        comp.covariance.diagonal().array() += config.covariance_floor;
      }
      if (!make_spd(comp.covariance, evals[static_cast<std::size_t>(k)], model.floored)) {
        return false;
      }
    }
    double wsum = 0.0;
    for (const auto& c : model.components) wsum += c.weight;
    for (auto& c : model.components) c.weight /= wsum;
    return true;
  };

  if (!m_step()) return run;

  double prev = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd logp(K);
  for (int iter = 0; iter < config.max_iters; ++iter) {
    // E-step with the log-sum-exp trick.
    double loglik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int k = 0; k < K; ++k) {
        const GmrComponent& comp = model.components[static_cast<std::size_t>(k)];
        logp[k] = std::log(comp.weight) +
                  evals[static_cast<std::size_t>(k)].log_density(Z.row(i).transpose() - comp.mean);
      }
      const double m = logp.maxCoeff();
      const double lse = m + std::log((logp.array() - m).exp().sum());
      loglik += lse;
      resp.row(i) = (logp.array() - lse).exp();
    }
    model.em_log_likelihoods.push_back(loglik);
    run.loglik = loglik;
    if (loglik - prev < config.tolerance && iter > 0) break;
    prev = loglik;
    if (!m_step()) return run;
  }
  model.final_log_likelihood = run.loglik;
  run.ok = std::isfinite(run.loglik);
  return run;
}

}  // namespace

GmrModel gmr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int n_components,
                 std::uint64_t seed, const EmConfig& config) {
  if (X.rows() != Y.rows()) throw std::invalid_argument("GMR needs matching X/Y rows");
  if (n_components < 1 || X.rows() < n_components) {
    throw std::invalid_argument("GMR needs at least as many samples as components");
  }

  Eigen::MatrixXd Z(X.rows(), X.cols() + Y.cols());
  Z << X, Y;

  EmRun best;
  const int restarts = std::max(1, config.restarts);
  for (int r = 0; r < restarts; ++r) {
    EmRun run = run_em(Z, n_components, Rng::derive(seed, static_cast<std::uint64_t>(r)), config,
                       X.cols());
    if (run.ok && run.loglik > best.loglik) best = std::move(run);
  }
  if (!best.ok) throw std::runtime_error("GMR EM failed to produce a finite model");
  return best.model;
}

Eigen::VectorXd gmr_responsibilities(const GmrModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index dx = model.input_dim;
  const int K = static_cast<int>(model.components.size());
  Eigen::VectorXd logp(K);
  for (int k = 0; k < K; ++k) {
    const GmrComponent& comp = model.components[static_cast<std::size_t>(k)];
    GaussianEval eval;
    eval.compute(comp.covariance.topLeftCorner(dx, dx));
    if (!eval.ok) {
      Eigen::MatrixXd cov = comp.covariance.topLeftCorner(dx, dx);
      bool dummy = false;
      make_spd(cov, eval, dummy);
    }
    logp[k] = std::log(comp.weight) + eval.log_density(x - comp.mean.head(dx));
  }
  const double m = logp.maxCoeff();
  Eigen::VectorXd w = (logp.array() - m).exp();
  return w / w.sum();
}

Eigen::VectorXd gmr_predict(const GmrModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index dx = model.input_dim;
  const Eigen::Index dy = model.components.front().mean.size() - dx;
  if (x.size() != dx) throw std::invalid_argument("GMR query dimension mismatch");

  const Eigen::VectorXd resp = gmr_responsibilities(model, x);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dy);
  for (std::size_t k = 0; k < model.components.size(); ++k) {
    const GmrComponent& comp = model.components[k];
    const auto cov_xx = comp.covariance.topLeftCorner(dx, dx);
    const auto cov_yx = comp.covariance.bottomLeftCorner(dy, dx);
    const Eigen::VectorXd cond =
        comp.mean.tail(dy) +
        cov_yx * cov_xx.ldlt().solve(x - comp.mean.head(dx));
    out += resp[static_cast<Eigen::Index>(k)] * cond;
  }
  return out;
}

}  // namespace memmo

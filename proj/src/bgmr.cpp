#include "memmo/bgmr.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "memmo/rng.hpp"

namespace memmo {

namespace {

double lgamma_multivariate(double a, Eigen::Index d) {
  double out = 0.25 * static_cast<double>(d * (d - 1)) * std::log(M_PI);
  for (Eigen::Index j = 1; j <= d; ++j) {
    out += std::lgamma(a + 0.5 * static_cast<double>(1 - j));
  }
  return out;
}

/// Multivariate t log-density with dof nu, location mu, scale S.
double t_log_density(const Eigen::VectorXd& z, double nu, const Eigen::VectorXd& mu,
                     const Eigen::LLT<Eigen::MatrixXd>& scale_llt, double log_det_scale) {
  const Eigen::Index d = z.size();
  const Eigen::VectorXd w = scale_llt.matrixL().solve(z - mu);
  const double maha = w.squaredNorm();
  return std::lgamma(0.5 * (nu + static_cast<double>(d))) - std::lgamma(0.5 * nu) -
         0.5 * static_cast<double>(d) * std::log(nu * M_PI) - 0.5 * log_det_scale -
         0.5 * (nu + static_cast<double>(d)) * std::log1p(maha / nu);
}

/// Sufficient statistics of one cluster plus its cached posterior predictive.
struct Cluster {
  int count = 0;
  Eigen::VectorXd sum;
  Eigen::MatrixXd outer;

  // Cached NIW-posterior predictive t parameters.
  double t_dof = 0.0;
  Eigen::VectorXd t_mean;
  Eigen::LLT<Eigen::MatrixXd> t_llt;
  double t_log_det = 0.0;
  bool cache_valid = false;
};

struct Prior {
  double alpha;
  double kappa0;
  double nu0;
  Eigen::VectorXd m0;
  Eigen::MatrixXd psi0;
  double log_det_psi0;
};

struct Posterior {
  double kappa;
  double nu;
  Eigen::VectorXd mean;
  Eigen::MatrixXd psi;
};

Posterior niw_posterior(const Prior& prior, const Cluster& c) {
  Posterior post;
  const double n = static_cast<double>(c.count);
  post.kappa = prior.kappa0 + n;
  post.nu = prior.nu0 + n;
  if (c.count == 0) {
    post.mean = prior.m0;
    post.psi = prior.psi0;
    return post;
  }
  const Eigen::VectorXd zbar = c.sum / n;
  post.mean = (prior.kappa0 * prior.m0 + c.sum) / post.kappa;
  const Eigen::MatrixXd scatter = c.outer - n * zbar * zbar.transpose();
  const Eigen::VectorXd dm = zbar - prior.m0;
  post.psi = prior.psi0 + scatter + (prior.kappa0 * n / post.kappa) * dm * dm.transpose();
  post.psi = 0.5 * (post.psi + post.psi.transpose()).eval();
  return post;
}

void refresh_cache(const Prior& prior, Cluster& c) {
  const Posterior post = niw_posterior(prior, c);
  const Eigen::Index d = prior.m0.size();
  c.t_dof = post.nu - static_cast<double>(d) + 1.0;
  c.t_mean = post.mean;
  Eigen::MatrixXd scale = post.psi * ((post.kappa + 1.0) / (post.kappa * c.t_dof));
  c.t_llt.compute(scale);
  double jitter = 1e-12;
  while (c.t_llt.info() != Eigen::Success && jitter < 1.0) {
    scale.diagonal().array() += jitter;
    c.t_llt.compute(scale);
    jitter *= 10.0;
  }
  c.t_log_det = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    c.t_log_det += 2.0 * std::log(c.t_llt.matrixLLT()(i, i));
  }
  c.cache_valid = true;
}

/// Collapsed joint log-score of the partition: cluster marginal likelihoods
/// plus the CRP factor; used to select the summary sweep.
double partition_log_score(const Prior& prior, const std::vector<Cluster>& clusters) {
  const Eigen::Index d = prior.m0.size();
  double score = 0.0;
  for (const Cluster& c : clusters) {
    if (c.count == 0) continue;
    const Posterior post = niw_posterior(prior, c);
    Eigen::LLT<Eigen::MatrixXd> llt(post.psi);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
    const double n = static_cast<double>(c.count);
    score += lgamma_multivariate(0.5 * post.nu, d) - lgamma_multivariate(0.5 * prior.nu0, d);
    score += 0.5 * prior.nu0 * prior.log_det_psi0 - 0.5 * post.nu * log_det;
    score += 0.5 * static_cast<double>(d) * (std::log(prior.kappa0) - std::log(post.kappa));
    score -= 0.5 * n * static_cast<double>(d) * std::log(M_PI);
    score += std::log(prior.alpha) + std::lgamma(n);
  }
  return score;
}

}  // namespace

BgmrModel bgmr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y, int truncation,
                   const BgmrPriorConfig& prior_config, std::uint64_t seed) {
  if (X.rows() != Y.rows() || X.rows() < 2) throw std::invalid_argument("BGMR needs matching X/Y rows");
  if (truncation < 1) throw std::invalid_argument("BGMR truncation must be at least 1");

  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols() + Y.cols();
  Eigen::MatrixXd Z(n, d);
  Z << X, Y;

  Prior prior;
  prior.alpha = prior_config.concentration;
  prior.kappa0 = prior_config.kappa;
  prior.nu0 = static_cast<double>(d) + prior_config.dof_offset;
  prior.m0 = prior_config.prior_mean.value_or(Z.colwise().mean().transpose());
  if (prior_config.prior_scale.has_value()) {
    prior.psi0 = *prior_config.prior_scale;
  } else {
    const Eigen::MatrixXd centered = Z.rowwise() - Z.colwise().mean();
    Eigen::VectorXd var = centered.colwise().squaredNorm().transpose() / static_cast<double>(n - 1);
    var = var.cwiseMax(1e-10);
    prior.psi0 = var.asDiagonal();
  }
  {
    Eigen::LLT<Eigen::MatrixXd> llt(prior.psi0);
    if (llt.info() != Eigen::Success) throw std::invalid_argument("BGMR prior scale must be SPD");
    prior.log_det_psi0 = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
      prior.log_det_psi0 += 2.0 * std::log(llt.matrixLLT()(i, i));
    }
  }

  Rng rng(seed);
  std::vector<Cluster> clusters(static_cast<std::size_t>(truncation));
  for (Cluster& c : clusters) {
    c.sum = Eigen::VectorXd::Zero(d);
    c.outer = Eigen::MatrixXd::Zero(d, d);
  }
  Cluster empty_cluster;  // scores the "open a new component" case
  empty_cluster.sum = Eigen::VectorXd::Zero(d);
  empty_cluster.outer = Eigen::MatrixXd::Zero(d, d);
  refresh_cache(prior, empty_cluster);

  // Start with everything in one component; the sampler splits from there.
  std::vector<int> assignment(static_cast<std::size_t>(n), 0);
  clusters[0].count = static_cast<int>(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    clusters[0].sum += Z.row(i).transpose();
    clusters[0].outer += Z.row(i).transpose() * Z.row(i);
  }

  const int total_sweeps = prior_config.burn_in_sweeps + prior_config.kept_sweeps;
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<Cluster> best_clusters;
  bool saturated = false;

  Eigen::VectorXd logp(static_cast<Eigen::Index>(truncation) + 1);
  for (int sweep = 0; sweep < total_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::VectorXd z = Z.row(i).transpose();
      const int old_k = assignment[static_cast<std::size_t>(i)];
      Cluster& old_cluster = clusters[static_cast<std::size_t>(old_k)];
      old_cluster.count -= 1;
      old_cluster.sum -= z;
      old_cluster.outer -= z * z.transpose();
      old_cluster.cache_valid = false;

      int occupied = 0;
      for (const Cluster& c : clusters) {
        if (c.count > 0) ++occupied;
      }

      int n_options = 0;
      static thread_local std::vector<int> option_index;
      option_index.clear();
      for (int k = 0; k < truncation; ++k) {
        Cluster& c = clusters[static_cast<std::size_t>(k)];
        if (c.count == 0) continue;
        if (!c.cache_valid) refresh_cache(prior, c);
        logp[n_options] = std::log(static_cast<double>(c.count)) +
                          t_log_density(z, c.t_dof, c.t_mean, c.t_llt, c.t_log_det);
        option_index.push_back(k);
        ++n_options;
      }
      if (occupied < truncation) {
        logp[n_options] = std::log(prior.alpha) +
                          t_log_density(z, empty_cluster.t_dof, empty_cluster.t_mean,
                                        empty_cluster.t_llt, empty_cluster.t_log_det);
        option_index.push_back(-1);
        ++n_options;
      } else {
        saturated = true;
      }

      const double m = logp.head(n_options).maxCoeff();
      Eigen::VectorXd probs = (logp.head(n_options).array() - m).exp();
      probs /= probs.sum();
      double r = rng.uniform01();
      int choice = n_options - 1;
      for (int o = 0; o < n_options; ++o) {
        r -= probs[o];
        if (r <= 0.0) {
          choice = o;
          break;
        }
      }

      int new_k = option_index[static_cast<std::size_t>(choice)];
      if (new_k < 0) {
        for (int k = 0; k < truncation; ++k) {
          if (clusters[static_cast<std::size_t>(k)].count == 0) {
            new_k = k;
            break;
          }
        }
      }
      Cluster& target = clusters[static_cast<std::size_t>(new_k)];
      target.count += 1;
      target.sum += z;
      target.outer += z * z.transpose();
      target.cache_valid = false;
      assignment[static_cast<std::size_t>(i)] = new_k;
    }

    if (sweep >= prior_config.burn_in_sweeps) {
      const double score = partition_log_score(prior, clusters);
      if (score > best_score) {
        best_score = score;
        best_clusters = clusters;
      }
    }
  }
  if (best_clusters.empty()) best_clusters = clusters;

  BgmrModel model;
  model.truncation = truncation;
  model.truncation_saturated = saturated;
  model.input_dim = X.cols();
  double weight_sum = 0.0;
  for (const Cluster& c : best_clusters) {
    if (c.count == 0) continue;
    const Posterior post = niw_posterior(prior, c);
    BgmrComponent comp;
    comp.count = c.count;
    comp.weight = static_cast<double>(c.count);
    comp.mean = post.mean;
    comp.kappa = post.kappa;
    comp.nu = post.nu;
    comp.psi = post.psi;
    comp.t_dof = post.nu - static_cast<double>(d) + 1.0;
    comp.t_scale = post.psi * ((post.kappa + 1.0) / (post.kappa * comp.t_dof));
    weight_sum += comp.weight;
    model.components.push_back(std::move(comp));
  }
  for (BgmrComponent& comp : model.components) comp.weight /= weight_sum;
  return model;
}

std::vector<BgmrMode> bgmr_predict(const BgmrModel& model, const Eigen::VectorXd& x) {
  const Eigen::Index dx = model.input_dim;
  if (model.components.empty()) throw std::invalid_argument("BGMR model has no components");
  const Eigen::Index d = model.components.front().mean.size();
  const Eigen::Index dy = d - dx;
  if (x.size() != dx) throw std::invalid_argument("BGMR query dimension mismatch");

  const std::size_t K = model.components.size();
  Eigen::VectorXd logp(static_cast<Eigen::Index>(K));
  std::vector<Eigen::VectorXd> cond_means(K);
  for (std::size_t k = 0; k < K; ++k) {
    const BgmrComponent& comp = model.components[k];
    // The x-marginal of a multivariate t keeps the dof; conditioning gives a
    // mean linear in the query.
    Eigen::MatrixXd scale_xx = comp.t_scale.topLeftCorner(dx, dx);
    Eigen::LLT<Eigen::MatrixXd> llt(scale_xx);
    double jitter = 1e-12;
    while (llt.info() != Eigen::Success && jitter < 1.0) {
      scale_xx.diagonal().array() += jitter;
      llt.compute(scale_xx);
      jitter *= 10.0;
    }
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < dx; ++i) log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
    logp[static_cast<Eigen::Index>(k)] =
        std::log(comp.weight) + t_log_density(x, comp.t_dof, comp.mean.head(dx), llt, log_det);
    cond_means[k] = comp.mean.tail(dy) +
                    comp.t_scale.bottomLeftCorner(dy, dx) * llt.solve(x - comp.mean.head(dx));
  }

  const double m = logp.maxCoeff();
  Eigen::VectorXd probs = (logp.array() - m).exp();
  probs /= probs.sum();

  std::vector<BgmrMode> modes(K);
  for (std::size_t k = 0; k < K; ++k) {
    modes[k].probability = probs[static_cast<Eigen::Index>(k)];
    modes[k].mean = std::move(cond_means[k]);
  }
  std::sort(modes.begin(), modes.end(),
            [](const BgmrMode& a, const BgmrMode& b) { return a.probability > b.probability; });
  return modes;
}

}  // namespace memmo

#include <cmath>
#include <limits>

#include "shrinkrank/sampler.hpp"

namespace shrinkrank {

void AmConfig::validate() const {
  if (!(init_sd_times_sqrt_dim > 0.0))
    throw std::invalid_argument("AmConfig: init_sd_times_sqrt_dim must be > 0");
  if (!(fixed_mix_weight >= 0.0 && fixed_mix_weight < 1.0))
    throw std::invalid_argument("AmConfig: fixed_mix_weight must be in [0, 1)");
  if (!(onset_steps_per_dim > 0.0))
    throw std::invalid_argument("AmConfig: onset_steps_per_dim must be > 0");
  if (!(ridge >= 0.0)) throw std::invalid_argument("AmConfig: ridge must be >= 0");
}

RunningMoments::RunningMoments(int dim)
    : mean_(Vector::Zero(dim)), m2_(Matrix::Zero(dim, dim)) {
  if (dim < 1) throw std::invalid_argument("RunningMoments: dim must be >= 1");
}

void RunningMoments::update(const Vector& x) {
  if (x.size() != mean_.size())
    throw std::invalid_argument("RunningMoments: dimension mismatch");
  ++n_;
  const Vector delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_).transpose();
}

Matrix RunningMoments::covariance() const {
  if (n_ < 2)
    throw std::logic_error("RunningMoments: covariance needs at least 2 states");
  Matrix cov = m2_ / static_cast<double>(n_ - 1);
  return 0.5 * (cov + cov.transpose());
}

StepResult adaptive_metropolis_step(const Vector& x0, double log_f_x0,
                                    const TargetDistribution& target,
                                    const AmConfig& cfg, RunningMoments& moments,
                                    RandomSource& src) {
  cfg.validate();
  const int p = target.dim();
  if (x0.size() != p)
    throw std::invalid_argument("adaptive_metropolis_step: dimension mismatch");
  if (!std::isfinite(log_f_x0))
    throw std::invalid_argument("adaptive_metropolis_step: log density at the current "
                                "state must be finite (target " + target.name() + ")");

  const long onset = static_cast<long>(std::ceil(cfg.onset_steps_per_dim * p));
  Vector proposal(p);
  if (moments.count() <= onset || src.uniform() < cfg.fixed_mix_weight) {
    const double sd = cfg.init_sd_times_sqrt_dim / std::sqrt(static_cast<double>(p));
    proposal = x0 + sd * src.std_normal_vec(p);
  } else {
    Matrix cov = (2.38 * 2.38 / p) * moments.covariance();
    cov.diagonal().array() += cfg.ridge;
    Eigen::LLT<Matrix> chol(cov);
    if (chol.info() != Eigen::Success)
      throw std::runtime_error("adaptive_metropolis_step: empirical covariance "
                               "factorization failed");
    proposal = x0 + chol.matrixL() * src.std_normal_vec(p);
  }

  const double log_f_prop = target.log_density(proposal);
  StepStats stats;
  stats.n_density_evals = 2;  // current state (cached) + proposal

  // Symmetric proposal: accept with probability min(1, f(x')/f(x0)).
  const double u = src.uniform();
  const bool accept =
      log_f_prop > -std::numeric_limits<double>::infinity() &&
      std::log(u) < log_f_prop - log_f_x0;
  stats.accepted = accept;

  StepResult result{accept ? proposal : x0, accept ? log_f_prop : log_f_x0, stats};
  moments.update(result.x);
  return result;
}

}  // namespace shrinkrank

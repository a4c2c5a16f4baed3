#include <cmath>
#include <stdexcept>

#include "shrinkrank/sampler.hpp"

namespace shrinkrank {

std::string sampler_id(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::ShrinkRank: return "shrink-rank";
    case SamplerKind::AdaptiveMetropolis: return "adaptive-metropolis";
  }
  throw std::logic_error("sampler_id: unknown kind");
}

SamplerKind parse_sampler_id(const std::string& id) {
  if (id == "shrink-rank") return SamplerKind::ShrinkRank;
  if (id == "adaptive-metropolis") return SamplerKind::AdaptiveMetropolis;
  throw std::invalid_argument("unknown sampler `" + id +
                              "` (known: shrink-rank, adaptive-metropolis)");
}

double SamplerSpec::tuning() const {
  return kind == SamplerKind::ShrinkRank ? shrink.sigma_c : am.init_sd_times_sqrt_dim;
}

SamplerSpec SamplerSpec::with_tuning(SamplerKind kind, double tuning) {
  SamplerSpec spec;
  spec.kind = kind;
  if (kind == SamplerKind::ShrinkRank)
    spec.shrink.sigma_c = tuning;
  else
    spec.am.init_sd_times_sqrt_dim = tuning;
  return spec;
}

long Chain::total_density_evals() const {
  return cum_density_evals.empty() ? 0 : cum_density_evals.back();
}

long Chain::total_grad_evals() const {
  return cum_grad_evals.empty() ? 0 : cum_grad_evals.back();
}

bool Chain::has_log_densities() const {
  return log_densities.size() == size() && log_densities.allFinite();
}

Chain run_chain(const SamplerSpec& spec, const TargetDistribution& target,
                const Vector& x_init, long n_iterations, RandomSource& src) {
  if (n_iterations < 0) throw std::invalid_argument("run_chain: negative length");
  const int p = target.dim();
  if (x_init.size() != p)
    throw std::invalid_argument("run_chain: initial state has length " +
                                std::to_string(x_init.size()) + ", target dim is " +
                                std::to_string(p));
  const double log_f_init = target.log_density(x_init);
  if (!std::isfinite(log_f_init))
    throw std::invalid_argument("run_chain: log density at the initial state is not "
                                "finite (target " + target.name() + ")");

  Chain chain;
  chain.states.resize(n_iterations, p);
  chain.log_densities.resize(n_iterations);
  chain.cum_density_evals.resize(n_iterations);
  chain.cum_grad_evals.resize(n_iterations);
  chain.crumbs.resize(n_iterations);
  chain.accepted.resize(n_iterations);

  Vector x = x_init;
  double log_f = log_f_init;
  RunningMoments moments(p);
  long cum_density = 0;
  long cum_grad = 0;

  for (long i = 0; i < n_iterations; ++i) {
    StepResult step;
    try {
      if (spec.kind == SamplerKind::ShrinkRank)
        step = shrink_rank_step(x, log_f, target, spec.shrink, src);
      else
        step = adaptive_metropolis_step(x, log_f, target, spec.am, moments, src);
    } catch (const MaxCrumbsError& e) {
      throw MaxCrumbsError("iteration " + std::to_string(i) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(i) + ": " + e.what());
    }
    x = step.x;
    log_f = step.log_density;
    cum_density += step.stats.n_density_evals;
    cum_grad += step.stats.n_grad_evals;
    chain.states.row(i) = x.transpose();
    chain.log_densities[i] = log_f;
    chain.cum_density_evals[i] = cum_density;
    chain.cum_grad_evals[i] = cum_grad;
    chain.crumbs[i] = step.stats.n_crumbs;
    chain.accepted[i] = step.stats.accepted ? 1 : 0;
  }
  return chain;
}

}  // namespace shrinkrank

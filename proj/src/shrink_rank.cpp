#include <cmath>
#include <limits>
#include <sstream>

#include "shrinkrank/sampler.hpp"

namespace shrinkrank {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_sd_schedule(const std::vector<double>& sds, const ShrinkConfig& cfg) {
  for (std::size_t i = 1; i < sds.size(); ++i) {
    const double prev = sds[i - 1];
    const double cur = sds[i];
    const bool unchanged = cur == prev;
    const bool shrunk = std::abs(cur - cfg.theta * prev) <= 1e-12 * prev;
    const bool shrunk_zero =
        std::abs(cur - cfg.zero_density_factor * cfg.theta * prev) <= 1e-12 * prev;
    if (cur > prev || !(unchanged || shrunk || shrunk_zero))
      throw std::logic_error("shrink_rank_step: crumb sd schedule violated at crumb " +
                             std::to_string(i + 1));
  }
}

}  // namespace

void ShrinkConfig::validate() const {
  if (!(sigma_c > 0.0)) throw std::invalid_argument("ShrinkConfig: sigma_c must be > 0");
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("ShrinkConfig: theta must be in (0, 1)");
  if (!(cos_threshold > 0.0 && cos_threshold < 1.0))
    throw std::invalid_argument("ShrinkConfig: cos_threshold must be in (0, 1)");
  if (!(zero_density_factor > 0.0 && zero_density_factor <= 1.0))
    throw std::invalid_argument("ShrinkConfig: zero_density_factor must be in (0, 1]");
  if (max_crumbs < 1) throw std::invalid_argument("ShrinkConfig: max_crumbs must be >= 1");
}

StepResult shrink_rank_step(const Vector& x0, double log_f_x0,
                            const TargetDistribution& target,
                            const ShrinkConfig& cfg, RandomSource& src,
                            ShrinkState* state_out) {
  cfg.validate();
  const int p = target.dim();
  if (x0.size() != p)
    throw std::invalid_argument("shrink_rank_step: state has length " +
                                std::to_string(x0.size()) + ", target dim is " +
                                std::to_string(p));
  if (!std::isfinite(log_f_x0))
    throw std::invalid_argument("shrink_rank_step: log density at the current state "
                                "must be finite (target " + target.name() + ")");

  StepStats stats;
  stats.n_density_evals = 1;  // the slice-level evaluation at x0
  const double log_y = log_f_x0 - src.unit_exponential();

  OrthoBasis basis(p);
  double sigma = cfg.sigma_c;
  double sum_prec = 0.0;
  Vector weighted_offsets = Vector::Zero(p);  // sum of sigma^-2 (c_i - x0)

  std::vector<double> crumb_sds;
  if (state_out) {
    *state_out = ShrinkState{};
    state_out->x0 = x0;
    state_out->log_y = log_y;
    state_out->basis = OrthoBasis(p);
  }

  for (int k = 1; k <= cfg.max_crumbs; ++k) {
    stats.n_crumbs = k;
    crumb_sds.push_back(sigma);

    const Vector crumb_offset = basis.project(sigma * src.std_normal_vec(p));
    const double prec = 1.0 / (sigma * sigma);
    sum_prec += prec;
    weighted_offsets += prec * crumb_offset;
    if (state_out) state_out->crumb_offsets.push_back(crumb_offset);

    // Proposal precision is the sum of the crumb precisions; its mean offset
    // is the precision-weighted mean of the crumb offsets, re-projected since
    // the basis may have grown after earlier crumbs were drawn.
    const double sigma_x = 1.0 / std::sqrt(sum_prec);
    const Vector mu_x = weighted_offsets / sum_prec;
    const Vector proposal = x0 + basis.project(mu_x + sigma_x * src.std_normal_vec(p));

    const double log_f_prop = target.log_density(proposal);
    stats.n_density_evals += 1;

    if (log_f_prop >= log_y) {
      if (cfg.debug_checks) check_sd_schedule(crumb_sds, cfg);
      if (state_out) {
        state_out->crumb_sds = crumb_sds;
        state_out->k = k;
      }
      return StepResult{proposal, log_f_prop, stats};
    }

    if (log_f_prop == kNegInf) {
      // No gradient to adapt on at a zero-density proposal.
      sigma *= cfg.theta * cfg.zero_density_factor;
    } else {
      const Vector grad = target.grad_log_density(proposal);
      stats.n_grad_evals += 1;
      if (basis.angle_accepts(grad, cfg.cos_threshold)) {
        basis.extend(basis.project(grad));
        if (state_out) state_out->basis = basis;
      } else {
        sigma *= cfg.theta;
      }
    }
    if (cfg.debug_checks) {
      crumb_sds.push_back(sigma);
      check_sd_schedule(crumb_sds, cfg);
      crumb_sds.pop_back();
    }
  }

  std::ostringstream msg;
  msg << "shrink_rank_step: no proposal accepted within " << cfg.max_crumbs
      << " crumbs (target " << target.name() << ", sigma_c " << cfg.sigma_c
      << ", theta " << cfg.theta << ", x0 [";
  for (int i = 0; i < p; ++i) msg << (i ? " " : "") << x0[i];
  msg << "])";
  throw MaxCrumbsError(msg.str());
}

}  // namespace shrinkrank

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "shrinkrank/projection.hpp"
#include "shrinkrank/rng.hpp"
#include "shrinkrank/target.hpp"

namespace shrinkrank {

// Tuning for the shrinking-rank slice transition. sigma_c is the crumb
// standard deviation and the only parameter worth tuning; theta is the
// shrink factor applied whenever the basis is not extended, with an extra
// zero_density_factor applied on proposals of zero density (set it to 1 to
// disable that refinement). max_crumbs is a safety valve: reaching it is an
// error, never a silent acceptance.
struct ShrinkConfig {
  double sigma_c = 1.0;
  double theta = 0.95;
  double cos_threshold = 0.5;  // cos 60 degrees
  double zero_density_factor = 0.1;
  int max_crumbs = 10000;
  bool debug_checks = false;  // validate the crumb-sd schedule every crumb

  void validate() const;
};

// Tuning for the adaptive Metropolis baseline. The headline parameter is the
// initial proposal standard deviation times sqrt(dim); the rest follow the
// usual adaptive scheme: an isotropic component used before `onset_steps_per_dim
// * dim` states have been seen and with probability fixed_mix_weight after,
// otherwise a Gaussian scaled empirical covariance (2.38^2/dim) plus a ridge.
struct AmConfig {
  double init_sd_times_sqrt_dim = 0.1;
  double fixed_mix_weight = 0.05;
  double onset_steps_per_dim = 2.0;
  double ridge = 1e-10;

  void validate() const;
};

struct StepStats {
  long n_density_evals = 0;
  long n_grad_evals = 0;
  long n_crumbs = 0;
  bool accepted = true;  // always true for the shrinking-rank transition
};

// Per-transition record of the shrinking-rank update, filled on request.
// crumb_sds[k] relates to its predecessor by exactly one of: unchanged
// (basis extended), * theta, or * theta * zero_density_factor.
struct ShrinkState {
  Vector x0;
  double log_y = 0.0;
  OrthoBasis basis{1};
  std::vector<Vector> crumb_offsets;  // c_k - x0
  std::vector<double> crumb_sds;
  int k = 0;
};

struct StepResult {
  Vector x;
  double log_density;
  StepStats stats;
};

class MaxCrumbsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One shrinking-rank slice transition from x0 with cached log density
// log_f_x0. Draws a slice level in the log domain, then alternates crumbs and
// proposals, shrinking either the subspace rank (along projected gradients at
// rejected proposals) or the crumb scale until a proposal lands in the slice.
// Always returns an accepted state; throws MaxCrumbsError on pathological
// tuning. `state_out`, when non-null, receives the full per-transition record.
StepResult shrink_rank_step(const Vector& x0, double log_f_x0,
                            const TargetDistribution& target,
                            const ShrinkConfig& cfg, RandomSource& src,
                            ShrinkState* state_out = nullptr);

// Streaming mean and covariance of past states for the adaptive proposal.
class RunningMoments {
 public:
  explicit RunningMoments(int dim);

  void update(const Vector& x);
  long count() const { return n_; }
  const Vector& mean() const { return mean_; }
  Matrix covariance() const;  // requires count() >= 2

 private:
  long n_ = 0;
  Vector mean_;
  Matrix m2_;
};

// One adaptive Metropolis transition; updates `moments` with the new state.
StepResult adaptive_metropolis_step(const Vector& x0, double log_f_x0,
                                    const TargetDistribution& target,
                                    const AmConfig& cfg, RunningMoments& moments,
                                    RandomSource& src);

// ---------------------------------------------------------------------------

enum class SamplerKind { ShrinkRank, AdaptiveMetropolis };

std::string sampler_id(SamplerKind kind);
SamplerKind parse_sampler_id(const std::string& id);

struct SamplerSpec {
  SamplerKind kind = SamplerKind::ShrinkRank;
  ShrinkConfig shrink;
  AmConfig am;

  double tuning() const;
  static SamplerSpec with_tuning(SamplerKind kind, double tuning);
};

// n states plus per-iteration cumulative evaluation counts. Row i of `states`
// is the state after iteration i; x_init is not stored.
struct Chain {
  Matrix states;                       // n x p
  Vector log_densities;                // NaN when read back from CSV
  std::vector<long> cum_density_evals;
  std::vector<long> cum_grad_evals;
  std::vector<long> crumbs;            // per-iteration crumb count, 0 for AM
  std::vector<char> accepted;          // AM accept flags, 1 for shrink-rank

  long size() const { return states.rows(); }
  int dim() const { return static_cast<int>(states.cols()); }
  long total_density_evals() const;
  long total_grad_evals() const;
  bool has_log_densities() const;
};

// Runs `n_iterations` transitions from x_init. Deterministic given the
// source; step errors are rethrown annotated with the iteration index.
Chain run_chain(const SamplerSpec& spec, const TargetDistribution& target,
                const Vector& x_init, long n_iterations, RandomSource& src);

}  // namespace shrinkrank

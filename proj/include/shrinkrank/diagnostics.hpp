#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "shrinkrank/sampler.hpp"

namespace shrinkrank {

// Raised when the autocorrelation time of a series cannot be estimated
// (too short, or fewer than five distinct observations). Benchmark grids
// record these cells in a status column instead of aborting.
class InestimableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TauEstimate {
  double tau = 1.0;   // integrated autocorrelation time, clamped to >= 1
  double ci_lo = 0.0; // asymptotic 95% interval
  double ci_hi = 0.0;
  int window = 0;     // truncation lag the estimate used
};

// tau = 1 + 2 sum_{t=1}^{M} rho(t), truncated at the smallest M for which
// tau_hat(M) < M/5 (the self-consistent window rule). The interval uses
// var(tau_hat) ~= tau^2 (4M + 2) / n with a normal approximation. Requires
// length >= 100 and at least 5 distinct values.
TauEstimate autocorrelation_time(std::span<const double> series);

// Same estimator with the truncation lag forced (consistency checks).
TauEstimate autocorrelation_time_at_window(std::span<const double> series, int window);

// Which scalar series of a chain to diagnose.
struct Monitored {
  int coordinate = -1;  // >= 0: state coordinate; -1: log density
  static Monitored coord(int i);
  static Monitored log_density();
  bool is_log_density() const { return coordinate < 0; }
  std::string label() const;
};

struct EfficiencyReport {
  double tau = 0.0;
  double tau_ci_lo = 0.0;
  double tau_ci_hi = 0.0;
  double ess = 0.0;
  double evals_per_indep_obs = 0.0;
  double evals_ci_lo = 0.0;
  double evals_ci_hi = 0.0;
  long n_iterations = 0;         // after burn-in
  long total_density_evals = 0;  // over the same window
  std::string monitored_function;
};

// Efficiency of a chain on one monitored series, discarding an initial
// burn-in fraction: ess = n / tau and the cost metric is
// total_density_evals * tau / n, with its interval inherited from tau's.
EfficiencyReport efficiency_report(const Chain& chain, const Monitored& monitored,
                                   double burn_in_fraction = 0.1);

// The report of the coordinate with the largest tau, ties broken by lowest
// index. Coordinates whose tau is inestimable are skipped; throws
// InestimableError only when every coordinate is.
EfficiencyReport worst_coordinate_report(const Chain& chain,
                                         double burn_in_fraction = 0.1);

}  // namespace shrinkrank

#include "shrinkrank/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

namespace shrinkrank {

namespace {

constexpr long kMinLength = 100;
constexpr int kMinDistinct = 5;
constexpr double kZ95 = 1.959963984540054;

void check_estimable(std::span<const double> series) {
  const long n = static_cast<long>(series.size());
  if (n < kMinLength)
    throw InestimableError("autocorrelation time inestimable: series has " +
                           std::to_string(n) + " values, need >= " +
                           std::to_string(kMinLength));
  std::set<double> distinct;
  for (double v : series) {
    distinct.insert(v);
    if (static_cast<int>(distinct.size()) >= kMinDistinct) return;
  }
  throw InestimableError("autocorrelation time inestimable: fewer than " +
                         std::to_string(kMinDistinct) + " distinct observations");
}

// Sum of lag-t products of centered values, 1/n normalization.
double autocovariance(std::span<const double> series, double mean, long t) {
  const long n = static_cast<long>(series.size());
  double acc = 0.0;
  for (long i = 0; i + t < n; ++i)
    acc += (series[i] - mean) * (series[i + t] - mean);
  return acc / static_cast<double>(n);
}

TauEstimate finish(double tau_raw, int window, long n) {
  TauEstimate est;
  est.tau = std::max(1.0, tau_raw);
  est.window = window;
  const double sd = est.tau * std::sqrt((4.0 * window + 2.0) / static_cast<double>(n));
  est.ci_lo = std::max(0.0, est.tau - kZ95 * sd);
  est.ci_hi = est.tau + kZ95 * sd;
  return est;
}

}  // namespace

TauEstimate autocorrelation_time(std::span<const double> series) {
  check_estimable(series);
  const long n = static_cast<long>(series.size());
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  const double c0 = autocovariance(series, mean, 0);
  if (!(c0 > 0.0))
    throw InestimableError("autocorrelation time inestimable: series has zero variance");

  // Adaptive truncation: stop at the smallest M where tau_hat(M) < M/5.
  // Beyond n/5 lags the rule can no longer be satisfied meaningfully; fall
  // back to that lag with the (wide) interval the formula then yields.
  const long max_window = std::max<long>(1, n / 5);
  double tau_hat = 1.0;
  long window = max_window;
  for (long t = 1; t <= max_window; ++t) {
    tau_hat += 2.0 * autocovariance(series, mean, t) / c0;
    if (tau_hat < static_cast<double>(t) / 5.0) {
      window = t;
      break;
    }
  }
  return finish(tau_hat, static_cast<int>(window), n);
}

TauEstimate autocorrelation_time_at_window(std::span<const double> series, int window) {
  check_estimable(series);
  const long n = static_cast<long>(series.size());
  if (window < 1 || window >= n)
    throw std::invalid_argument("autocorrelation_time_at_window: bad window");
  const double mean =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  const double c0 = autocovariance(series, mean, 0);
  if (!(c0 > 0.0))
    throw InestimableError("autocorrelation time inestimable: series has zero variance");
  double tau_hat = 1.0;
  for (long t = 1; t <= window; ++t)
    tau_hat += 2.0 * autocovariance(series, mean, t) / c0;
  return finish(tau_hat, window, n);
}

Monitored Monitored::coord(int i) {
  if (i < 0) throw std::invalid_argument("Monitored: coordinate must be >= 0");
  Monitored m;
  m.coordinate = i;
  return m;
}

Monitored Monitored::log_density() { return Monitored{}; }

std::string Monitored::label() const {
  return is_log_density() ? "log-density" : "x" + std::to_string(coordinate);
}

namespace {

std::vector<double> monitored_series(const Chain& chain, const Monitored& monitored,
                                     long discard) {
  const long n = chain.size();
  std::vector<double> series;
  series.reserve(n - discard);
  if (monitored.is_log_density()) {
    if (!chain.has_log_densities())
      throw std::invalid_argument(
          "efficiency_report: chain carries no log-density series (chains read "
          "from CSV need the target re-attached to monitor log-density)");
    for (long i = discard; i < n; ++i) series.push_back(chain.log_densities[i]);
  } else {
    if (monitored.coordinate >= chain.dim())
      throw std::invalid_argument("efficiency_report: coordinate " +
                                  std::to_string(monitored.coordinate) +
                                  " out of range for dim " +
                                  std::to_string(chain.dim()));
    for (long i = discard; i < n; ++i)
      series.push_back(chain.states(i, monitored.coordinate));
  }
  return series;
}

}  // namespace

EfficiencyReport efficiency_report(const Chain& chain, const Monitored& monitored,
                                   double burn_in_fraction) {
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw std::invalid_argument("efficiency_report: burn-in fraction must be in [0, 1)");
  const long n = chain.size();
  const long discard = static_cast<long>(std::floor(n * burn_in_fraction));
  const auto series = monitored_series(chain, monitored, discard);
  const TauEstimate tau = autocorrelation_time(series);

  const long n_used = n - discard;
  const long evals_used =
      chain.cum_density_evals.empty()
          ? 0
          : chain.cum_density_evals.back() -
                (discard > 0 ? chain.cum_density_evals[discard - 1] : 0);
  const double evals_per_iter =
      static_cast<double>(evals_used) / static_cast<double>(n_used);

  EfficiencyReport report;
  report.tau = tau.tau;
  report.tau_ci_lo = tau.ci_lo;
  report.tau_ci_hi = tau.ci_hi;
  report.ess = static_cast<double>(n_used) / tau.tau;
  report.evals_per_indep_obs = evals_per_iter * tau.tau;
  report.evals_ci_lo = evals_per_iter * tau.ci_lo;
  report.evals_ci_hi = evals_per_iter * tau.ci_hi;
  report.n_iterations = n_used;
  report.total_density_evals = evals_used;
  report.monitored_function = monitored.label();
  return report;
}

EfficiencyReport worst_coordinate_report(const Chain& chain, double burn_in_fraction) {
  const int p = chain.dim();
  if (p < 1) throw std::invalid_argument("worst_coordinate_report: empty chain");
  bool found = false;
  EfficiencyReport worst;
  for (int i = 0; i < p; ++i) {
    try {
      EfficiencyReport r = efficiency_report(chain, Monitored::coord(i), burn_in_fraction);
      if (!found || r.tau > worst.tau) {
        worst = r;
        found = true;
      }
    } catch (const InestimableError&) {
      // skipped; only an all-inestimable chain is an error
    }
  }
  if (!found)
    throw InestimableError("worst_coordinate_report: every coordinate inestimable");
  return worst;
}

}  // namespace shrinkrank

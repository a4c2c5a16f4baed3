#pragma once

#include <string>

#include "shrinkrank/target.hpp"

namespace shrinkrank {

// Design matrix plus response vector for the regression targets. The design
// is kept exactly as loaded; nothing is standardized unless the caller did it.
struct RegressionData {
  Matrix design;    // n x k
  Vector response;  // length n; {0,1} entries for logistic targets
  bool standardized = false;
};

// Observed effects and their standard errors for the eight-schools
// hierarchical model; exactly eight of each.
struct EightSchoolsData {
  Vector effects;
  Vector std_errors;
};

struct GpData {
  Matrix inputs;   // n x q input locations
  Vector targets;  // length n
};

// Zero-mean Gaussian with unit variances and constant correlation rho.
// rho must keep the equicorrelation matrix positive definite,
// i.e. -1/(p-1) < rho < 1. The precision matrix is precomputed once.
TargetPtr make_correlated_gaussian(int p, double rho);

// Product of p independent Gamma(2,1) marginals:
// log f(x) = sum_i (log x_i - x_i) on the positive orthant, -inf elsewhere.
TargetPtr make_gamma_product(int p);

// Ten-parameter hierarchical posterior over (theta_1..theta_8, mu, log tau):
// y_j ~ N(theta_j, se_j^2), theta_j ~ N(mu, tau^2), flat priors on mu and tau
// with the log-Jacobian of the tau -> log tau reparameterization included.
TargetPtr make_eight_schools(const EightSchoolsData& data);

// Bayesian logistic regression with intercept: dim = k + 1, independent
// N(0, 100) prior on every coefficient.
TargetPtr make_logistic_regression(const RegressionData& data);

// Three-parameter Gaussian process regression posterior: signal variance,
// noise variance, and a correlation decay rate under
//   C_ij = v1 * exp(-ell * d(x_i, x_j)^2) + v2 * delta_ij.
// The unlogged variant works on (v1, v2, ell) directly and is -inf off the
// positive octant; the logged variant works on their logs with the Jacobian
// terms included. A numerically non-positive-definite C counts as out of
// support.
TargetPtr make_gp_regression(const Matrix& inputs, const Vector& targets, bool logged);

// Comma-separated file with one header row; the last column is the response,
// everything before it the design. Ragged rows, non-numeric cells, and
// non-binary responses are reported as errors.
RegressionData load_regression_csv(const std::string& path);

// Same layout but the response may be any real (GP observations).
GpData load_gp_csv(const std::string& path);

// Key-value config with `effects` and `std_errors` arrays of length 8.
EightSchoolsData load_eight_schools_config(const std::string& path);

}  // namespace shrinkrank

#pragma once

// Shared helpers for the unit and acceptance suites: equivariance wrappers,
// synthetic series, and a Kolmogorov-Smirnov check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "shrinkrank/rng.hpp"
#include "shrinkrank/target.hpp"

namespace testutil {

using shrinkrank::Matrix;
using shrinkrank::RandomSource;
using shrinkrank::TargetDistribution;
using shrinkrank::Vector;

// Applies a fixed matrix to every normal vector; uniform and exponential
// draws pass through untouched.
class RotatedSource final : public RandomSource {
 public:
  RotatedSource(RandomSource& base, Matrix rotation)
      : base_(base), rotation_(std::move(rotation)) {}

  double uniform() override { return base_.uniform(); }
  double unit_exponential() override { return base_.unit_exponential(); }
  Vector std_normal_vec(int p) override {
    if (p != rotation_.rows())
      throw std::logic_error("RotatedSource: unexpected draw dimension");
    return rotation_ * base_.std_normal_vec(p);
  }

 private:
  RandomSource& base_;
  Matrix rotation_;
};

// x -> base(R^T x) for orthogonal R; gradient is R grad(R^T x).
class RotatedTarget final : public TargetDistribution {
 public:
  RotatedTarget(const TargetDistribution& base, Matrix rotation)
      : base_(base), rotation_(std::move(rotation)), name_(base.name() + "+rotated") {}

  int dim() const override { return base_.dim(); }
  const std::string& name() const override { return name_; }
  double log_density(const Vector& x) const override {
    return base_.log_density(rotation_.transpose() * x);
  }
  Vector grad_log_density(const Vector& x) const override {
    return rotation_ * base_.grad_log_density(rotation_.transpose() * x);
  }
  Vector default_init() const override { return rotation_ * base_.default_init(); }

 private:
  const TargetDistribution& base_;
  Matrix rotation_;
  std::string name_;
};

// x -> base(x - shift).
class ShiftedTarget final : public TargetDistribution {
 public:
  ShiftedTarget(const TargetDistribution& base, Vector shift)
      : base_(base), shift_(std::move(shift)), name_(base.name() + "+shifted") {}

  int dim() const override { return base_.dim(); }
  const std::string& name() const override { return name_; }
  double log_density(const Vector& x) const override {
    return base_.log_density(x - shift_);
  }
  Vector grad_log_density(const Vector& x) const override {
    return base_.grad_log_density(x - shift_);
  }
  Vector default_init() const override { return base_.default_init() + shift_; }

 private:
  const TargetDistribution& base_;
  Vector shift_;
  std::string name_;
};

// Records every log-density evaluation point (i.e. every proposal the
// shrinking-rank step makes, in order).
class RecordingTarget final : public TargetDistribution {
 public:
  explicit RecordingTarget(const TargetDistribution& base) : base_(base) {}

  int dim() const override { return base_.dim(); }
  const std::string& name() const override { return base_.name(); }
  double log_density(const Vector& x) const override {
    eval_points.push_back(x);
    return base_.log_density(x);
  }
  Vector grad_log_density(const Vector& x) const override {
    return base_.grad_log_density(x);
  }
  Vector default_init() const override { return base_.default_init(); }

  mutable std::vector<Vector> eval_points;

 private:
  const TargetDistribution& base_;
};

// Random orthogonal matrix: QR of a Gaussian matrix with the sign of R's
// diagonal folded into Q so the distribution is Haar.
inline Matrix random_orthogonal(int p, RandomSource& src) {
  Matrix g(p, p);
  for (int j = 0; j < p; ++j) g.col(j) = src.std_normal_vec(p);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < p; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

// Stationary unit-variance AR(1) series with coefficient phi.
inline std::vector<double> ar1_series(double phi, long n, std::uint64_t seed) {
  shrinkrank::Mt19937Source src(seed);
  std::vector<double> out(n);
  double x = src.std_normal_vec(1)[0];
  const double innovation_sd = std::sqrt(1.0 - phi * phi);
  for (long i = 0; i < n; ++i) {
    out[i] = x;
    x = phi * x + innovation_sd * src.std_normal_vec(1)[0];
  }
  return out;
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Gamma(2,1) CDF: 1 - e^-x (1 + x) for x >= 0.
inline double gamma2_cdf(double x) {
  return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x) * (1.0 + x);
}

inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Critical value of the Kolmogorov distribution: the lambda with
// 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2) = alpha.
inline double kolmogorov_critical(double alpha) {
  const auto tail = [](double lambda) {
    double q = 0.0;
    for (int k = 1; k <= 100; ++k)
      q += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return q;
  };
  double lo = 0.2, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Asymptotic KS acceptance threshold at level alpha for n samples.
inline double ks_threshold(double alpha, long n) {
  const double root = std::sqrt(static_cast<double>(n));
  return kolmogorov_critical(alpha) / (root + 0.12 + 0.11 / root);
}

}  // namespace testutil

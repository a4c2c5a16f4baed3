#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shrinkrank/targets.hpp"

namespace shrinkrank {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Marginal likelihood of y ~ N(0, C) with
//   C = v1 * exp(-ell * sqdist) + v2 * I
// over the three hyperparameters. Gradients use the usual identity
//   d/dt log N(y; 0, C) = 1/2 tr((aa^T - C^-1) dC/dt),  a = C^-1 y.
class GpRegression final : public TargetDistribution {
 public:
  GpRegression(const Matrix& inputs, const Vector& targets, bool logged)
      : logged_(logged), y_(targets) {
    const auto n = inputs.rows();
    if (n < 2) throw std::invalid_argument("gp: needs at least 2 observations");
    if (targets.size() != n)
      throw std::invalid_argument("gp: targets length does not match inputs");
    if (!inputs.allFinite() || !targets.allFinite())
      throw std::invalid_argument("gp: data must be finite");
    sqdist_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        sqdist_(i, j) = (inputs.row(i) - inputs.row(j)).squaredNorm();
    std::ostringstream nm;
    nm << "gp-" << (logged ? "logged" : "unlogged") << "(n=" << n << ")";
    name_ = nm.str();
  }

  int dim() const override { return 3; }
  const std::string& name() const override { return name_; }

  double log_density(const Vector& x) const override {
    check_dim(x);
    double v1, v2, ell;
    if (!to_raw(x, v1, v2, ell)) return kNegInf;
    Eigen::LLT<Matrix> chol;
    if (!factor(v1, v2, ell, chol)) return kNegInf;
    const Vector alpha = chol.solve(y_);
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < y_.size(); ++i)
      log_det += 2.0 * std::log(chol.matrixLLT()(i, i));
    double lf = -0.5 * y_.dot(alpha) - 0.5 * log_det -
                0.5 * y_.size() * std::log(2.0 * M_PI);
    if (logged_) lf += x.sum();  // Jacobian of the three log transforms
    return std::isfinite(lf) ? lf : kNegInf;
  }

  Vector grad_log_density(const Vector& x) const override {
    check_dim(x);
    double v1, v2, ell;
    if (!to_raw(x, v1, v2, ell))
      throw std::invalid_argument(name_ + ": gradient requested outside the support");
    Eigen::LLT<Matrix> chol;
    if (!factor(v1, v2, ell, chol))
      throw std::invalid_argument(name_ + ": covariance not positive definite here");
    const auto n = y_.size();
    const Matrix kernel = (-ell * sqdist_.array()).exp().matrix();
    const Vector alpha = chol.solve(y_);
    const Matrix c_inv = chol.solve(Matrix::Identity(n, n));
    const Matrix a = alpha * alpha.transpose() - c_inv;
    // tr(A B) = sum(A .* B) for symmetric A, B.
    const double d_v1 = 0.5 * (a.array() * kernel.array()).sum();
    const double d_v2 = 0.5 * a.trace();
    const double d_ell =
        0.5 * (a.array() * (-v1 * sqdist_.array() * kernel.array())).sum();
    Vector g(3);
    if (logged_) {
      g << d_v1 * v1 + 1.0, d_v2 * v2 + 1.0, d_ell * ell + 1.0;
    } else {
      g << d_v1, d_v2, d_ell;
    }
    return g;
  }

  Vector default_init() const override {
    return logged_ ? Vector::Zero(3) : Vector::Ones(3);
  }

 private:
  bool to_raw(const Vector& x, double& v1, double& v2, double& ell) const {
    if (logged_) {
      v1 = std::exp(x[0]);
      v2 = std::exp(x[1]);
      ell = std::exp(x[2]);
      return std::isfinite(v1) && std::isfinite(v2) && std::isfinite(ell);
    }
    v1 = x[0];
    v2 = x[1];
    ell = x[2];
    return v1 > 0.0 && v2 > 0.0 && ell > 0.0;
  }

  bool factor(double v1, double v2, double ell, Eigen::LLT<Matrix>& chol) const {
    Matrix c = (v1 * (-ell * sqdist_.array()).exp()).matrix();
    c.diagonal().array() += v2;
    if (!c.allFinite()) return false;
    chol.compute(c);
    return chol.info() == Eigen::Success;
  }

  bool logged_;
  Vector y_;
  Matrix sqdist_;
  std::string name_;
};

}  // namespace

TargetPtr make_gp_regression(const Matrix& inputs, const Vector& targets, bool logged) {
  return std::make_shared<GpRegression>(inputs, targets, logged);
}

}  // namespace shrinkrank

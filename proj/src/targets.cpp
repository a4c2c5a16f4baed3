#include "shrinkrank/targets.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "shrinkrank/config_file.hpp"

namespace shrinkrank {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 + exp(eta)) without overflow on either tail.
double log1p_exp(double eta) {
  if (eta > 35.0) return eta;
  if (eta < -35.0) return std::exp(eta);
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

double expit(double eta) {
  if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

}  // namespace

void TargetDistribution::check_dim(const Vector& x) const {
  if (x.size() != dim())
    throw std::invalid_argument(name() + ": point has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dim()));
}

Vector finite_diff_grad(const TargetDistribution& target, const Vector& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad: h must be > 0");
  if (!std::isfinite(target.log_density(x)))
    throw std::invalid_argument("finite_diff_grad: log density not finite at x");
  const int p = target.dim();
  Vector g(p);
  Vector xp = x, xm = x;
  for (int i = 0; i < p; ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fp = target.log_density(xp);
    const double fm = target.log_density(xm);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw std::invalid_argument(
          "finite_diff_grad: stencil point out of support at coordinate " +
          std::to_string(i));
    g[i] = (fp - fm) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

// ---------------------------------------------------------------------------
// Equicorrelated Gaussian

namespace {

class CorrelatedGaussian final : public TargetDistribution {
 public:
  CorrelatedGaussian(int p, double rho) : p_(p), rho_(rho) {
    if (p < 1) throw std::invalid_argument("correlated-gaussian: dim must be >= 1");
    if (p >= 2 && !(rho > -1.0 / (p - 1) && rho < 1.0))
      throw std::invalid_argument(
          "correlated-gaussian: rho = " + std::to_string(rho) +
          " is outside the positive-definite range (-1/(p-1), 1) for p = " +
          std::to_string(p));
    if (p == 1 && !(rho > -1.0 && rho < 1.0))
      throw std::invalid_argument("correlated-gaussian: |rho| must be < 1");
    // Sigma = (1-rho) I + rho 11^T inverts in closed form:
    // Sigma^-1 = a I + b 11^T with a = 1/(1-rho),
    // b = -rho / ((1-rho)(1+(p-1)rho)).
    const double a = 1.0 / (1.0 - rho);
    const double b = p >= 1 ? -rho / ((1.0 - rho) * (1.0 + (p - 1) * rho)) : 0.0;
    precision_ = Matrix::Constant(p, p, b);
    precision_.diagonal().array() += a;
    const double log_det_sigma =
        std::log(1.0 + (p - 1) * rho) + (p - 1) * std::log(1.0 - rho);
    log_norm_ = -0.5 * (p * std::log(2.0 * M_PI) + log_det_sigma);
    std::ostringstream nm;
    nm << "correlated-gaussian(dim=" << p << ",rho=" << rho << ")";
    name_ = nm.str();
  }

  int dim() const override { return p_; }
  const std::string& name() const override { return name_; }

  double log_density(const Vector& x) const override {
    check_dim(x);
    return log_norm_ - 0.5 * x.dot(precision_ * x);
  }

  Vector grad_log_density(const Vector& x) const override {
    check_dim(x);
    return -(precision_ * x);
  }

  Vector default_init() const override { return Vector::Zero(p_); }

  double rho() const { return rho_; }

 private:
  int p_;
  double rho_;
  Matrix precision_;
  double log_norm_;
  std::string name_;
};

}  // namespace

TargetPtr make_correlated_gaussian(int p, double rho) {
  return std::make_shared<CorrelatedGaussian>(p, rho);
}

// ---------------------------------------------------------------------------
// Gamma(2,1) product

namespace {

class GammaProduct final : public TargetDistribution {
 public:
  explicit GammaProduct(int p) : p_(p) {
    if (p < 1) throw std::invalid_argument("gamma-product: dim must be >= 1");
    name_ = "gamma-product(dim=" + std::to_string(p) + ")";
  }

  int dim() const override { return p_; }
  const std::string& name() const override { return name_; }

  double log_density(const Vector& x) const override {
    check_dim(x);
    double lf = 0.0;
    for (int i = 0; i < p_; ++i) {
      if (!(x[i] > 0.0)) return kNegInf;
      lf += std::log(x[i]) - x[i];
    }
    return lf;
  }

  Vector grad_log_density(const Vector& x) const override {
    check_dim(x);
    return x.array().inverse() - 1.0;
  }

  Vector default_init() const override { return Vector::Ones(p_); }

 private:
  int p_;
  std::string name_;
};

}  // namespace

TargetPtr make_gamma_product(int p) { return std::make_shared<GammaProduct>(p); }

// ---------------------------------------------------------------------------
// Eight schools

namespace {

class EightSchools final : public TargetDistribution {
 public:
  explicit EightSchools(EightSchoolsData data) : data_(std::move(data)) {
    if (data_.effects.size() != 8 || data_.std_errors.size() != 8)
      throw std::invalid_argument("eight-schools: needs exactly 8 effects and 8 std errors");
    if (!(data_.std_errors.array() > 0.0).all())
      throw std::invalid_argument("eight-schools: std errors must be strictly positive");
    if (!data_.effects.allFinite() || !data_.std_errors.allFinite())
      throw std::invalid_argument("eight-schools: data must be finite");
    name_ = "eight-schools";
  }

  int dim() const override { return 10; }
  const std::string& name() const override { return name_; }

  // x = (theta_1..theta_8, mu, log tau). Flat on mu; the +log tau term is the
  // Jacobian of sampling tau on the log scale.
  double log_density(const Vector& x) const override {
    check_dim(x);
    const double mu = x[8];
    const double log_tau = x[9];
    const double tau2 = std::exp(2.0 * log_tau);
    if (!std::isfinite(tau2) || tau2 == 0.0) return kNegInf;
    double lf = log_tau;
    for (int j = 0; j < 8; ++j) {
      const double th = x[j];
      const double se2 = data_.std_errors[j] * data_.std_errors[j];
      lf += -0.5 * (data_.effects[j] - th) * (data_.effects[j] - th) / se2;
      lf += -0.5 * (th - mu) * (th - mu) / tau2 - log_tau;
    }
    return std::isfinite(lf) ? lf : kNegInf;
  }

  Vector grad_log_density(const Vector& x) const override {
    check_dim(x);
    const double mu = x[8];
    const double log_tau = x[9];
    const double tau2 = std::exp(2.0 * log_tau);
    Vector g = Vector::Zero(10);
    double sum_dev2 = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double th = x[j];
      const double se2 = data_.std_errors[j] * data_.std_errors[j];
      const double dev = th - mu;
      g[j] = (data_.effects[j] - th) / se2 - dev / tau2;
      g[8] += dev / tau2;
      sum_dev2 += dev * dev;
    }
    g[9] = sum_dev2 / tau2 - 8.0 + 1.0;
    return g;
  }

  Vector default_init() const override {
    Vector x = Vector::Zero(10);
    x[9] = std::log(10.0);  // tau on the scale of the observed effects
    return x;
  }

 private:
  EightSchoolsData data_;
  std::string name_;
};

}  // namespace

TargetPtr make_eight_schools(const EightSchoolsData& data) {
  return std::make_shared<EightSchools>(data);
}

// ---------------------------------------------------------------------------
// Logistic regression

namespace {

constexpr double kLogisticPriorVar = 100.0;

class LogisticRegression final : public TargetDistribution {
 public:
  explicit LogisticRegression(RegressionData data) : data_(std::move(data)) {
    const auto n = data_.design.rows();
    const auto k = data_.design.cols();
    if (n < 1 || k < 1)
      throw std::invalid_argument("logistic: needs at least one row and one column");
    if (data_.response.size() != n)
      throw std::invalid_argument("logistic: response length " +
                                  std::to_string(data_.response.size()) +
                                  " does not match " + std::to_string(n) + " rows");
    for (Eigen::Index i = 0; i < n; ++i)
      if (data_.response[i] != 0.0 && data_.response[i] != 1.0)
        throw std::invalid_argument("logistic: response entries must be 0 or 1");
    if (!data_.design.allFinite())
      throw std::invalid_argument("logistic: design matrix must be finite");
    name_ = "logistic(dim=" + std::to_string(k + 1) + ")";
  }

  int dim() const override { return static_cast<int>(data_.design.cols()) + 1; }
  const std::string& name() const override { return name_; }

  // x = (intercept, beta_1..beta_k), independent N(0, 100) prior on each.
  double log_density(const Vector& x) const override {
    check_dim(x);
    const Vector eta =
        (data_.design * x.tail(x.size() - 1)).array() + x[0];
    double lf = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
      lf += data_.response[i] * eta[i] - log1p_exp(eta[i]);
    lf += -0.5 * x.squaredNorm() / kLogisticPriorVar -
          0.5 * dim() * std::log(2.0 * M_PI * kLogisticPriorVar);
    return lf;
  }

  Vector grad_log_density(const Vector& x) const override {
    check_dim(x);
    const Vector eta =
        (data_.design * x.tail(x.size() - 1)).array() + x[0];
    Vector resid(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i)
      resid[i] = data_.response[i] - expit(eta[i]);
    Vector g(dim());
    g[0] = resid.sum();
    g.tail(dim() - 1) = data_.design.transpose() * resid;
    g -= x / kLogisticPriorVar;
    return g;
  }

  Vector default_init() const override { return Vector::Zero(dim()); }

 private:
  RegressionData data_;
  std::string name_;
};

}  // namespace

TargetPtr make_logistic_regression(const RegressionData& data) {
  return std::make_shared<LogisticRegression>(data);
}

// ---------------------------------------------------------------------------
// CSV / config ingestion

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

// Shared reader: header row, numeric body, last column = response.
std::pair<Matrix, Vector> read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file (expected a header row)");
  const std::size_t n_cols = split_csv_line(line).size();
  if (n_cols < 2)
    throw std::runtime_error(path + ": need at least one covariate column and a response");

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto cells = split_csv_line(line);
    if (cells.size() != n_cols)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": row has " +
                               std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(n_cols));
    std::vector<double> row;
    row.reserve(n_cols);
    for (const auto& c : cells)
      row.push_back(parse_real(c, path + ":" + std::to_string(lineno)));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": no data rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto k = static_cast<Eigen::Index>(n_cols - 1);
  Matrix design(n, k);
  Vector response(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) design(i, j) = rows[i][j];
    response[i] = rows[i][n_cols - 1];
  }
  return {std::move(design), std::move(response)};
}

}  // namespace

RegressionData load_regression_csv(const std::string& path) {
  auto [design, response] = read_numeric_csv(path);
  for (Eigen::Index i = 0; i < response.size(); ++i)
    if (response[i] != 0.0 && response[i] != 1.0)
      throw std::runtime_error(path + ": response value " + std::to_string(response[i]) +
                               " in row " + std::to_string(i + 2) + " is not 0/1");
  return RegressionData{std::move(design), std::move(response), false};
}

GpData load_gp_csv(const std::string& path) {
  auto [inputs, targets] = read_numeric_csv(path);
  return GpData{std::move(inputs), std::move(targets)};
}

EightSchoolsData load_eight_schools_config(const std::string& path) {
  const auto kv = KeyValueFile::parse_file(path);
  const auto effects = kv.get_reals("effects");
  const auto std_errors = kv.get_reals("std_errors");
  if (effects.size() != 8 || std_errors.size() != 8)
    throw std::runtime_error(path + ": effects and std_errors must each have 8 entries");
  EightSchoolsData data;
  data.effects = Eigen::Map<const Vector>(effects.data(), 8);
  data.std_errors = Eigen::Map<const Vector>(std_errors.data(), 8);
  return data;
}

}  // namespace shrinkrank

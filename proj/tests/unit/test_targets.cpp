#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "shrinkrank/rng.hpp"
#include "shrinkrank/targets.hpp"

using namespace shrinkrank;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = TEST_DATA_DIR;

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

double rel_grad_error(const TargetDistribution& target, const Vector& x, double h) {
  const Vector analytic = target.grad_log_density(x);
  const Vector fd = finite_diff_grad(target, x, h);
  return (analytic - fd).norm() / std::max(1e-12, fd.norm());
}

void check_gradients(const TargetDistribution& target,
                     const std::function<Vector(Mt19937Source&)>& draw_point,
                     double tol, double h = 1e-5) {
  Mt19937Source src(2024);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector x = draw_point(src);
    REQUIRE(std::isfinite(target.log_density(x)));
    CHECK(rel_grad_error(target, x, h) < tol);
  }
}

}  // namespace

TEST_SUITE("targets") {

TEST_CASE("correlated gaussian: spectrum and density") {
  const auto target = make_correlated_gaussian(4, 0.999);
  CHECK(target->dim() == 4);

  // Equicorrelation spectrum: one eigenvalue 1+3rho, three of 1-rho.
  Matrix sigma = Matrix::Constant(4, 4, 0.999);
  sigma.diagonal().setOnes();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  CHECK(eig.eigenvalues()[3] == doctest::Approx(3.997));
  CHECK(eig.eigenvalues()[0] == doctest::Approx(0.001));
  const double cond = eig.eigenvalues()[3] / eig.eigenvalues()[0];
  CHECK(cond == doctest::Approx((1 + 3 * 0.999) / (1 - 0.999)).epsilon(1e-6));

  // log density agrees with a dense solve of the same covariance.
  Mt19937Source src(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Vector x = src.std_normal_vec(4);
    const double quad = x.dot(sigma.llt().solve(x));
    const double diff = target->log_density(Vector::Zero(4)) - target->log_density(x);
    CHECK(diff == doctest::Approx(0.5 * quad).epsilon(1e-9));
  }
}

TEST_CASE("correlated gaussian: rho = 0 is the standard normal") {
  const auto target = make_correlated_gaussian(2, 0.0);
  Vector x(2);
  x << 1, 1;
  CHECK(target->log_density(x) - target->log_density(Vector::Zero(2)) ==
        doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("correlated gaussian: invalid rho") {
  CHECK_THROWS_AS(make_correlated_gaussian(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_correlated_gaussian(4, -0.34), std::invalid_argument);
  CHECK_NOTHROW(make_correlated_gaussian(4, -0.33));
}

TEST_CASE("correlated gaussian: gradient oracle") {
  const auto target = make_correlated_gaussian(4, 0.999);
  check_gradients(*target, [](Mt19937Source& src) { return Vector(src.std_normal_vec(4)); },
                  1e-5);
}

TEST_CASE("gamma product: closed form") {
  const auto target = make_gamma_product(2);
  Vector x(2);
  x << 2, 2;
  CHECK(target->log_density(x) == doctest::Approx(2 * (std::log(2.0) - 2.0)).epsilon(1e-12));
  const Vector g = target->grad_log_density(x);
  CHECK(g[0] == doctest::Approx(-0.5));
  CHECK(g[1] == doctest::Approx(-0.5));

  Vector neg(1);
  neg << -1;
  CHECK(make_gamma_product(1)->log_density(neg) ==
        -std::numeric_limits<double>::infinity());
  CHECK(std::isfinite(target->log_density(target->default_init())));
}

TEST_CASE("gamma product: gradient oracle") {
  const auto target = make_gamma_product(3);
  check_gradients(*target,
                  [](Mt19937Source& src) {
                    Vector x = src.std_normal_vec(3);
                    return Vector(x.array().abs() + 0.5);
                  },
                  1e-5);
}

TEST_CASE("eight schools: dimension, flat-at-mu gradient, oracle") {
  const auto data = load_eight_schools_config(kDataDir + "/eight_schools.cfg");
  const auto target = make_eight_schools(data);
  CHECK(target->dim() == 10);
  CHECK(std::isfinite(target->log_density(target->default_init())));

  // With every theta_j at mu the hierarchical term has no pull on theta.
  Vector x = Vector::Zero(10);
  x.head(8).setConstant(3.0);
  x[8] = 3.0;
  x[9] = 0.7;
  const Vector g = target->grad_log_density(x);
  for (int j = 0; j < 8; ++j) {
    const double se2 = data.std_errors[j] * data.std_errors[j];
    CHECK(g[j] == doctest::Approx((data.effects[j] - 3.0) / se2).epsilon(1e-10));
  }

  check_gradients(*target,
                  [](Mt19937Source& src) {
                    Vector x = src.std_normal_vec(10) * 2.0;
                    return x;
                  },
                  1e-5, 1e-4);
}

TEST_CASE("eight schools: malformed data") {
  EightSchoolsData bad;
  bad.effects = Vector::Zero(7);
  bad.std_errors = Vector::Ones(7);
  CHECK_THROWS_AS(make_eight_schools(bad), std::invalid_argument);
  bad.effects = Vector::Zero(8);
  bad.std_errors = Vector::Ones(8);
  bad.std_errors[3] = 0.0;
  CHECK_THROWS_AS(make_eight_schools(bad), std::invalid_argument);
}

TEST_CASE("logistic regression: shipped data gives 25 parameters") {
  const auto data = load_regression_csv(kDataDir + "/german_credit_synthetic.csv");
  CHECK(data.design.rows() == 1000);
  CHECK(data.design.cols() == 24);
  CHECK_FALSE(data.standardized);
  const auto target = make_logistic_regression(data);
  CHECK(target->dim() == 25);
  CHECK(std::isfinite(target->log_density(target->default_init())));
}

TEST_CASE("logistic regression: intercept gradient at zero") {
  RegressionData data;
  data.design = Matrix::Random(40, 3);
  data.response = Vector::Zero(40);
  for (int i = 0; i < 20; ++i) data.response[i] = 1.0;
  const auto target = make_logistic_regression(data);
  const Vector g = target->grad_log_density(Vector::Zero(4));
  double expected = 0.0;
  for (int i = 0; i < 40; ++i) expected += data.response[i] - 0.5;
  CHECK(g[0] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("logistic regression: gradient oracle on a small synthetic set") {
  Mt19937Source gen(11);
  RegressionData data;
  data.design = Matrix(30, 3);
  for (int i = 0; i < 30; ++i) data.design.row(i) = gen.std_normal_vec(3).transpose();
  data.response = Vector(30);
  for (int i = 0; i < 30; ++i) data.response[i] = gen.uniform() < 0.5 ? 0.0 : 1.0;
  const auto target = make_logistic_regression(data);
  check_gradients(*target,
                  [](Mt19937Source& src) { return Vector(0.3 * src.std_normal_vec(4)); },
                  1e-5);
}

TEST_CASE("logistic regression: rejects non-binary responses") {
  RegressionData data;
  data.design = Matrix::Ones(3, 2);
  data.response = Vector::Zero(3);
  data.response[1] = 0.5;
  CHECK_THROWS_AS(make_logistic_regression(data), std::invalid_argument);
}

TEST_CASE("gp regression: support") {
  const auto data = load_gp_csv(kDataDir + "/gp_synthetic.csv");
  CHECK(data.inputs.rows() == 10);
  const auto unlogged = make_gp_regression(data.inputs, data.targets, false);
  const auto logged = make_gp_regression(data.inputs, data.targets, true);

  Vector bad(3);
  bad << -1.0, 1.0, 1.0;
  CHECK(unlogged->log_density(bad) == -std::numeric_limits<double>::infinity());
  Vector wild(3);
  wild << -3.0, -5.0, 2.0;  // logs may be anywhere
  CHECK(std::isfinite(logged->log_density(wild)));
  CHECK(std::isfinite(unlogged->log_density(unlogged->default_init())));
  CHECK(std::isfinite(logged->log_density(logged->default_init())));
}

TEST_CASE("gp regression: large noise limit factorizes") {
  Matrix inputs(2, 1);
  inputs << 1.0, 1.0;  // identical inputs
  Vector y(2);
  y << 0.4, -0.2;
  const auto target = make_gp_regression(inputs, y, false);
  const double v1 = 0.5, v2 = 1e6, ell = 1.0;
  Vector x(3);
  x << v1, v2, ell;
  double independent = 0.0;
  for (int i = 0; i < 2; ++i)
    independent += -0.5 * y[i] * y[i] / (v1 + v2) - 0.5 * std::log(2 * M_PI * (v1 + v2));
  CHECK(target->log_density(x) == doctest::Approx(independent).epsilon(1e-6));
}

TEST_CASE("gp regression: gradient oracle") {
  const auto data = load_gp_csv(kDataDir + "/gp_synthetic.csv");
  const auto unlogged = make_gp_regression(data.inputs, data.targets, false);
  const auto logged = make_gp_regression(data.inputs, data.targets, true);
  check_gradients(*unlogged,
                  [](Mt19937Source& src) {
                    Vector x = src.std_normal_vec(3);
                    return Vector(x.array().abs() + 0.3);
                  },
                  1e-4);
  check_gradients(*logged,
                  [](Mt19937Source& src) { return Vector(0.7 * src.std_normal_vec(3)); },
                  1e-4);
}

TEST_CASE("csv ingestion") {
  const auto path = write_temp("sr_tiny.csv", "a,b,y\n1,2,0\n3,4,1\n");
  const auto data = load_regression_csv(path.string());
  CHECK(data.design.rows() == 2);
  CHECK(data.design.cols() == 2);
  CHECK(data.response[1] == 1.0);

  CHECK_THROWS(load_regression_csv("/nonexistent/file.csv"));
  CHECK_THROWS(load_regression_csv(
      write_temp("sr_empty.csv", "").string()));
  CHECK_THROWS_WITH_AS(load_regression_csv(write_temp("sr_ragged.csv",
                                                      "a,b,y\n1,2,0\n3,4\n")
                                               .string()),
                       doctest::Contains("cells"), std::runtime_error);
  CHECK_THROWS(load_regression_csv(
      write_temp("sr_nonnum.csv", "a,b,y\n1,x,0\n").string()));
  CHECK_THROWS_WITH_AS(load_regression_csv(write_temp("sr_nonbin.csv",
                                                      "a,b,y\n1,2,0.7\n")
                                               .string()),
                       doctest::Contains("0/1"), std::runtime_error);
}

TEST_CASE("finite differences") {
  const auto gaussian = make_correlated_gaussian(2, 0.0);
  Vector x(2);
  x << 0.3, -0.7;
  // Quadratic log density: central differences are exact up to rounding.
  const Vector fd = finite_diff_grad(*gaussian, x, 1e-5);
  CHECK((fd - gaussian->grad_log_density(x)).norm() < 1e-8);

  const auto gamma = make_gamma_product(2);
  Vector two(2);
  two << 2, 2;
  const Vector gfd = finite_diff_grad(*gamma, two, 1e-6);
  CHECK(gfd[0] == doctest::Approx(-0.5).epsilon(1e-6));

  CHECK_THROWS_AS(finite_diff_grad(*gamma, two, 0.0), std::invalid_argument);
  Vector edge(2);
  edge << 1e-9, 2.0;  // stencil crosses the support boundary
  CHECK_THROWS_AS(finite_diff_grad(*gamma, edge, 1e-5), std::invalid_argument);
}

}  // TEST_SUITE

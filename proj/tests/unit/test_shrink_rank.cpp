#include <doctest.h>

#include <cmath>

#include "../support/helpers.hpp"
#include "shrinkrank/diagnostics.hpp"
#include "shrinkrank/sampler.hpp"
#include "shrinkrank/targets.hpp"

using namespace shrinkrank;
using testutil::RecordingTarget;

TEST_SUITE("shrink-rank") {

TEST_CASE("accounting: one density eval per proposal plus the slice level") {
  const auto target = make_correlated_gaussian(3, 0.5);
  Mt19937Source src(3);
  Vector x = target->default_init();
  double lf = target->log_density(x);
  ShrinkConfig cfg;
  bool saw_first_crumb_accept = false;
  for (int i = 0; i < 200; ++i) {
    const StepResult step = shrink_rank_step(x, lf, *target, cfg, src);
    CHECK(step.stats.n_density_evals == 1 + step.stats.n_crumbs);
    CHECK(step.stats.accepted);
    CHECK(step.stats.n_grad_evals <= step.stats.n_crumbs);
    if (step.stats.n_crumbs == 1) {
      CHECK(step.stats.n_density_evals == 2);
      saw_first_crumb_accept = true;
    }
    x = step.x;
    lf = step.log_density;
  }
  CHECK(saw_first_crumb_accept);
}

TEST_CASE("crumb sd schedule: theta^3 after three plain rejections") {
  // In one dimension the basis can never grow, so every rejection scales
  // sigma by theta (the target has full support: no zero-density factor).
  const auto target = make_correlated_gaussian(1, 0.0);
  ShrinkConfig cfg;
  cfg.sigma_c = 50.0;
  cfg.debug_checks = true;
  Mt19937Source src(17);
  Vector x = target->default_init();
  double lf = target->log_density(x);
  bool saw_three_rejections = false;
  for (int i = 0; i < 200 && !saw_three_rejections; ++i) {
    ShrinkState state;
    const StepResult step = shrink_rank_step(x, lf, *target, cfg, src, &state);
    REQUIRE(state.k == static_cast<int>(state.crumb_sds.size()));
    if (state.k >= 4) {
      const double expected = cfg.theta * cfg.theta * cfg.theta * cfg.sigma_c;
      CHECK(state.crumb_sds[3] == doctest::Approx(expected).epsilon(1e-12));
      CHECK(expected == doctest::Approx(0.857375 * cfg.sigma_c).epsilon(1e-9));
      saw_three_rejections = true;
    }
    x = step.x;
    lf = step.log_density;
  }
  CHECK(saw_three_rejections);
}

TEST_CASE("after a basis extension, crumbs and proposals stay in the nullspace line") {
  const auto base = make_correlated_gaussian(2, 0.99);
  ShrinkConfig cfg;
  cfg.sigma_c = 20.0;  // big crumbs force rejections and adaptation
  Mt19937Source src(21);
  Vector x = base->default_init();
  x << 0.3, 0.4;
  double lf = base->log_density(x);

  bool saw_extension = false;
  for (int i = 0; i < 300 && !saw_extension; ++i) {
    RecordingTarget recording(*base);
    ShrinkState state;
    const StepResult step = shrink_rank_step(x, lf, recording, cfg, src, &state);
    if (state.basis.num_columns() == 1) {
      saw_extension = true;
      const Vector col = state.basis.columns()[0];
      // The extension happened at the rejection whose sd was left unchanged.
      int ext = -1;
      for (std::size_t k = 1; k < state.crumb_sds.size(); ++k)
        if (state.crumb_sds[k] == state.crumb_sds[k - 1]) ext = static_cast<int>(k);
      REQUIRE(ext >= 1);
      REQUIRE(state.crumb_offsets.size() == recording.eval_points.size());
      for (std::size_t k = ext; k < state.crumb_offsets.size(); ++k) {
        CHECK(std::abs(col.dot(state.crumb_offsets[k])) <= 1e-10);
        const Vector offset = recording.eval_points[k] - state.x0;
        CHECK(std::abs(col.dot(offset)) <= 1e-10);
      }
    }
    x = step.x;
    lf = step.log_density;
  }
  CHECK(saw_extension);
}

TEST_CASE("errors: bad current state and crumb exhaustion") {
  const auto gamma = make_gamma_product(2);
  ShrinkConfig cfg;
  Mt19937Source src(1);
  Vector oos(2);
  oos << -1.0, 1.0;
  CHECK_THROWS_AS(
      shrink_rank_step(oos, gamma->log_density(oos), *gamma, cfg, src),
      std::invalid_argument);

  cfg.sigma_c = 1e6;
  cfg.max_crumbs = 3;
  Vector x = gamma->default_init();
  CHECK_THROWS_WITH_AS(
      shrink_rank_step(x, gamma->log_density(x), *gamma, cfg, src),
      doctest::Contains("gamma-product"), MaxCrumbsError);
}

TEST_CASE("determinism: same seed, same transition") {
  const auto target = make_gamma_product(2);
  ShrinkConfig cfg;
  const Vector x = target->default_init();
  const double lf = target->log_density(x);
  Mt19937Source a(77), b(77);
  const StepResult ra = shrink_rank_step(x, lf, *target, cfg, a);
  const StepResult rb = shrink_rank_step(x, lf, *target, cfg, b);
  CHECK((ra.x - rb.x).norm() == 0.0);
  CHECK(ra.stats.n_density_evals == rb.stats.n_density_evals);
}

TEST_CASE("zero-density factor cuts crumbs on bounded support") {
  const auto target = make_gamma_product(2);
  const auto mean_crumbs = [&](double factor) {
    ShrinkConfig cfg;
    cfg.sigma_c = 100.0;
    cfg.zero_density_factor = factor;
    cfg.debug_checks = true;
    Mt19937Source src(5);
    Vector x = target->default_init();
    double lf = target->log_density(x);
    long total = 0;
    const int steps = 500;
    for (int i = 0; i < steps; ++i) {
      const StepResult step = shrink_rank_step(x, lf, *target, cfg, src);
      total += step.stats.n_crumbs;
      x = step.x;
      lf = step.log_density;
    }
    return static_cast<double>(total) / steps;
  };
  const double with_factor = mean_crumbs(0.1);
  const double without = mean_crumbs(1.0);
  CHECK(with_factor < 0.8 * without);
}

TEST_CASE("gamma product long-run moments") {
  const auto target = make_gamma_product(2);
  SamplerSpec spec = SamplerSpec::with_tuning(SamplerKind::ShrinkRank, 1.0);
  Mt19937Source src(12345);
  const Chain chain = run_chain(spec, *target, target->default_init(), 30000, src);
  for (int j = 0; j < 2; ++j) {
    const auto series = chain.states.col(j);
    const double mean = series.mean();
    const double var = (series.array() - mean).square().sum() / (series.size() - 1);
    // Gamma(2,1): mean 2, variance 2. Generous Monte Carlo margins for a
    // correlated chain of this length.
    CHECK(mean == doctest::Approx(2.0).epsilon(0.06));
    CHECK(var == doctest::Approx(2.0).epsilon(0.15));
  }
}

TEST_CASE("run_chain: empty, deterministic, annotated errors") {
  const auto target = make_gamma_product(2);
  SamplerSpec spec = SamplerSpec::with_tuning(SamplerKind::ShrinkRank, 1.0);
  Mt19937Source src(3);
  const Chain empty = run_chain(spec, *target, target->default_init(), 0, src);
  CHECK(empty.size() == 0);
  CHECK(empty.total_density_evals() == 0);

  Mt19937Source a(9), b(9);
  const Chain ca = run_chain(spec, *target, target->default_init(), 500, a);
  const Chain cb = run_chain(spec, *target, target->default_init(), 500, b);
  CHECK((ca.states - cb.states).norm() == 0.0);
  CHECK(ca.cum_density_evals == cb.cum_density_evals);

  SamplerSpec doomed = SamplerSpec::with_tuning(SamplerKind::ShrinkRank, 1e9);
  doomed.shrink.max_crumbs = 2;
  Mt19937Source c(4);
  CHECK_THROWS_WITH_AS(
      run_chain(doomed, *target, target->default_init(), 10, c),
      doctest::Contains("iteration"), MaxCrumbsError);
}

TEST_CASE("config validation") {
  ShrinkConfig cfg;
  cfg.theta = 1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ShrinkConfig{};
  cfg.sigma_c = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = ShrinkConfig{};
  cfg.zero_density_factor = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}  // TEST_SUITE

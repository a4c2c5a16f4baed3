#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shrinkrank/diagnostics.hpp"
#include "shrinkrank/sampler.hpp"
#include "shrinkrank/targets.hpp"

namespace shrinkrank {

// A target identifier plus its options, spelled `id:key=value:key=value`,
// e.g. `gamma-product:dim=20` or `logistic:data=data/credit.csv`.
struct TargetSpec {
  std::string id;
  std::map<std::string, std::string> options;

  std::string label() const;  // canonical spelling
  static TargetSpec parse(const std::string& text);
};

// Instantiates a target from its spec. Known ids: correlated-gaussian
// (dim, rho), gamma-product (dim), eight-schools (config), logistic (data),
// gp-logged / gp-unlogged (data).
TargetPtr build_target(const TargetSpec& spec);

// A tuning-parameter grid benchmark: every (target, sampler, tuning value)
// combination is one independent cell seeded by (seed, cell index).
struct BenchmarkPlan {
  std::vector<TargetSpec> targets;
  std::vector<SamplerKind> samplers;
  std::vector<double> shrink_rank_grid;
  std::vector<double> adaptive_metropolis_grid;
  long n_iterations = 50000;
  std::uint64_t seed = 0;
  double burn_in_fraction = 0.1;
  std::string output = "benchmark_results.csv";

  const std::vector<double>& grid_for(SamplerKind kind) const;
  long n_cells() const;
  void validate() const;

  static BenchmarkPlan load(const std::string& path);
};

struct CellResult {
  std::string target;
  std::string sampler;
  double tuning = 0.0;
  std::string status;   // ok | inestimable | max-crumbs | error
  std::string message;  // empty when ok
  std::optional<EfficiencyReport> report;
  long total_grad_evals = 0;
  double mean_crumbs_per_step = 0.0;
};

// Runs every cell of the plan (optionally on `jobs` worker threads; results
// are identical regardless of parallelism). A failing cell is recorded in its
// status column and never aborts the grid.
std::vector<CellResult> run_benchmark(const BenchmarkPlan& plan, int jobs = 1);

void write_results_csv(const std::string& path, const std::vector<CellResult>& cells);

}  // namespace shrinkrank

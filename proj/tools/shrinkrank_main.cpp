// Command-line harness: single chains, tuning-grid benchmarks, and
// diagnostics over saved chains, all emitting reproducible CSV.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shrinkrank/bench.hpp"
#include "shrinkrank/chain_csv.hpp"
#include "shrinkrank/config_file.hpp"
#include "shrinkrank/diagnostics.hpp"

namespace fs = std::filesystem;
using namespace shrinkrank;

namespace {

// Default output directory: $SHRINKRANK_OUT_DIR, falling back to the cwd.
fs::path out_dir() {
  const char* env = std::getenv("SHRINKRANK_OUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

fs::path resolve_output(const std::string& name) {
  fs::path p(name);
  return p.is_absolute() ? p : out_dir() / p;
}

struct TargetFlags {
  std::string id;
  int dim = -1;
  double rho = std::numeric_limits<double>::quiet_NaN();
  std::string data;
  std::string config;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--target", id,
                    "target id: correlated-gaussian, gamma-product, eight-schools, "
                    "logistic, gp-logged, gp-unlogged")
        ->required();
    cmd->add_option("--dim", dim, "dimension (correlated-gaussian, gamma-product)");
    cmd->add_option("--rho", rho, "equicorrelation (correlated-gaussian)");
    cmd->add_option("--data", data, "CSV data file (logistic, gp-*)");
    cmd->add_option("--config", config, "key-value config file (eight-schools)");
  }

  TargetSpec to_spec() const {
    TargetSpec spec;
    spec.id = id;
    if (dim >= 0) spec.options["dim"] = std::to_string(dim);
    if (!std::isnan(rho)) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", rho);
      spec.options["rho"] = buf;
    }
    if (!data.empty()) spec.options["data"] = data;
    if (!config.empty()) spec.options["config"] = config;
    return spec;
  }
};

void print_report_csv(std::FILE* f, const EfficiencyReport& r) {
  std::fprintf(f,
               "monitored,tau,tau_ci_lo,tau_ci_hi,ess,evals_per_indep_obs,"
               "evals_ci_lo,evals_ci_hi,n_iterations,total_density_evals\n");
  std::fprintf(f, "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%ld,%ld\n",
               r.monitored_function.c_str(), r.tau, r.tau_ci_lo, r.tau_ci_hi, r.ess,
               r.evals_per_indep_obs, r.evals_ci_lo, r.evals_ci_hi, r.n_iterations,
               r.total_density_evals);
}

int cmd_sample(const TargetFlags& tf, const std::string& sampler, double sigma_c,
               double am_sd, double theta, long n, std::uint64_t seed,
               std::string out_path) {
  const TargetSpec tspec = tf.to_spec();
  const TargetPtr target = build_target(tspec);
  const SamplerKind kind = parse_sampler_id(sampler);
  SamplerSpec spec = SamplerSpec::with_tuning(
      kind, kind == SamplerKind::ShrinkRank ? sigma_c : am_sd);
  spec.shrink.theta = theta;

  Mt19937Source src(seed);
  const Chain chain = run_chain(spec, *target, target->default_init(), n, src);

  if (out_path.empty()) {
    std::string stem = tspec.label() + "_" + sampler_id(kind) + "_" +
                       std::to_string(seed) + ".csv";
    for (char& c : stem)
      if (c == ':' || c == '=' || c == '/') c = '-';
    out_path = (out_dir() / stem).string();
  } else {
    out_path = resolve_output(out_path).string();
  }

  ChainCsvMeta meta{tspec.label(), sampler_id(kind), spec.tuning(), seed};
  write_chain_csv(out_path, chain, meta);
  std::printf("wrote %s\n", out_path.c_str());
  std::printf("iterations=%ld density_evals=%ld grad_evals=%ld\n", chain.size(),
              chain.total_density_evals(), chain.total_grad_evals());
  return 0;
}

int cmd_benchmark(const std::string& plan_path, const std::string& out_override,
                  int jobs) {
  const BenchmarkPlan plan = BenchmarkPlan::load(plan_path);
  const auto results = run_benchmark(plan, jobs);
  const std::string out_path =
      resolve_output(out_override.empty() ? plan.output : out_override).string();
  write_results_csv(out_path, results);
  long ok = 0;
  for (const auto& cell : results)
    if (cell.status == "ok") ++ok;
  std::printf("wrote %s (%zu cells, %ld ok)\n", out_path.c_str(), results.size(), ok);
  return 0;
}

int cmd_diagnose(const std::string& chain_path, const std::string& monitored,
                 double burn_in, const TargetFlags& tf, const std::string& out_path) {
  ChainCsvMeta meta;
  Chain chain = read_chain_csv(chain_path, &meta);

  Monitored mon = Monitored::coord(0);
  bool worst = false;
  if (monitored == "worst") {
    worst = true;
  } else if (monitored == "log-density") {
    mon = Monitored::log_density();
    // The CSV stores no log densities; recompute them from the target.
    TargetSpec tspec;
    if (!tf.id.empty())
      tspec = tf.to_spec();
    else if (!meta.target.empty())
      tspec = TargetSpec::parse(meta.target);
    else
      throw std::runtime_error(
          "--monitored log-density needs --target flags (chain file has no "
          "provenance comment)");
    const TargetPtr target = build_target(tspec);
    if (target->dim() != chain.dim())
      throw std::runtime_error("target dim does not match chain dim");
    for (long i = 0; i < chain.size(); ++i)
      chain.log_densities[i] = target->log_density(chain.states.row(i).transpose());
  } else {
    mon = Monitored::coord(static_cast<int>(parse_int(monitored, "--monitored")));
  }

  const EfficiencyReport report = worst
                                      ? worst_coordinate_report(chain, burn_in)
                                      : efficiency_report(chain, mon, burn_in);
  if (out_path.empty()) {
    print_report_csv(stdout, report);
  } else {
    std::FILE* f = std::fopen(resolve_output(out_path).string().c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open for writing: " + out_path);
    print_report_csv(f, report);
    std::fclose(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shrinkrank: shrinking-rank slice sampling benchmark toolkit"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "run one chain and write it as CSV");
  TargetFlags sample_target;
  sample_target.add_to(sample);
  std::string sampler = "shrink-rank";
  double sigma_c = 1.0, am_sd = 0.1, theta = 0.95;
  long n = 10000;
  std::uint64_t seed = 0;
  std::string sample_out;
  sample->add_option("--sampler", sampler, "shrink-rank or adaptive-metropolis");
  sample->add_option("--sigma-c", sigma_c, "crumb standard deviation (shrink-rank)");
  sample->add_option("--am-sd", am_sd,
                     "initial proposal sd times sqrt(dim) (adaptive-metropolis)");
  sample->add_option("--theta", theta, "crumb shrink factor (shrink-rank)");
  sample->add_option("--n", n, "number of iterations")->required();
  sample->add_option("--seed", seed, "random seed");
  sample->add_option("--out", sample_out, "output CSV path");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "run a tuning-grid benchmark plan");
  std::string plan_path, bench_out;
  int jobs = 1;
  bench->add_option("--plan", plan_path, "plan file (key = value format)")->required();
  bench->add_option("--out", bench_out, "override the plan's output path");
  bench->add_option("--jobs", jobs, "worker threads (results are identical)");

  // diagnose
  auto* diag = app.add_subcommand("diagnose", "efficiency report for a saved chain");
  std::string chain_path, monitored = "worst", diag_out;
  double burn_in = 0.1;
  TargetFlags diag_target;
  diag->add_option("--chain", chain_path, "chain CSV from `sample`")->required();
  diag->add_option("--monitored", monitored,
                   "worst, log-density, or a coordinate index");
  diag->add_option("--burn-in", burn_in, "burn-in fraction to discard");
  diag->add_option("--out", diag_out, "write the report here instead of stdout");
  diag->add_option("--target", diag_target.id, "target id (for --monitored log-density)");
  diag->add_option("--dim", diag_target.dim, "target dim");
  diag->add_option("--rho", diag_target.rho, "target rho");
  diag->add_option("--data", diag_target.data, "target data CSV");
  diag->add_option("--config", diag_target.config, "target config file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed())
      return cmd_sample(sample_target, sampler, sigma_c, am_sd, theta, n, seed,
                        sample_out);
    if (bench->parsed()) return cmd_benchmark(plan_path, bench_out, jobs);
    if (diag->parsed())
      return cmd_diagnose(chain_path, monitored, burn_in, diag_target, diag_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

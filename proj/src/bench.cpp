#include "shrinkrank/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "shrinkrank/config_file.hpp"

namespace shrinkrank {

// ---------------------------------------------------------------------------
// Target registry

std::string TargetSpec::label() const {
  std::string out = id;
  for (const auto& [k, v] : options) out += ":" + k + "=" + v;
  return out;
}

TargetSpec TargetSpec::parse(const std::string& text) {
  TargetSpec spec;
  std::istringstream in(text);
  std::string field;
  bool first = true;
  while (std::getline(in, field, ':')) {
    if (first) {
      spec.id = field;
      first = false;
      continue;
    }
    const auto eq = field.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::invalid_argument("target spec `" + text +
                                  "`: options must look like key=value");
    spec.options[field.substr(0, eq)] = field.substr(eq + 1);
  }
  if (spec.id.empty())
    throw std::invalid_argument("target spec is empty");
  return spec;
}

namespace {

class OptionReader {
 public:
  OptionReader(const TargetSpec& spec) : spec_(spec) {}

  std::string require(const std::string& key) const {
    const auto it = spec_.options.find(key);
    if (it == spec_.options.end())
      throw std::invalid_argument("target `" + spec_.id + "` needs option " + key +
                                  " (spec was `" + spec_.label() + "`)");
    used_.push_back(key);
    return it->second;
  }

  std::string get_or(const std::string& key, const std::string& fallback) const {
    const auto it = spec_.options.find(key);
    used_.push_back(key);
    return it == spec_.options.end() ? fallback : it->second;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : spec_.options) {
      bool known = false;
      for (const auto& u : used_)
        if (u == k) known = true;
      if (!known)
        throw std::invalid_argument("target `" + spec_.id + "`: unknown option " + k);
    }
  }

 private:
  const TargetSpec& spec_;
  mutable std::vector<std::string> used_;
};

}  // namespace

TargetPtr build_target(const TargetSpec& spec) {
  OptionReader opts(spec);
  TargetPtr target;
  if (spec.id == "correlated-gaussian") {
    const int dim = static_cast<int>(parse_int(opts.get_or("dim", "4"), "dim"));
    const double rho = parse_real(opts.get_or("rho", "0.999"), "rho");
    target = make_correlated_gaussian(dim, rho);
  } else if (spec.id == "gamma-product") {
    const int dim = static_cast<int>(parse_int(opts.get_or("dim", "2"), "dim"));
    target = make_gamma_product(dim);
  } else if (spec.id == "eight-schools") {
    target = make_eight_schools(load_eight_schools_config(opts.require("config")));
  } else if (spec.id == "logistic") {
    target = make_logistic_regression(load_regression_csv(opts.require("data")));
  } else if (spec.id == "gp-logged" || spec.id == "gp-unlogged") {
    const GpData data = load_gp_csv(opts.require("data"));
    target = make_gp_regression(data.inputs, data.targets, spec.id == "gp-logged");
  } else {
    throw std::invalid_argument(
        "unknown target `" + spec.id +
        "` (known: correlated-gaussian, gamma-product, eight-schools, logistic, "
        "gp-logged, gp-unlogged)");
  }
  opts.reject_unknown();
  return target;
}

// ---------------------------------------------------------------------------
// Plan

const std::vector<double>& BenchmarkPlan::grid_for(SamplerKind kind) const {
  return kind == SamplerKind::ShrinkRank ? shrink_rank_grid : adaptive_metropolis_grid;
}

long BenchmarkPlan::n_cells() const {
  long cells = 0;
  for (const auto kind : samplers)
    cells += static_cast<long>(targets.size()) * static_cast<long>(grid_for(kind).size());
  return cells;
}

void BenchmarkPlan::validate() const {
  if (targets.empty()) throw std::invalid_argument("plan: no targets");
  if (samplers.empty()) throw std::invalid_argument("plan: no samplers");
  for (const auto kind : samplers)
    if (grid_for(kind).empty())
      throw std::invalid_argument("plan: empty tuning grid for " + sampler_id(kind));
  for (const auto kind : samplers)
    for (const double t : grid_for(kind))
      if (!(t > 0.0))
        throw std::invalid_argument("plan: tuning values must be > 0");
  if (n_iterations < 1000)
    throw std::invalid_argument("plan: benchmark mode needs n_iterations >= 1000");
  if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0))
    throw std::invalid_argument("plan: burn_in_fraction must be in [0, 1)");
  if (output.empty()) throw std::invalid_argument("plan: empty output path");
}

BenchmarkPlan BenchmarkPlan::load(const std::string& path) {
  const auto kv = KeyValueFile::parse_file(path);
  BenchmarkPlan plan;
  for (const auto& t : kv.get_strings("targets"))
    plan.targets.push_back(TargetSpec::parse(t));
  for (const auto& s : kv.get_strings("samplers"))
    plan.samplers.push_back(parse_sampler_id(s));
  const std::vector<double> default_grid = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  plan.shrink_rank_grid =
      kv.has("shrink_rank_grid") ? kv.get_reals("shrink_rank_grid") : default_grid;
  plan.adaptive_metropolis_grid = kv.has("adaptive_metropolis_grid")
                                      ? kv.get_reals("adaptive_metropolis_grid")
                                      : default_grid;
  plan.n_iterations = kv.get_int_or("n_iterations", plan.n_iterations);
  plan.seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 0));
  plan.burn_in_fraction = kv.get_real_or("burn_in_fraction", plan.burn_in_fraction);
  plan.output = kv.get_string_or("output", plan.output);
  plan.validate();
  return plan;
}

// ---------------------------------------------------------------------------
// Grid runner

namespace {

struct Cell {
  TargetSpec target;
  SamplerKind sampler;
  double tuning;
  std::uint64_t index;
};

CellResult run_cell(const Cell& cell, const BenchmarkPlan& plan) {
  CellResult result;
  result.target = cell.target.label();
  result.sampler = sampler_id(cell.sampler);
  result.tuning = cell.tuning;
  try {
    const TargetPtr target = build_target(cell.target);
    const SamplerSpec spec = SamplerSpec::with_tuning(cell.sampler, cell.tuning);
    Mt19937Source src(derive_seed(plan.seed, cell.index));
    const Chain chain =
        run_chain(spec, *target, target->default_init(), plan.n_iterations, src);
    result.total_grad_evals = chain.total_grad_evals();
    long total_crumbs = 0;
    for (const long c : chain.crumbs) total_crumbs += c;
    result.mean_crumbs_per_step =
        static_cast<double>(total_crumbs) / static_cast<double>(chain.size());
    result.report = worst_coordinate_report(chain, plan.burn_in_fraction);
    result.status = "ok";
  } catch (const MaxCrumbsError& e) {
    result.status = "max-crumbs";
    result.message = e.what();
  } catch (const InestimableError& e) {
    result.status = "inestimable";
    result.message = e.what();
  } catch (const std::exception& e) {
    result.status = "error";
    result.message = e.what();
  }
  return result;
}

}  // namespace

std::vector<CellResult> run_benchmark(const BenchmarkPlan& plan, int jobs) {
  plan.validate();
  std::vector<Cell> cells;
  std::uint64_t index = 0;
  for (const auto& target : plan.targets)
    for (const auto sampler : plan.samplers)
      for (const double tuning : plan.grid_for(sampler))
        cells.push_back(Cell{target, sampler, tuning, index++});

  std::vector<CellResult> results(cells.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) results[i] = run_cell(cells[i], plan);
    return results;
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      results[i] = run_cell(cells[i], plan);
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min<int>(jobs, static_cast<int>(cells.size()));
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return results;
}

namespace {

std::string sanitize_field(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return out;
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_results_csv(const std::string& path, const std::vector<CellResult>& cells) {
  std::unique_ptr<std::FILE, FileCloser> out(std::fopen(path.c_str(), "wb"));
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::FILE* f = out.get();
  std::fprintf(f,
               "target,sampler,tuning,status,evals_per_indep_obs,evals_ci_lo,"
               "evals_ci_hi,tau,tau_ci_lo,tau_ci_hi,ess,n_iterations,"
               "total_density_evals,total_grad_evals,mean_crumbs_per_step,"
               "monitored,message\n");
  for (const auto& cell : cells) {
    std::fprintf(f, "%s,%s,%.17g,%s,", sanitize_field(cell.target).c_str(),
                 sanitize_field(cell.sampler).c_str(), cell.tuning,
                 cell.status.c_str());
    if (cell.report) {
      const auto& r = *cell.report;
      std::fprintf(f, "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%ld,%ld",
                   r.evals_per_indep_obs, r.evals_ci_lo, r.evals_ci_hi, r.tau,
                   r.tau_ci_lo, r.tau_ci_hi, r.ess, r.n_iterations,
                   r.total_density_evals);
    } else {
      std::fprintf(f, ",,,,,,,,");
    }
    std::fprintf(f, ",%ld,%.6g,%s,%s\n", cell.total_grad_evals,
                 cell.mean_crumbs_per_step,
                 cell.report ? cell.report->monitored_function.c_str() : "",
                 sanitize_field(cell.message).c_str());
  }
  if (std::ferror(f)) throw std::runtime_error("write failed: " + path);
}

}  // namespace shrinkrank

#include "shrinkrank/chain_csv.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace shrinkrank {

namespace {

std::string sanitize(const std::string& s) {
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

void write_chain_csv(const std::string& path, const Chain& chain,
                     const ChainCsvMeta& meta) {
  std::unique_ptr<std::FILE, FileCloser> out(std::fopen(path.c_str(), "wb"));
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  std::FILE* f = out.get();

  std::fprintf(f, "# target=%s sampler=%s tuning=%.17g seed=%" PRIu64 "\n",
               sanitize(meta.target).c_str(), sanitize(meta.sampler).c_str(),
               meta.tuning, meta.seed);
  std::fprintf(f, "iteration");
  for (int j = 0; j < chain.dim(); ++j) std::fprintf(f, ",x_%d", j);
  std::fprintf(f, ",cum_density_evals,cum_grad_evals,n_crumbs\n");

  for (long i = 0; i < chain.size(); ++i) {
    std::fprintf(f, "%ld", i);
    for (int j = 0; j < chain.dim(); ++j)
      std::fprintf(f, ",%.17g", chain.states(i, j));
    std::fprintf(f, ",%ld,%ld,%ld\n", chain.cum_density_evals[i],
                 chain.cum_grad_evals[i], chain.crumbs[i]);
  }
  if (std::ferror(f)) throw std::runtime_error("write failed: " + path);
}

Chain read_chain_csv(const std::string& path, ChainCsvMeta* meta) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file: " + path);
  std::string line;

  // Optional provenance comment.
  std::streampos after_comment = in.tellg();
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
  if (!line.empty() && line[0] == '#') {
    if (meta) {
      std::istringstream toks(line.substr(1));
      std::string tok;
      while (toks >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "target") meta->target = val;
        else if (key == "sampler") meta->sampler = val;
        else if (key == "tuning") meta->tuning = std::strtod(val.c_str(), nullptr);
        else if (key == "seed") meta->seed = std::strtoull(val.c_str(), nullptr, 10);
      }
    }
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header row");
  } else {
    (void)after_comment;
  }

  // Header: iteration, x_0.., cum_density_evals, cum_grad_evals, n_crumbs.
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  if (header.size() < 5 || header.front() != "iteration" ||
      header[header.size() - 3] != "cum_density_evals" ||
      header[header.size() - 2] != "cum_grad_evals" ||
      header.back() != "n_crumbs")
    throw std::runtime_error(path + ": not a chain CSV (unexpected header)");
  const int p = static_cast<int>(header.size()) - 4;

  std::vector<std::vector<double>> states;
  std::vector<long> cum_density, cum_grad, crumbs;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (static_cast<int>(cells.size()) != p + 4)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": truncated or ragged row");
    std::vector<double> row(p);
    for (int j = 0; j < p; ++j) {
      errno = 0;
      char* end = nullptr;
      row[j] = std::strtod(cells[j + 1].c_str(), &end);
      if (errno != 0 || end == cells[j + 1].c_str() || *end != '\0')
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad state value: " + cells[j + 1]);
    }
    states.push_back(std::move(row));
    cum_density.push_back(std::strtol(cells[p + 1].c_str(), nullptr, 10));
    cum_grad.push_back(std::strtol(cells[p + 2].c_str(), nullptr, 10));
    crumbs.push_back(std::strtol(cells[p + 3].c_str(), nullptr, 10));
  }

  Chain chain;
  const long n = static_cast<long>(states.size());
  chain.states.resize(n, p);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) chain.states(i, j) = states[i][j];
  chain.log_densities =
      Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  chain.cum_density_evals = std::move(cum_density);
  chain.cum_grad_evals = std::move(cum_grad);
  chain.crumbs = std::move(crumbs);
  chain.accepted.assign(n, 1);
  return chain;
}

}  // namespace shrinkrank

#pragma once

#include <cstdint>
#include <string>

#include "shrinkrank/sampler.hpp"

namespace shrinkrank {

// Provenance recorded as a `#` comment line ahead of the header so a chain
// file is self-describing; readers that only want the columns can skip it.
struct ChainCsvMeta {
  std::string target;
  std::string sampler;
  double tuning = 0.0;
  std::uint64_t seed = 0;
};

// Columns: iteration, x_0..x_{p-1}, cum_density_evals, cum_grad_evals,
// n_crumbs. States are written with 17 significant digits so reading the file
// back reproduces them bit-exactly. UTF-8, LF line endings.
void write_chain_csv(const std::string& path, const Chain& chain,
                     const ChainCsvMeta& meta);

// Reads a chain written by write_chain_csv. The log-density series is not
// stored in the file, so the returned chain has none; `meta`, when non-null,
// receives the provenance comment if present.
Chain read_chain_csv(const std::string& path, ChainCsvMeta* meta = nullptr);

}  // namespace shrinkrank

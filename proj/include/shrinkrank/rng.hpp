#pragma once

#include <cstdint>
#include <random>

#include "shrinkrank/types.hpp"

namespace shrinkrank {

// Stream of the three primitive draws the samplers consume. Virtual so a
// test can wrap a source and transform its output (e.g. rotate every normal
// vector) while leaving the underlying stream untouched.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  // Uniform variate in [0, 1).
  virtual double uniform() = 0;
  // Vector of p independent N(0,1) variates, p >= 1.
  virtual Vector std_normal_vec(int p) = 0;
  // Exp(1) variate, >= 0.
  virtual double unit_exponential() = 0;
};

// Default source. mt19937_64 is fully specified by the standard, and the
// output transforms below are fixed, so a seed pins the whole stream
// bit-exactly across platforms and releases:
//
//   uniform u       (x >> 11) * 2^-53
//   normal          Box-Muller pair from two uniforms, spare value cached
//   exponential     -log1p(-u)
class Mt19937Source final : public RandomSource {
 public:
  explicit Mt19937Source(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  double uniform() override;
  Vector std_normal_vec(int p) override;
  double unit_exponential() override;

  std::uint64_t seed() const { return seed_; }

 private:
  double next_normal();

  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Seed for chain (or grid cell) `index` of a run with master seed `master`:
// the splitmix64 finalizer applied to master + (index+1) * 0x9e3779b97f4a7c15.
// Documented so that parallel runs stay reproducible from one master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace shrinkrank

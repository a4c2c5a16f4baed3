#include "shrinkrank/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace shrinkrank {

double Mt19937Source::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Mt19937Source::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted into (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

Vector Mt19937Source::std_normal_vec(int p) {
  if (p < 1) throw std::invalid_argument("std_normal_vec: p must be >= 1");
  Vector z(p);
  for (int i = 0; i < p; ++i) z[i] = next_normal();
  return z;
}

double Mt19937Source::unit_exponential() {
  return -std::log1p(-uniform());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace shrinkrank

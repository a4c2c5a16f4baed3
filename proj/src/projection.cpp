#include "shrinkrank/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace shrinkrank {

OrthoBasis::OrthoBasis(int dim_ambient) : dim_(dim_ambient) {
  if (dim_ambient < 1)
    throw std::invalid_argument("OrthoBasis: ambient dimension must be >= 1");
}

Vector OrthoBasis::project(const Vector& v) const {
  if (v.size() != dim_)
    throw std::invalid_argument(
        "OrthoBasis::project: vector has length " + std::to_string(v.size()) +
        ", expected " + std::to_string(dim_));
  if (cols_.empty()) return v;
  Vector w = v;
  for (const Vector& c : cols_) w -= c.dot(v) * c;
  return w;
}

bool OrthoBasis::angle_accepts(const Vector& g, double cos_threshold) const {
  if (g.size() != dim_)
    throw std::invalid_argument("OrthoBasis::angle_accepts: dimension mismatch");
  if (!g.allFinite()) return false;
  if (num_columns() >= dim_ - 1) return false;
  const double g_norm = g.norm();
  if (g_norm == 0.0) return false;
  const Vector g_star = project(g);
  const double g_star_norm = g_star.norm();
  if (g_star_norm == 0.0) return false;
  return g_star.dot(g) > cos_threshold * g_star_norm * g_norm;
}

void OrthoBasis::extend(const Vector& g_star) {
  if (g_star.size() != dim_)
    throw std::invalid_argument("OrthoBasis::extend: dimension mismatch");
  if (num_columns() + 1 >= dim_)
    throw std::invalid_argument(
        "OrthoBasis::extend: appending a column would leave an empty nullspace "
        "(basis already has " + std::to_string(num_columns()) + " columns in R^" +
        std::to_string(dim_) + ")");
  const double input_norm = g_star.norm();
  if (!(input_norm > 0.0) || !g_star.allFinite())
    throw std::invalid_argument("OrthoBasis::extend: column must be nonzero and finite");
  // One Gram-Schmidt pass against the existing columns before normalizing.
  Vector w = g_star;
  for (const Vector& c : cols_) w -= c.dot(g_star) * c;
  const double w_norm = w.norm();
  if (!(w_norm > 1e-12 * input_norm))
    throw std::invalid_argument(
        "OrthoBasis::extend: column lies in the span of the existing basis");
  cols_.push_back(w / w_norm);
}

double OrthoBasis::orthonormality_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < cols_.size(); ++i) {
    worst = std::max(worst, std::abs(cols_[i].norm() - 1.0));
    for (std::size_t j = i + 1; j < cols_.size(); ++j)
      worst = std::max(worst, std::abs(cols_[i].dot(cols_[j])));
  }
  return worst;
}

}  // namespace shrinkrank

#pragma once

#include <vector>

#include "shrinkrank/types.hpp"

namespace shrinkrank {

// Orthonormal columns spanning the directions excluded from crumb and
// proposal draws; the nullspace of the columns is the subspace the sampler
// still explores. Columns stay unit length and mutually orthogonal to 1e-10,
// and there are never more than dim_ambient - 1 of them, so the nullspace
// never collapses to a point.
class OrthoBasis {
 public:
  explicit OrthoBasis(int dim_ambient);

  int dim_ambient() const { return dim_; }
  int num_columns() const { return static_cast<int>(cols_.size()); }
  bool empty() const { return cols_.empty(); }
  const std::vector<Vector>& columns() const { return cols_; }

  // v - J J^T v, or v itself when there are no columns. The result is
  // orthogonal to every column.
  Vector project(const Vector& v) const;

  // Whether the basis should adapt on gradient g: the projection g* of g
  // must be nonzero and satisfy g*.g > cos_threshold * |g*| * |g|, and the
  // basis must have fewer than dim_ambient - 1 columns. Non-finite or zero
  // gradients never adapt.
  bool angle_accepts(const Vector& g, double cos_threshold) const;

  // Append g_star / |g_star| as a new column. g_star is expected to already
  // be (close to) orthogonal to the existing columns; one Gram-Schmidt pass
  // is applied first so repeated extension does not drift. Throws when the
  // column count would reach dim_ambient or the residual is degenerate.
  void extend(const Vector& g_star);

  // Largest deviation from orthonormality over all columns and pairs.
  double orthonormality_defect() const;

 private:
  int dim_;
  std::vector<Vector> cols_;
};

}  // namespace shrinkrank

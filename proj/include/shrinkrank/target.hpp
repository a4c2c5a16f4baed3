#pragma once

#include <memory>
#include <string>

#include "shrinkrank/types.hpp"

namespace shrinkrank {

// A target distribution known up to a constant: log density, its gradient,
// and a documented starting point with finite density. log_density returns
// -infinity outside the support and never throws there; grad_log_density is
// only meaningful where the log density is finite.
class TargetDistribution {
 public:
  virtual ~TargetDistribution() = default;

  virtual int dim() const = 0;
  virtual const std::string& name() const = 0;
  virtual double log_density(const Vector& x) const = 0;
  virtual Vector grad_log_density(const Vector& x) const = 0;
  virtual Vector default_init() const = 0;

 protected:
  void check_dim(const Vector& x) const;
};

using TargetPtr = std::shared_ptr<const TargetDistribution>;

// Central-difference gradient, (f(x + h e_i) - f(x - h e_i)) / 2h per
// coordinate. Independent of grad_log_density, so it serves as the oracle the
// analytic gradients are tested against. Throws if h <= 0 or any stencil
// point falls outside the support.
Vector finite_diff_grad(const TargetDistribution& target, const Vector& x, double h);

}  // namespace shrinkrank

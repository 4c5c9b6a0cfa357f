#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace varch {

/// A differentiable log density over R^dim, the only thing the sampler knows
/// about. Implementations must be safe to call from several threads at once.
class Target {
 public:
  virtual ~Target() = default;

  virtual int dim() const = 0;

  /// Log density and its gradient at u. A return of -infinity marks a
  /// rejected point; the gradient contents are then unspecified.
  virtual double value_and_grad(const Eigen::VectorXd& u, Eigen::VectorXd& grad) const = 0;

  /// Reporting view of a point (constrained parameters for model targets).
  /// Defaults to the identity.
  virtual Eigen::VectorXd constrain(const Eigen::VectorXd& u) const { return u; }

  /// Column names for the constrained view; default p.1..p.dim.
  virtual std::vector<std::string> names() const;
};

}  // namespace varch

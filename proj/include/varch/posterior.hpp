#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varch/model.hpp"
#include "varch/target.hpp"

namespace varch {

/// Joint log posterior of one model variant over one dataset, evaluated on
/// the packed unconstrained vector (see ParameterLayout). Includes the
/// conditional likelihood from t0 onward, all prior densities on constrained
/// values, and the transform log-Jacobians. Construction precomputes the
/// layout and the per-coefficient prior scales; evaluations are pure and may
/// run concurrently.
class PosteriorModel final : public Target {
 public:
  PosteriorModel(ModelSpec spec, Dataset data);

  const ModelSpec& spec() const { return spec_; }
  const Dataset& data() const { return data_; }
  const ParameterLayout& layout() const { return layout_; }

  int dim() const override { return layout_.dim(); }

  /// Non-finite evaluations come back as -infinity (rejection signal), never
  /// NaN. Throws LengthMismatch when u has the wrong length.
  double log_posterior(const Eigen::VectorXd& u) const;
  Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& u) const;

  /// Single-pass value plus gradient; grad is resized as needed. At a
  /// rejected point the value is -infinity and grad is zeroed.
  double value_and_grad(const Eigen::VectorXd& u, Eigen::VectorXd& grad) const override;

  Eigen::VectorXd constrain(const Eigen::VectorXd& u) const override {
    return layout_.constrain(u);
  }
  std::vector<std::string> names() const override { return layout_.names(); }

 private:
  double eval(const Eigen::VectorXd& u, Eigen::VectorXd* grad) const;

  ModelSpec spec_;
  Dataset data_;
  ParameterLayout layout_;
  Eigen::MatrixXd beta_prior_sd_;  // P x S, resolved from roles and site groups
  Eigen::MatrixXd psi_;            // inverse-Wishart scale (VarIw)
  double scale_log_jac_ = 0.0;     // sum of log prior scales (chart Jacobian)
  int t0_ = 1;                     // first likelihood time, 0-based
};

// Free-function forms for one-off evaluations.
double log_posterior(const Eigen::VectorXd& u, const ModelSpec& spec, const Dataset& data);
Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& u, const ModelSpec& spec,
                                   const Dataset& data);

}  // namespace varch

#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "varch/dataset.hpp"
#include "varch/kernel.hpp"

namespace varch {

/// The four mean/variance structures: diagonal autoregression with ARCH
/// variance; full-rank autoregression with a fixed inverse-Wishart covariance;
/// the combination of full-rank mean and ARCH variance; and the integrated
/// form driving differences of the latent residuals.
enum class Variant { Arch, VarIw, Varch, Varich };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct PriorConfig {
  double sd_intercept = 100.0;      // N(0, sd^2) on each intercept
  double sd_beta_wind = 1.0;        // N(0, sd^2) on wind coefficients
  double sd_effect_active = 25.0;   // operation effect at sites of its own group
  double sd_effect_inactive = 0.3;  // operation effect at sites of the other group
  double sd_phi_diag = 0.5;
  double sd_phi_offdiag = 0.1;
  double sd_theta1 = 1.0;           // truncated normal TN_0(0, sd^2)
  double theta2_a = 1.0;
  double theta2_b = 5.0;
  double nu = 14.0;                 // inverse-Wishart degrees of freedom
  Eigen::MatrixXd psi;              // inverse-Wishart scale; empty means identity
  double missing_sd = 50.0;         // TN on [missing_lo, missing_hi]
  double missing_lo = 0.0;
  double missing_hi = 100.0;

  Eigen::MatrixXd psi_or_identity(int dim) const;
  void validate(int num_sites) const;
};

struct ModelSpec {
  Variant variant = Variant::Varch;
  PriorConfig priors;
  std::vector<CovariateRole> covariate_roles = {
      CovariateRole::Dumping, CovariateRole::Dredging, CovariateRole::Wind};
};

/// All model parameters in constrained space. `phi` keeps off-diagonals at
/// exactly zero under the Arch variant; `sigma` is only meaningful for VarIw
/// but `theta1` stays populated everywhere (the simulator draws initial
/// observations from it).
struct ParameterSet {
  Eigen::VectorXd intercept;  // S
  Eigen::MatrixXd beta;       // P x S
  Eigen::MatrixXd phi;        // S x S
  Eigen::VectorXd theta1;     // S, positive
  Eigen::VectorXd theta2;     // S, in (0,1)
  Eigen::MatrixXd sigma;      // S x S SPD (VarIw)
  Eigen::VectorXd y_missing;  // one entry per masked cell, row-major over (t, s)

  /// Throws ConstraintViolation if shapes or constraint membership fail for
  /// the given model shape.
  void validate(const ModelSpec& spec, int num_sites, int num_covariates,
                int missing_count) const;
};

/// First time index (0-based) with a likelihood contribution: the recursion
/// needs one lag, or two for the integrated variant.
int first_likelihood_time(Variant v);

/// Observed matrix with masked entries replaced by the imputation parameters,
/// in row-major mask order.
Eigen::MatrixXd complete_data(const ParameterSet& params, const Dataset& data);

Eigen::VectorXd conditional_mean(const ParameterSet& params, const ModelSpec& spec,
                                 const Eigen::MatrixXd& completed,
                                 const std::vector<Eigen::MatrixXd>& covariates, int t);

SpdMatrix conditional_variance(const ParameterSet& params, const ModelSpec& spec,
                               const Eigen::MatrixXd& completed, int t);

/// Bulk view of the recursion: mean rows M_t for every t in [t0, T) plus the
/// matching diagonal variances (left empty for VarIw, whose covariance is the
/// constant Sigma). Row i corresponds to time t0 + i.
struct ConditionalProfile {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd var;
  int t0 = 0;
};

ConditionalProfile conditional_profile(const ParameterSet& params, const ModelSpec& spec,
                                       const Eigen::MatrixXd& completed,
                                       const std::vector<Eigen::MatrixXd>& covariates);

/// Per-(covariate, site) prior standard deviations for beta: wind uses
/// sd_beta_wind; operation effects use sd_effect_active at sites of the
/// operation's own group and sd_effect_inactive at the other group's sites.
Eigen::MatrixXd beta_prior_sds(const PriorConfig& priors,
                               const std::vector<CovariateRole>& roles,
                               const std::vector<SiteGroup>& groups);

/// Fixed packing of the parameter set into one unconstrained vector:
/// intercept, beta (covariate-major), phi (row-major; diagonal only for
/// Arch), log theta1, logit theta2, sigma Cholesky factor with log diagonal
/// (VarIw only), logit-scaled missing values in row-major mask order.
/// The unbounded blocks (intercept, beta, phi) are stored in scaled units —
/// the prior standard deviation capped at a data-scale constant — so a unit
/// box around the origin in unconstrained space spans plausible values of
/// every coordinate without reaching explosive Phi territory; scales() gives
/// the per-coordinate multipliers back to natural units.
class ParameterLayout {
 public:
  ParameterLayout(const ModelSpec& spec, const Dataset& data);

  int dim() const { return dim_; }
  int num_sites() const { return num_sites_; }
  int num_covariates() const { return num_covariates_; }
  int phi_count() const { return full_phi_ ? num_sites_ * num_sites_ : num_sites_; }
  bool full_phi() const { return full_phi_; }
  bool has_sigma() const { return off_sigma_ >= 0; }
  int missing_count() const { return static_cast<int>(missing_cells_.size()); }
  const std::vector<std::pair<int, int>>& missing_cells() const { return missing_cells_; }

  int off_intercept() const { return 0; }
  int off_beta() const { return off_beta_; }
  int off_phi() const { return off_phi_; }
  int off_theta1() const { return off_theta1_; }
  int off_theta2() const { return off_theta2_; }
  int off_sigma() const { return off_sigma_; }
  int off_missing() const { return off_missing_; }

  /// Natural-units-per-coordinate multipliers (1.0 outside the prior-scaled
  /// unbounded blocks).
  const Eigen::VectorXd& scales() const { return scale_; }

  Eigen::VectorXd pack(const ParameterSet& params) const;
  ParameterSet unpack(const Eigen::VectorXd& u) const;

  /// Constrained view of a packed vector, aligned with names(). Same length
  /// as dim(); sigma coordinates are reported as covariance entries (lower
  /// triangle, row-major).
  Eigen::VectorXd constrain(const Eigen::VectorXd& u) const;
  const std::vector<std::string>& names() const { return names_; }

 private:
  Variant variant_;
  int num_sites_ = 0;
  int num_covariates_ = 0;
  bool full_phi_ = false;
  int off_beta_ = 0, off_phi_ = 0, off_theta1_ = 0, off_theta2_ = 0;
  int off_sigma_ = -1, off_missing_ = 0, dim_ = 0;
  double missing_lo_ = 0.0, missing_hi_ = 0.0;
  Eigen::VectorXd scale_;
  std::vector<std::pair<int, int>> missing_cells_;
  std::vector<std::string> names_;
};

}  // namespace varch

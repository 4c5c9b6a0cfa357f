#include "varch/model.hpp"

#include <algorithm>
#include <cmath>

#include "varch/errors.hpp"
#include "varch/transforms.hpp"

namespace varch {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Arch: return "ARCH";
    case Variant::VarIw: return "VAR_IW";
    case Variant::Varch: return "VARCH";
    case Variant::Varich: return "VARICH";
  }
  return "?";
}

Variant variant_from_name(const std::string& name) {
  if (name == "ARCH") return Variant::Arch;
  if (name == "VAR_IW") return Variant::VarIw;
  if (name == "VARCH") return Variant::Varch;
  if (name == "VARICH") return Variant::Varich;
  fail(ErrorKind::ConfigError,
       "unknown variant '" + name + "' (expected ARCH|VAR_IW|VARCH|VARICH)");
}

Eigen::MatrixXd PriorConfig::psi_or_identity(int dim) const {
  if (psi.size() == 0) return Eigen::MatrixXd::Identity(dim, dim);
  return psi;
}

void PriorConfig::validate(int num_sites) const {
  const double sds[] = {sd_intercept, sd_beta_wind,  sd_effect_active, sd_effect_inactive,
                        sd_phi_diag,  sd_phi_offdiag, sd_theta1,        missing_sd};
  for (double sd : sds) {
    if (!(sd > 0.0)) fail(ErrorKind::ConstraintViolation, "PriorConfig: all sds must be > 0");
  }
  if (!(theta2_a > 0.0) || !(theta2_b > 0.0)) {
    fail(ErrorKind::ConstraintViolation, "PriorConfig: Beta shapes must be > 0");
  }
  if (!(nu > num_sites - 1)) {
    fail(ErrorKind::ConstraintViolation, "PriorConfig: nu must exceed S - 1");
  }
  if (!(missing_lo < missing_hi)) {
    fail(ErrorKind::ConstraintViolation, "PriorConfig: missing-value bounds must satisfy lo < hi");
  }
  if (psi.size() != 0) {
    if (psi.rows() != num_sites || psi.cols() != num_sites) {
      fail(ErrorKind::ConstraintViolation, "PriorConfig: psi must be S x S");
    }
    cholesky(SpdMatrix(psi));  // throws if not SPD
  }
}

void ParameterSet::validate(const ModelSpec& spec, int num_sites, int num_covariates,
                            int mask_count) const {
  const int s_len = num_sites;
  auto check = [](bool ok, const char* what) {
    if (!ok) fail(ErrorKind::ConstraintViolation, std::string("ParameterSet: ") + what);
  };
  check(intercept.size() == s_len, "intercept length != S");
  check(beta.rows() == num_covariates && beta.cols() == s_len, "beta must be P x S");
  check(phi.rows() == s_len && phi.cols() == s_len, "phi must be S x S");
  check(theta1.size() == s_len, "theta1 length != S");
  check(theta2.size() == s_len, "theta2 length != S");
  check((theta1.array() > 0.0).all(), "theta1 must be positive");
  check((theta2.array() > 0.0).all() && (theta2.array() < 1.0).all(), "theta2 must lie in (0,1)");
  if (spec.variant == Variant::Arch) {
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < s_len; ++j) {
        if (i != j) check(phi(i, j) == 0.0, "phi off-diagonals must be zero for ARCH");
      }
    }
  }
  if (spec.variant == Variant::VarIw) {
    check(sigma.rows() == s_len && sigma.cols() == s_len, "sigma must be S x S");
    cholesky(SpdMatrix(sigma));  // SPD required
  }
  check(y_missing.size() == mask_count, "y_missing length != missing-cell count");
  const auto& pr = spec.priors;
  check((y_missing.array() > pr.missing_lo).all() && (y_missing.array() < pr.missing_hi).all(),
        "y_missing outside the truncation interval");
}

int first_likelihood_time(Variant v) { return v == Variant::Varich ? 2 : 1; }

Eigen::MatrixXd complete_data(const ParameterSet& params, const Dataset& data) {
  const int t_len = data.num_times();
  const int s_len = data.num_sites();
  if (params.y_missing.size() != data.missing_count()) {
    fail(ErrorKind::LengthMismatch, "complete_data: y_missing length " +
                                        std::to_string(params.y_missing.size()) +
                                        " != mask count " +
                                        std::to_string(data.missing_count()));
  }
  Eigen::MatrixXd completed = data.y;
  int k = 0;
  for (int t = 0; t < t_len; ++t) {
    for (int s = 0; s < s_len; ++s) {
      if (data.missing(t, s)) completed(t, s) = params.y_missing[k++];
    }
  }
  return completed;
}

namespace {

Eigen::VectorXd covariate_effect(const Eigen::MatrixXd& beta,
                                 const std::vector<Eigen::MatrixXd>& covariates, int t) {
  Eigen::VectorXd xb = Eigen::VectorXd::Zero(beta.cols());
  for (int j = 0; j < static_cast<int>(covariates.size()); ++j) {
    xb.array() += covariates[j].row(t).transpose().array() * beta.row(j).transpose().array();
  }
  return xb;
}

}  // namespace

Eigen::VectorXd conditional_mean(const ParameterSet& params, const ModelSpec& spec,
                                 const Eigen::MatrixXd& completed,
                                 const std::vector<Eigen::MatrixXd>& covariates, int t) {
  const int t_len = static_cast<int>(completed.rows());
  const int t0 = first_likelihood_time(spec.variant);
  if (t < t0 || t >= t_len) {
    fail(ErrorKind::TimeIndexOutOfRange,
         "conditional_mean: t = " + std::to_string(t) + " outside [" + std::to_string(t0) +
             ", " + std::to_string(t_len) + ")");
  }
  auto residual = [&](int k) -> Eigen::VectorXd {
    return completed.row(k).transpose() - params.intercept - covariate_effect(params.beta, covariates, k);
  };
  Eigen::VectorXd mean = params.intercept + covariate_effect(params.beta, covariates, t);
  if (spec.variant == Variant::Varich) {
    const Eigen::VectorXd r1 = residual(t - 1);
    const Eigen::VectorXd r2 = residual(t - 2);
    mean += r1 + params.phi * (r1 - r2);
  } else {
    mean += params.phi * residual(t - 1);
  }
  return mean;
}

SpdMatrix conditional_variance(const ParameterSet& params, const ModelSpec& spec,
                               const Eigen::MatrixXd& completed, int t) {
  const int t_len = static_cast<int>(completed.rows());
  const int t0 = first_likelihood_time(spec.variant);
  if (t < t0 || t >= t_len) {
    fail(ErrorKind::TimeIndexOutOfRange, "conditional_variance: t out of range");
  }
  if (spec.variant == Variant::VarIw) return SpdMatrix(params.sigma);
  const Eigen::ArrayXd lagged = completed.row(t - 1).transpose().array();
  const Eigen::VectorXd var = params.theta1.array() + params.theta2.array() * lagged.square();
  return SpdMatrix(var.asDiagonal().toDenseMatrix());
}

ConditionalProfile conditional_profile(const ParameterSet& params, const ModelSpec& spec,
                                       const Eigen::MatrixXd& completed,
                                       const std::vector<Eigen::MatrixXd>& covariates) {
  const int t_len = static_cast<int>(completed.rows());
  const int s_len = static_cast<int>(completed.cols());
  ConditionalProfile prof;
  prof.t0 = first_likelihood_time(spec.variant);
  const int n = t_len - prof.t0;
  if (n <= 0) {
    prof.mean.resize(0, s_len);
    prof.var.resize(0, s_len);
    return prof;
  }

  Eigen::MatrixXd xb = Eigen::MatrixXd::Zero(t_len, s_len);
  for (std::size_t j = 0; j < covariates.size(); ++j) {
    xb.array() += covariates[j].array().rowwise() * params.beta.row(j).array();
  }
  Eigen::MatrixXd r = completed - xb;
  r.array().rowwise() -= params.intercept.transpose().array();

  if (spec.variant == Variant::Varich) {
    const Eigen::MatrixXd d = r.middleRows(1, t_len - 1) - r.middleRows(0, t_len - 1);
    prof.mean = completed.middleRows(prof.t0, n) -
                (d.middleRows(1, n) - d.middleRows(0, n) * params.phi.transpose());
  } else {
    prof.mean = completed.middleRows(prof.t0, n) -
                (r.middleRows(prof.t0, n) - r.middleRows(prof.t0 - 1, n) * params.phi.transpose());
  }

  if (spec.variant != Variant::VarIw) {
    prof.var = completed.middleRows(prof.t0 - 1, n).array().square().matrix();
    prof.var.array().rowwise() *= params.theta2.transpose().array();
    prof.var.array().rowwise() += params.theta1.transpose().array();
  } else {
    prof.var.resize(0, s_len);
  }
  return prof;
}

Eigen::MatrixXd beta_prior_sds(const PriorConfig& priors,
                               const std::vector<CovariateRole>& roles,
                               const std::vector<SiteGroup>& groups) {
  Eigen::MatrixXd sds(static_cast<int>(roles.size()), static_cast<int>(groups.size()));
  for (int j = 0; j < sds.rows(); ++j) {
    for (int s = 0; s < sds.cols(); ++s) {
      switch (roles[j]) {
        case CovariateRole::Wind:
          sds(j, s) = priors.sd_beta_wind;
          break;
        case CovariateRole::Dumping:
          sds(j, s) = groups[s] == SiteGroup::Dump ? priors.sd_effect_active
                                                   : priors.sd_effect_inactive;
          break;
        case CovariateRole::Dredging:
          sds(j, s) = groups[s] == SiteGroup::Dredging ? priors.sd_effect_active
                                                       : priors.sd_effect_inactive;
          break;
      }
    }
  }
  return sds;
}

ParameterLayout::ParameterLayout(const ModelSpec& spec, const Dataset& data)
    : variant_(spec.variant),
      num_sites_(data.num_sites()),
      num_covariates_(data.num_covariates()),
      full_phi_(spec.variant != Variant::Arch),
      missing_lo_(spec.priors.missing_lo),
      missing_hi_(spec.priors.missing_hi) {
  const int s_len = num_sites_;
  for (int t = 0; t < data.num_times(); ++t) {
    for (int s = 0; s < s_len; ++s) {
      if (data.missing(t, s)) missing_cells_.emplace_back(t, s);
    }
  }

  off_beta_ = s_len;
  off_phi_ = off_beta_ + num_covariates_ * s_len;
  off_theta1_ = off_phi_ + phi_count();
  off_theta2_ = off_theta1_ + s_len;
  int off = off_theta2_ + s_len;
  if (spec.variant == Variant::VarIw) {
    off_sigma_ = off;
    off += s_len * (s_len + 1) / 2;
  }
  off_missing_ = off;
  dim_ = off + static_cast<int>(missing_cells_.size());

  // Chart scales for the unbounded blocks; everything transformed (theta,
  // sigma factor, missing values) keeps unit coordinates. Initial states are
  // drawn uniformly in these units, so the caps keep starts on the data
  // scale — intercepts within ±20 NTU and Φ well inside the stationary
  // region — rather than in the tails of the vague priors. Without them a
  // start with a large mean misfit drifts onto the φ ≈ 1 ridge, where the
  // mean level is unidentified and chains cannot leave. The posterior itself
  // is unchanged: the scaling contributes only a constant log-Jacobian.
  PriorConfig chart = spec.priors;
  chart.sd_intercept = std::min(chart.sd_intercept, 10.0);
  chart.sd_beta_wind = std::min(chart.sd_beta_wind, 0.25);
  chart.sd_effect_active = std::min(chart.sd_effect_active, 2.5);
  chart.sd_effect_inactive = std::min(chart.sd_effect_inactive, 0.3);
  chart.sd_phi_diag = std::min(chart.sd_phi_diag, 0.1);
  chart.sd_phi_offdiag = std::min(chart.sd_phi_offdiag, 0.02);
  scale_ = Eigen::VectorXd::Ones(dim_);
  scale_.segment(0, s_len).setConstant(chart.sd_intercept);
  const Eigen::MatrixXd beta_sds =
      beta_prior_sds(chart, data.covariate_roles, data.site_groups);
  for (int j = 0; j < num_covariates_; ++j) {
    scale_.segment(off_beta_ + j * s_len, s_len) = beta_sds.row(j).transpose();
  }
  if (full_phi_) {
    scale_.segment(off_phi_, s_len * s_len).setConstant(chart.sd_phi_offdiag);
    for (int i = 0; i < s_len; ++i) {
      scale_[off_phi_ + i * s_len + i] = chart.sd_phi_diag;
    }
  } else {
    scale_.segment(off_phi_, s_len).setConstant(chart.sd_phi_diag);
  }

  // Covariate naming: role names when a role appears once, positional otherwise.
  std::vector<std::string> cov_labels(num_covariates_);
  {
    std::vector<int> role_counts(3, 0);
    for (auto r : data.covariate_roles) role_counts[static_cast<int>(r)]++;
    for (int j = 0; j < num_covariates_; ++j) {
      const CovariateRole r = data.covariate_roles[j];
      cov_labels[j] = role_counts[static_cast<int>(r)] == 1
                          ? covariate_role_name(r)
                          : std::string("x") + std::to_string(j + 1);
    }
  }

  // Dot-indexed names so the flat CSVs never need field quoting.
  names_.reserve(dim_);
  for (int s = 0; s < s_len; ++s) names_.push_back("intercept." + std::to_string(s + 1));
  for (int j = 0; j < num_covariates_; ++j) {
    for (int s = 0; s < s_len; ++s) {
      names_.push_back("beta." + cov_labels[j] + "." + std::to_string(s + 1));
    }
  }
  if (full_phi_) {
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < s_len; ++j) {
        names_.push_back("phi." + std::to_string(i + 1) + "." + std::to_string(j + 1));
      }
    }
  } else {
    for (int i = 0; i < s_len; ++i) {
      names_.push_back("phi." + std::to_string(i + 1) + "." + std::to_string(i + 1));
    }
  }
  for (int s = 0; s < s_len; ++s) names_.push_back("theta1." + std::to_string(s + 1));
  for (int s = 0; s < s_len; ++s) names_.push_back("theta2." + std::to_string(s + 1));
  if (off_sigma_ >= 0) {
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j <= i; ++j) {
        names_.push_back("sigma." + std::to_string(i + 1) + "." + std::to_string(j + 1));
      }
    }
  }
  for (const auto& [t, s] : missing_cells_) {
    names_.push_back("y_missing." + std::to_string(t + 1) + "." + std::to_string(s + 1));
  }
}

Eigen::VectorXd ParameterLayout::pack(const ParameterSet& params) const {
  const int s_len = num_sites_;
  Eigen::VectorXd u(dim_);
  u.segment(0, s_len) = params.intercept;
  for (int j = 0; j < num_covariates_; ++j) {
    u.segment(off_beta_ + j * s_len, s_len) = params.beta.row(j).transpose();
  }
  if (full_phi_) {
    for (int i = 0; i < s_len; ++i) {
      u.segment(off_phi_ + i * s_len, s_len) = params.phi.row(i).transpose();
    }
  } else {
    u.segment(off_phi_, s_len) = params.phi.diagonal();
  }
  for (int s = 0; s < s_len; ++s) {
    u[off_theta1_ + s] = to_unconstrained(params.theta1[s], Support::positive()).value;
    u[off_theta2_ + s] = to_unconstrained(params.theta2[s], Support::interval(0.0, 1.0)).value;
  }
  if (off_sigma_ >= 0) {
    const Eigen::MatrixXd l = cholesky(SpdMatrix(params.sigma)).matrix();
    int k = off_sigma_;
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < i; ++j) u[k++] = l(i, j);
      u[k++] = std::log(l(i, i));
    }
  }
  const Support msupp = Support::interval(missing_lo_, missing_hi_);
  for (int k = 0; k < missing_count(); ++k) {
    u[off_missing_ + k] = to_unconstrained(params.y_missing[k], msupp).value;
  }
  u.head(off_theta1_).array() /= scale_.head(off_theta1_).array();
  return u;
}

ParameterSet ParameterLayout::unpack(const Eigen::VectorXd& u) const {
  if (u.size() != dim_) {
    fail(ErrorKind::LengthMismatch, "unpack: expected vector of length " + std::to_string(dim_) +
                                        ", got " + std::to_string(u.size()));
  }
  const int s_len = num_sites_;
  const Eigen::VectorXd head =
      u.head(off_theta1_).cwiseProduct(scale_.head(off_theta1_));
  ParameterSet p;
  p.intercept = head.segment(0, s_len);
  p.beta.resize(num_covariates_, s_len);
  for (int j = 0; j < num_covariates_; ++j) {
    p.beta.row(j) = head.segment(off_beta_ + j * s_len, s_len).transpose();
  }
  p.phi = Eigen::MatrixXd::Zero(s_len, s_len);
  if (full_phi_) {
    for (int i = 0; i < s_len; ++i) {
      p.phi.row(i) = head.segment(off_phi_ + i * s_len, s_len).transpose();
    }
  } else {
    p.phi.diagonal() = head.segment(off_phi_, s_len);
  }
  p.theta1 = u.segment(off_theta1_, s_len).array().exp();
  p.theta2.resize(s_len);
  for (int s = 0; s < s_len; ++s) p.theta2[s] = logistic(u[off_theta2_ + s]);
  if (off_sigma_ >= 0) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(s_len, s_len);
    int k = off_sigma_;
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < i; ++j) l(i, j) = u[k++];
      l(i, i) = std::exp(u[k++]);
    }
    p.sigma = l * l.transpose();
  }
  p.y_missing.resize(missing_count());
  const Support msupp = Support::interval(missing_lo_, missing_hi_);
  for (int k = 0; k < missing_count(); ++k) {
    p.y_missing[k] = from_unconstrained(u[off_missing_ + k], msupp).value;
  }
  return p;
}

Eigen::VectorXd ParameterLayout::constrain(const Eigen::VectorXd& u) const {
  const ParameterSet p = unpack(u);
  const int s_len = num_sites_;
  Eigen::VectorXd c(dim_);
  c.segment(0, s_len) = p.intercept;
  for (int j = 0; j < num_covariates_; ++j) {
    c.segment(off_beta_ + j * s_len, s_len) = p.beta.row(j).transpose();
  }
  if (full_phi_) {
    for (int i = 0; i < s_len; ++i) {
      c.segment(off_phi_ + i * s_len, s_len) = p.phi.row(i).transpose();
    }
  } else {
    c.segment(off_phi_, s_len) = p.phi.diagonal();
  }
  c.segment(off_theta1_, s_len) = p.theta1;
  c.segment(off_theta2_, s_len) = p.theta2;
  if (off_sigma_ >= 0) {
    int k = off_sigma_;
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j <= i; ++j) c[k++] = p.sigma(i, j);
    }
  }
  c.segment(off_missing_, missing_count()) = p.y_missing;
  return c;
}

}  // namespace varch

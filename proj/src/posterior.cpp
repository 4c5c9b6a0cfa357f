#include "varch/posterior.hpp"

#include <cmath>
#include <limits>

#include "varch/errors.hpp"
#include "varch/kernel.hpp"
#include "varch/transforms.hpp"

namespace varch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

double gaussian_block(const Eigen::ArrayXXd& x, double sd) {
  // Sum of N(0, sd^2) log densities over every entry of x.
  const double n = static_cast<double>(x.size());
  return -0.5 * n * (kLogTwoPi + 2.0 * std::log(sd)) - 0.5 * x.square().sum() / (sd * sd);
}

}  // namespace

std::vector<std::string> Target::names() const {
  std::vector<std::string> out;
  out.reserve(dim());
  for (int i = 0; i < dim(); ++i) out.push_back("p." + std::to_string(i + 1));
  return out;
}

PosteriorModel::PosteriorModel(ModelSpec spec, Dataset data)
    : spec_(std::move(spec)),
      data_(std::move(data)),
      layout_(spec_, data_),
      t0_(first_likelihood_time(spec_.variant)) {
  // Structural dataset validation happens at the pipeline boundary; here we
  // only resolve prior scales, so short (prior-only) panels stay evaluable.
  spec_.priors.validate(data_.num_sites());

  const auto& pr = spec_.priors;
  beta_prior_sd_ = beta_prior_sds(pr, data_.covariate_roles, data_.site_groups);
  scale_log_jac_ =
      layout_.scales().head(layout_.off_theta1()).array().log().sum();
  if (spec_.variant == Variant::VarIw) psi_ = pr.psi_or_identity(data_.num_sites());
}

double PosteriorModel::log_posterior(const Eigen::VectorXd& u) const { return eval(u, nullptr); }

Eigen::VectorXd PosteriorModel::grad_log_posterior(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g;
  eval(u, &g);
  return g;
}

double PosteriorModel::value_and_grad(const Eigen::VectorXd& u, Eigen::VectorXd& grad) const {
  return eval(u, &grad);
}

double PosteriorModel::eval(const Eigen::VectorXd& u, Eigen::VectorXd* grad) const {
  const int dim = layout_.dim();
  if (u.size() != dim) {
    fail(ErrorKind::LengthMismatch, "log_posterior: expected packed length " +
                                        std::to_string(dim) + ", got " +
                                        std::to_string(u.size()));
  }
  if (grad) grad->setZero(dim);
  if (!u.allFinite()) return kNegInf;

  const int s_len = layout_.num_sites();
  const int p_len = layout_.num_covariates();
  const int t_len = data_.num_times();
  const int n = t_len - t0_;  // likelihood rows (may be zero)
  const bool varich = spec_.variant == Variant::Varich;
  const bool var_iw = spec_.variant == Variant::VarIw;
  const auto& pr = spec_.priors;

  // --- unpack, keeping the unconstrained coordinates we need again ---
  const Eigen::VectorXd head =
      u.head(layout_.off_theta1()).cwiseProduct(layout_.scales().head(layout_.off_theta1()));
  const Eigen::VectorXd a = head.segment(0, s_len);
  Eigen::MatrixXd beta(p_len, s_len);
  for (int j = 0; j < p_len; ++j) {
    beta.row(j) = head.segment(layout_.off_beta() + j * s_len, s_len).transpose();
  }
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(s_len, s_len);
  if (layout_.full_phi()) {
    for (int i = 0; i < s_len; ++i) {
      phi.row(i) = head.segment(layout_.off_phi() + i * s_len, s_len).transpose();
    }
  } else {
    phi.diagonal() = head.segment(layout_.off_phi(), s_len);
  }
  const Eigen::VectorXd u_t1 = u.segment(layout_.off_theta1(), s_len);
  const Eigen::VectorXd theta1 = u_t1.array().exp();
  const Eigen::VectorXd u_t2 = u.segment(layout_.off_theta2(), s_len);
  Eigen::VectorXd theta2(s_len);
  for (int s = 0; s < s_len; ++s) theta2[s] = logistic(u_t2[s]);

  Eigen::MatrixXd chol_l;        // VarIw factor
  Eigen::VectorXd sigma_u_diag;  // its log-diagonal coordinates
  if (var_iw) {
    chol_l = Eigen::MatrixXd::Zero(s_len, s_len);
    sigma_u_diag.resize(s_len);
    int k = layout_.off_sigma();
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < i; ++j) chol_l(i, j) = u[k++];
      sigma_u_diag[i] = u[k];
      chol_l(i, i) = std::exp(u[k++]);
    }
  }

  const int m_len = layout_.missing_count();
  const Support msupp = Support::interval(pr.missing_lo, pr.missing_hi);
  Eigen::VectorXd y_miss(m_len), miss_logjac(m_len);
  for (int k = 0; k < m_len; ++k) {
    const TransformResult tr = from_unconstrained(u[layout_.off_missing() + k], msupp);
    y_miss[k] = tr.value;
    miss_logjac[k] = tr.log_jacobian;
  }

  // --- completed data, covariate effect, residuals ---
  Eigen::MatrixXd yc = data_.y;
  {
    int k = 0;
    for (const auto& [t, s] : layout_.missing_cells()) yc(t, s) = y_miss[k++];
  }
  Eigen::MatrixXd xb = Eigen::MatrixXd::Zero(t_len, s_len);
  for (int j = 0; j < p_len; ++j) {
    xb.array() += data_.covariates[j].array().rowwise() * beta.row(j).array();
  }
  Eigen::MatrixXd r = yc - xb;
  r.array().rowwise() -= a.transpose().array();

  // --- likelihood ---
  double lp = 0.0;
  Eigen::MatrixXd e(std::max(n, 0), s_len);
  if (n > 0) {
    if (varich) {
      // e_t = d_{t-1} - Phi d_{t-2} with d_k = r_{k+1} - r_k.
      const Eigen::MatrixXd d = r.middleRows(1, t_len - 1) - r.middleRows(0, t_len - 1);
      e = d.middleRows(1, n) - d.middleRows(0, n) * phi.transpose();
    } else {
      e = r.middleRows(t0_, n) - r.middleRows(t0_ - 1, n) * phi.transpose();
    }
  }

  Eigen::MatrixXd v, ylag;      // diagonal-variance pieces
  Eigen::MatrixXd sigma_inv;    // VarIw pieces
  if (n > 0) {
    if (var_iw) {
      if (!(chol_l.diagonal().array() > 0.0).all() || !chol_l.allFinite()) return kNegInf;
      const Eigen::MatrixXd l_inv =
          chol_l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(s_len, s_len));
      sigma_inv = l_inv.transpose() * l_inv;
      const Eigen::MatrixXd z = chol_l.triangularView<Eigen::Lower>().solve(e.transpose());
      lp += -0.5 * n * s_len * kLogTwoPi - n * sigma_u_diag.sum() - 0.5 * z.squaredNorm();
    } else {
      ylag = yc.middleRows(t0_ - 1, n);
      v = ylag.array().square().matrix();
      v.array().rowwise() *= theta2.transpose().array();
      v.array().rowwise() += theta1.transpose().array();
      lp += -0.5 * n * s_len * kLogTwoPi - 0.5 * v.array().log().sum() -
            0.5 * (e.array().square() / v.array()).sum();
    }
  }

  // --- priors and Jacobians ---
  lp += scale_log_jac_;  // prior-scaled unbounded blocks, d(value)/du = scale
  lp += gaussian_block(a.array(), pr.sd_intercept);
  lp += -0.5 * p_len * s_len * kLogTwoPi - beta_prior_sd_.array().log().sum() -
        0.5 * (beta.array() / beta_prior_sd_.array()).square().sum();
  if (layout_.full_phi()) {
    lp += gaussian_block(phi.diagonal().array(), pr.sd_phi_diag);
    const double off_n = static_cast<double>(s_len) * (s_len - 1);
    const double off_ss =
        phi.array().square().sum() - phi.diagonal().array().square().sum();
    lp += -0.5 * off_n * (kLogTwoPi + 2.0 * std::log(pr.sd_phi_offdiag)) -
          0.5 * off_ss / (pr.sd_phi_offdiag * pr.sd_phi_offdiag);
  } else {
    lp += gaussian_block(phi.diagonal().array(), pr.sd_phi_diag);
  }
  // theta2's Beta(a,b) prior is fused with its logit Jacobian in log space:
  // a log(theta) + b log(1-theta) - log B(a,b). The fused form stays finite
  // when the logistic saturates, where the raw density would hit its
  // open-support wall.
  const double theta2_log_norm = std::lgamma(pr.theta2_a) + std::lgamma(pr.theta2_b) -
                                 std::lgamma(pr.theta2_a + pr.theta2_b);
  for (int s = 0; s < s_len; ++s) {
    lp += trunc_normal_logpdf(theta1[s], 0.0, pr.sd_theta1, 0.0, kInf) + u_t1[s];
    lp += pr.theta2_a * log_logistic(u_t2[s]) + pr.theta2_b * log_logistic(-u_t2[s]) -
          theta2_log_norm;
  }
  if (var_iw) {
    const Eigen::MatrixXd sigma = chol_l * chol_l.transpose();
    try {
      lp += inv_wishart_logpdf(SpdMatrix(sigma), SpdMatrix(psi_), pr.nu);
    } catch (const Error&) {
      return kNegInf;  // factor collapsed to numerical singularity
    }
    lp += s_len * std::log(2.0);
    for (int i = 0; i < s_len; ++i) lp += (s_len - i + 1) * sigma_u_diag[i];
  }
  for (int k = 0; k < m_len; ++k) {
    lp += trunc_normal_logpdf(y_miss[k], 0.0, pr.missing_sd, pr.missing_lo, pr.missing_hi) +
          miss_logjac[k];
  }

  if (!std::isfinite(lp)) return kNegInf;
  if (!grad) return lp;

  // --- gradient ---
  Eigen::VectorXd& g = *grad;
  Eigen::VectorXd g_theta1 = Eigen::VectorXd::Zero(s_len);  // wrt constrained theta1
  Eigen::VectorXd g_theta2 = Eigen::VectorXd::Zero(s_len);
  Eigen::MatrixXd gy = Eigen::MatrixXd::Zero(t_len, s_len);  // wrt completed Y
  Eigen::MatrixXd g_sigma;                                   // symmetric d lp / d Sigma

  if (n > 0) {
    Eigen::MatrixXd gm;  // n x S, rows d l_t / d M_t
    if (var_iw) {
      gm = e * sigma_inv;
      g_sigma = 0.5 * (gm.transpose() * gm) - 0.5 * n * sigma_inv;
    } else {
      gm = (e.array() / v.array()).matrix();
      const Eigen::ArrayXXd gv =
          0.5 * (e.array().square() / v.array() - 1.0) / v.array();
      g_theta1 += gv.colwise().sum().matrix().transpose();
      g_theta2 += (gv * ylag.array().square()).colwise().sum().matrix().transpose();
      Eigen::ArrayXXd vterm = 2.0 * gv * ylag.array();
      vterm.rowwise() *= theta2.transpose().array();
      gy.middleRows(t0_ - 1, n).array() += vterm;
    }

    const Eigen::VectorXd gm_sum = gm.colwise().sum().transpose();
    Eigen::MatrixXd h1, h2;
    if (varich) {
      h1 = gm + gm * phi;  // rows (C1^T gm_t)^T with C1 = I + Phi
      h2 = -(gm * phi);
    } else {
      h1 = gm * phi;
      g.segment(0, s_len) += gm_sum - phi.transpose() * gm_sum;  // (I - Phi)^T sum
    }

    for (int j = 0; j < p_len; ++j) {
      const auto& x = data_.covariates[j];
      Eigen::RowVectorXd gb =
          (gm.array() * x.middleRows(t0_, n).array()).colwise().sum() -
          (h1.array() * x.middleRows(t0_ - 1, n).array()).colwise().sum();
      if (varich) gb -= (h2.array() * x.middleRows(t0_ - 2, n).array()).colwise().sum().matrix();
      g.segment(layout_.off_beta() + j * s_len, s_len) += gb.transpose();
    }

    if (varich) {
      const Eigen::MatrixXd dlag = r.middleRows(1, n) - r.middleRows(0, n);  // d_{t-2} rows
      const Eigen::MatrixXd gphi = gm.transpose() * dlag;
      for (int i = 0; i < s_len; ++i) {
        g.segment(layout_.off_phi() + i * s_len, s_len) += gphi.row(i).transpose();
      }
    } else if (layout_.full_phi()) {
      const Eigen::MatrixXd gphi = gm.transpose() * r.middleRows(t0_ - 1, n);
      for (int i = 0; i < s_len; ++i) {
        g.segment(layout_.off_phi() + i * s_len, s_len) += gphi.row(i).transpose();
      }
    } else {
      g.segment(layout_.off_phi(), s_len) +=
          (gm.array() * r.middleRows(t0_ - 1, n).array()).colwise().sum().matrix().transpose();
    }

    gy.middleRows(t0_, n) -= gm;
    gy.middleRows(t0_ - 1, n) += h1;
    if (varich) gy.middleRows(t0_ - 2, n) += h2;
  } else if (var_iw) {
    const Eigen::MatrixXd l_inv =
        chol_l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(s_len, s_len));
    sigma_inv = l_inv.transpose() * l_inv;
    g_sigma = Eigen::MatrixXd::Zero(s_len, s_len);
  }

  // Prior contributions.
  g.segment(0, s_len) -= a / (pr.sd_intercept * pr.sd_intercept);
  for (int j = 0; j < p_len; ++j) {
    g.segment(layout_.off_beta() + j * s_len, s_len) -=
        (beta.row(j).array() / beta_prior_sd_.row(j).array().square()).matrix().transpose();
  }
  if (layout_.full_phi()) {
    const double vd = pr.sd_phi_diag * pr.sd_phi_diag;
    const double vo = pr.sd_phi_offdiag * pr.sd_phi_offdiag;
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < s_len; ++j) {
        g[layout_.off_phi() + i * s_len + j] -= phi(i, j) / (i == j ? vd : vo);
      }
    }
  } else {
    g.segment(layout_.off_phi(), s_len) -=
        phi.diagonal() / (pr.sd_phi_diag * pr.sd_phi_diag);
  }

  // theta1: likelihood + TN prior, chained through exp, plus the Jacobian term.
  g_theta1 -= theta1 / (pr.sd_theta1 * pr.sd_theta1);
  g.segment(layout_.off_theta1(), s_len) +=
      (g_theta1.array() * theta1.array() + 1.0).matrix();

  // theta2: likelihood chained through the logistic map, plus the fused
  // prior-and-Jacobian derivative a - (a+b) theta, which is saturation-safe.
  g.segment(layout_.off_theta2(), s_len) +=
      (g_theta2.array() * theta2.array() * (1.0 - theta2.array()) + pr.theta2_a -
       (pr.theta2_a + pr.theta2_b) * theta2.array())
          .matrix();

  if (var_iw) {
    // Inverse-Wishart prior in Sigma space, then chain Sigma = L L^T.
    g_sigma += -0.5 * (pr.nu + s_len + 1.0) * sigma_inv +
               0.5 * sigma_inv * psi_ * sigma_inv;
    const Eigen::MatrixXd gl = 2.0 * g_sigma * chol_l;
    int k = layout_.off_sigma();
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < i; ++j) g[k++] += gl(i, j);
      g[k++] += gl(i, i) * chol_l(i, i) + (s_len - i + 1);
    }
  }

  // Missing values: accumulated data gradient + TN prior, through the
  // interval transform, plus its Jacobian derivative.
  const double width = pr.missing_hi - pr.missing_lo;
  for (int k = 0; k < m_len; ++k) {
    const auto& [t, s] = layout_.missing_cells()[k];
    const double m = y_miss[k];
    const double dm = gy(t, s) - m / (pr.missing_sd * pr.missing_sd);
    const double sig = (m - pr.missing_lo) / width;
    g[layout_.off_missing() + k] +=
        dm * (m - pr.missing_lo) * (pr.missing_hi - m) / width + 1.0 - 2.0 * sig;
  }

  // Chain rule for the prior-scaled unbounded blocks: so far those segments
  // hold derivatives with respect to natural units.
  g.head(layout_.off_theta1()).array() *= layout_.scales().head(layout_.off_theta1()).array();

  if (!g.allFinite()) {
    g.setZero();
    return kNegInf;
  }
  return lp;
}

double log_posterior(const Eigen::VectorXd& u, const ModelSpec& spec, const Dataset& data) {
  return PosteriorModel(spec, data).log_posterior(u);
}

Eigen::VectorXd grad_log_posterior(const Eigen::VectorXd& u, const ModelSpec& spec,
                                   const Dataset& data) {
  return PosteriorModel(spec, data).grad_log_posterior(u);
}

}  // namespace varch

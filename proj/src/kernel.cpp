#include "varch/kernel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "varch/errors.hpp"

namespace varch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    fail(ErrorKind::ConstraintViolation, "SpdMatrix: matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12 * scale)) {
    fail(ErrorKind::ConstraintViolation,
         "SpdMatrix: asymmetry " + std::to_string(asym / scale) + " exceeds 1e-12 relative");
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

SpdMatrix SpdMatrix::identity(int dim) { return SpdMatrix(Eigen::MatrixXd::Identity(dim, dim)); }

LowerTriangular::LowerTriangular(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1) {
    fail(ErrorKind::ConstraintViolation, "LowerTriangular: matrix must be square and non-empty");
  }
  for (int i = 0; i < entries.rows(); ++i) {
    for (int j = i + 1; j < entries.cols(); ++j) {
      if (entries(i, j) != 0.0) {
        fail(ErrorKind::ConstraintViolation, "LowerTriangular: nonzero entry above the diagonal");
      }
    }
  }
  entries_ = std::move(entries);
}

double LowerTriangular::log_det() const { return entries_.diagonal().array().log().sum(); }

LowerTriangular cholesky(const SpdMatrix& s) {
  const int n = s.dim();
  const Eigen::MatrixXd& a = s.matrix();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      fail(ErrorKind::NotPositiveDefinite,
           "cholesky: pivot " + std::to_string(pivot) + " at index " + std::to_string(j));
    }
    l(j, j) = std::sqrt(pivot);
    const double inv = 1.0 / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (int k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v * inv;
    }
  }
  return LowerTriangular(std::move(l));
}

double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                  const LowerTriangular& chol_sigma) {
  const int n = chol_sigma.dim();
  if (y.size() != n || mu.size() != n) {
    fail(ErrorKind::LengthMismatch, "mvn_logpdf: dimension mismatch");
  }
  const Eigen::VectorXd z =
      chol_sigma.matrix().triangularView<Eigen::Lower>().solve(y - mu);
  return -0.5 * n * kLogTwoPi - chol_sigma.log_det() - 0.5 * z.squaredNorm();
}

double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, const SpdMatrix& sigma) {
  return mvn_logpdf(y, mu, cholesky(sigma));
}

double log_multivariate_gamma(double a, int dim) {
  double v = 0.25 * dim * (dim - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= dim; ++j) v += std::lgamma(a + 0.5 * (1 - j));
  return v;
}

double inv_wishart_logpdf(const SpdMatrix& sigma, const SpdMatrix& psi, double nu) {
  const int p = sigma.dim();
  if (psi.dim() != p) fail(ErrorKind::LengthMismatch, "inv_wishart_logpdf: dimension mismatch");
  if (!(nu > p - 1)) {
    fail(ErrorKind::InvalidDegreesOfFreedom,
         "inv_wishart_logpdf: nu must exceed dim - 1, got " + std::to_string(nu));
  }
  const LowerTriangular l_sigma = cholesky(sigma);
  const LowerTriangular l_psi = cholesky(psi);
  // tr(Psi Sigma^-1) = ||L_sigma^-1 L_psi||_F^2
  const Eigen::MatrixXd w =
      l_sigma.matrix().triangularView<Eigen::Lower>().solve(l_psi.matrix());
  const double trace_term = w.squaredNorm();
  const double log_det_psi = 2.0 * l_psi.log_det();
  const double log_det_sigma = 2.0 * l_sigma.log_det();
  return 0.5 * nu * log_det_psi - 0.5 * nu * p * std::numbers::ln2 -
         log_multivariate_gamma(0.5 * nu, p) - 0.5 * (nu + p + 1) * log_det_sigma -
         0.5 * trace_term;
}

double normal_logpdf(double x, double mu, double sd) {
  const double z = (x - mu) / sd;
  return -0.5 * kLogTwoPi - std::log(sd) - 0.5 * z * z;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_cdf_diff(double a, double b) {
  // Phi(b) - Phi(a) for a <= b. erfc is evaluated on the side where it is
  // small so the subtraction never cancels.
  if (a > b) return -normal_cdf_diff(b, a);
  if (a == -kInf && b == kInf) return 1.0;
  if (b == kInf) return 0.5 * std::erfc(a / std::numbers::sqrt2);
  if (a == -kInf) return 0.5 * std::erfc(-b / std::numbers::sqrt2);
  const double mid = 0.5 * (a + b);
  if (mid >= 0.0) {
    return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
  }
  return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
}

double trunc_normal_logpdf(double x, double mu, double sd, double lo, double hi) {
  if (!(sd > 0.0)) fail(ErrorKind::ConstraintViolation, "trunc_normal_logpdf: sd must be > 0");
  if (!(lo < hi)) fail(ErrorKind::ConstraintViolation, "trunc_normal_logpdf: requires lo < hi");
  if (x < lo || x > hi) {
    fail(ErrorKind::OutOfSupport, "trunc_normal_logpdf: x = " + std::to_string(x) +
                                      " outside [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
  }
  const double za = (lo - mu) / sd;
  const double zb = hi == kInf ? kInf : (hi - mu) / sd;
  return normal_logpdf(x, mu, sd) - std::log(normal_cdf_diff(za, zb));
}

double beta_logpdf(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    fail(ErrorKind::ConstraintViolation, "beta_logpdf: shape parameters must be > 0");
  }
  if (!(x > 0.0) || !(x < 1.0)) {
    fail(ErrorKind::OutOfSupport, "beta_logpdf: x = " + std::to_string(x) + " outside (0,1)");
  }
  const double log_norm = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  return (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_norm;
}

}  // namespace varch

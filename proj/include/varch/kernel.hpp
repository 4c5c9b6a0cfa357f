#pragma once

#include <Eigen/Dense>

namespace varch {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

/// Symmetric positive definite matrix. Construction symmetrizes the input as
/// (S + S^T)/2 after checking that the asymmetry is within 1e-12 relative;
/// positive definiteness itself is only established by cholesky().
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd entries);

  static SpdMatrix identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

 private:
  Eigen::MatrixXd entries_;
};

/// Lower-triangular matrix, typically a Cholesky factor (positive diagonal).
class LowerTriangular {
 public:
  explicit LowerTriangular(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  double log_det() const;  // sum of log diagonal entries

 private:
  Eigen::MatrixXd entries_;
};

/// Cholesky factorization S = L L^T. Throws NotPositiveDefinite when a pivot
/// is not strictly positive.
LowerTriangular cholesky(const SpdMatrix& s);

double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mu, const SpdMatrix& sigma);
double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                  const LowerTriangular& chol_sigma);

/// Inverse-Wishart log density with full normalizing constant.
/// Requires nu > dim - 1 (InvalidDegreesOfFreedom otherwise).
double inv_wishart_logpdf(const SpdMatrix& sigma, const SpdMatrix& psi, double nu);

/// Truncated normal on [lo, hi]; hi may be +infinity. Throws OutOfSupport
/// when x is outside the truncation interval.
double trunc_normal_logpdf(double x, double mu, double sd, double lo, double hi);

double beta_logpdf(double x, double a, double b);

// Scalar building blocks shared across modules.
double normal_logpdf(double x, double mu, double sd);
double normal_cdf(double x);                       // erfc-based, full double accuracy
double normal_cdf_diff(double a, double b);        // Phi(b) - Phi(a), cancellation-safe
double log_multivariate_gamma(double a, int dim);

}  // namespace varch

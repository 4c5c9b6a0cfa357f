#pragma once

#include <vector>

#include <Eigen/Dense>

namespace varch {

/// Split R-hat over per-chain draw sequences: each chain is halved and the
/// usual between/within variance ratio sqrt(((n-1)/n * W + B/n) / W) is taken
/// over the half-chains. Throws ZeroVariance when the within variance
/// vanishes (all draws identical) instead of silently returning 1.
double split_rhat(const std::vector<Eigen::VectorXd>& chains);

/// Effective sample size via the autocorrelation-sum estimator with Geyer's
/// initial monotone positive sequence, combining chains the same way R-hat
/// does. Throws ZeroVariance on constant input.
double ess(const std::vector<Eigen::VectorXd>& chains);

struct Summary {
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
};

/// Pooled moments and equal-tailed quantiles (linear interpolation of order
/// statistics). Throws InsufficientDraws on empty input.
Summary summarize(const Eigen::VectorXd& pooled_draws);

/// Quantile by linear interpolation of order statistics, p in [0,1].
double quantile(const Eigen::VectorXd& draws, double p);

/// Maximum eigenvalue modulus of a square matrix.
double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace varch

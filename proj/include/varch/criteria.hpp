#pragma once

#include <vector>

#include <Eigen/Dense>

#include "varch/hmc.hpp"
#include "varch/model.hpp"

namespace varch {

/// Pointwise log likelihood over kept draws, one row per draw (chains merged
/// in chain order), one column per likelihood point. Diagonal-variance
/// variants use one point per observed (t >= t0, s) cell in row-major order;
/// VAR_IW uses one point per time t >= t0 holding the marginal MVN density of
/// the observed sub-vector (missing coordinates dropped via the matching
/// sub-matrix of Sigma). Times with nothing observed contribute no point.
Eigen::MatrixXd pointwise_loglik(const PosteriorDraws& draws, const ModelSpec& spec,
                                 const Dataset& data);

struct WaicResult {
  double waic = 0.0;
  double se = 0.0;
  double p_waic = 0.0;
  double lppd = 0.0;
};

/// Widely applicable information criterion from a draws x points matrix:
/// lppd by stable log-sum-exp, penalty as the across-draw sample variance
/// summed over points, se = 2 sqrt(n_points * var of pointwise elpd).
WaicResult waic(const Eigen::MatrixXd& loglik);

struct LooResult {
  double looic = 0.0;
  double se = 0.0;
  double elpd = 0.0;
  Eigen::VectorXd pareto_k;   // NaN where the tail was too short to smooth
  std::vector<int> flagged;   // points with k above the reliability threshold
};

/// Importance-sampling LOO with Pareto smoothing of the largest 20% of
/// weights (method-of-moments generalized Pareto fit). Tails shorter than 5
/// weights fall back to plain importance sampling. `smooth=false` forces the
/// plain fallback everywhere.
LooResult loo_ic(const Eigen::MatrixXd& loglik, bool smooth = true);

/// Reliability threshold on the fitted Pareto shape.
inline bool pareto_k_flagged(double k) { return k > 0.7; }

}  // namespace varch

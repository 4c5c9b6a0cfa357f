#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "varch/hmc.hpp"
#include "varch/model.hpp"

namespace varch {

/// One-step-ahead predictive summaries. Matrices are T x S; rows before t0
/// (no lagged information yet) hold NaN.
struct ForecastResult {
  int t0 = 0;
  Eigen::MatrixXd mean;  // predictive mean, averaged exactly over draws
  Eigen::MatrixXd lo;    // equal-tailed 95% interval bounds from sampled draws
  Eigen::MatrixXd hi;
};

/// For every kept draw, forms M_t and Sigma_t from the completed data and
/// samples predictive observations; intervals are the 2.5%/97.5% quantiles of
/// the sampled values (small draw counts are topped up with extra predictive
/// samples per draw so the interval remains meaningful), the mean is the
/// average of M_t over draws. Throws TimeIndexOutOfRange when the panel is
/// too short to forecast anything.
ForecastResult one_step_forecast(const PosteriorDraws& draws, const ModelSpec& spec,
                                 const Dataset& data, std::uint64_t seed);

/// Fraction of observed entries (t >= t0) lying inside their interval.
double predictive_coverage(const ForecastResult& forecast, const Dataset& data);

}  // namespace varch

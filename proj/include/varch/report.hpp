#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varch/criteria.hpp"
#include "varch/dataset.hpp"
#include "varch/diagnostics.hpp"
#include "varch/forecast.hpp"
#include "varch/hmc.hpp"
#include "varch/model.hpp"

namespace varch {

/// Everything the results tables need for one fitted model: convergence
/// diagnostics, information criteria, posterior summaries, one-step
/// forecasts, and the stability measure of the mean recursion.
struct FitReport {
  Variant variant = Variant::Varch;
  std::vector<std::string> parameter_names;
  Eigen::VectorXd rhat;            // NaN where the draws never moved
  Eigen::VectorXd ess;             // NaN likewise
  std::vector<Summary> summaries;  // pooled across chains
  WaicResult waic;
  LooResult looic;
  ForecastResult forecasts;
  double coverage = 0.0;         // observed cells inside their 95% interval
  double spectral_radius = 0.0;  // of the posterior-mean Phi
  std::vector<ChainTelemetry> telemetry;

  double max_rhat() const;  // over defined entries; NaN if none
  int total_divergences() const;
};

/// Assembles the full report; `seed` feeds the predictive sampler only.
FitReport build_fit_report(const PosteriorDraws& draws, const ModelSpec& spec,
                           const Dataset& data, std::uint64_t seed);

std::string report_to_json(const FitReport& report);
void write_report_json(const FitReport& report, const std::string& path);

/// Flat per-parameter table: parameter,mean,sd,q2.5,q50,q97.5,rhat,ess.
void write_summary_csv(const FitReport& report, const std::string& path);

/// Long-format forecasts for t >= t0: date,site,observed,mean,lo2.5,hi97.5.
void write_forecast_csv(const FitReport& report, const Dataset& data, const std::string& path);

/// Constrained draws, one row per (chain, iteration), named columns.
void write_draws_csv(const PosteriorDraws& draws, const std::string& path);

/// Reads a draws CSV back; only the constrained matrices and names are
/// recovered (telemetry and unconstrained coordinates are not stored).
PosteriorDraws read_draws_csv(const std::string& path);

}  // namespace varch

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "varch/model.hpp"

namespace varch {

/// Draws a fully observed panel from the model. Initial rows (one, or two for
/// the integrated variant) come from N(A + X.beta, diag(theta1)); later rows
/// follow the conditional mean/variance recursion. Site names and groups are
/// synthesized when not supplied (site01, site02, ... alternating Dredging
/// and Dump); dates start at 2000-01-01. Throws ConstraintViolation on
/// invalid parameters or shape disagreements.
Dataset simulate(const ModelSpec& spec, const ParameterSet& params, int t_len,
                 const std::vector<Eigen::MatrixXd>& covariates, std::uint64_t seed,
                 std::vector<SiteGroup> site_groups = {});

/// Masking scheme for inject_missing: either an independent per-cell fraction
/// or explicit contiguous blocks of days at single sites.
struct MissingScheme {
  enum class Kind { RandomFraction, Blocks };

  struct Block {
    int site = 0;
    int start = 0;
    int length = 0;
  };

  Kind kind = Kind::RandomFraction;
  double fraction = 0.0;
  std::vector<Block> blocks;

  static MissingScheme random_fraction(double p);
  static MissingScheme block(int site, int start, int length);
};

/// Returns a copy of the data with the mask applied (values under the mask
/// become NaN; covariates untouched). The fraction must lie in [0, 1).
Dataset inject_missing(const Dataset& data, const MissingScheme& scheme, std::uint64_t seed);

// Demo covariate builders matching the default covariate roles. Operation
// schedules are fixed constants: dredging runs for 10 days starting every
// 60th day (offset 20), dumping for 7 days starting every 45th day (offset
// 35); the indicators are 1 only at sites of the operation's own group. Wind
// is an AR(1) series around 10 knots (coefficient 0.8, innovation sd 3)
// clipped at zero and shared by all sites.
Eigen::MatrixXd demo_dredging(int t_len, const std::vector<SiteGroup>& groups);
Eigen::MatrixXd demo_dumping(int t_len, const std::vector<SiteGroup>& groups);
Eigen::MatrixXd demo_wind(int t_len, int s_len, std::uint64_t seed);

/// The three demo covariates in default role order (dumping, dredging, wind).
std::vector<Eigen::MatrixXd> demo_covariates(int t_len, const std::vector<SiteGroup>& groups,
                                             std::uint64_t seed);

/// Alternating Dredging/Dump assignment used by the synthesized panels.
std::vector<SiteGroup> default_site_groups(int s_len);

}  // namespace varch

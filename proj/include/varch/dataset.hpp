#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varch/dates.hpp"

namespace varch {

enum class SiteGroup { Dredging, Dump };
enum class CovariateRole { Dumping, Dredging, Wind };

const char* site_group_name(SiteGroup g);
SiteGroup site_group_from_name(const std::string& name);
const char* covariate_role_name(CovariateRole r);
CovariateRole covariate_role_from_name(const std::string& name);

using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Daily multi-site response panel with covariates. `y` is T x S with NaN at
/// masked (missing) entries; covariates are fully observed T x S matrices.
struct Dataset {
  Eigen::MatrixXd y;                        // T x S, NaN where missing
  BoolGrid missing;                         // T x S, true = missing
  std::vector<Eigen::MatrixXd> covariates;  // P matrices, each T x S
  std::vector<CovariateRole> covariate_roles;
  std::vector<std::string> site_names;   // size S
  std::vector<SiteGroup> site_groups;    // size S
  std::vector<Date> dates;               // size T, consecutive days

  int num_times() const { return static_cast<int>(y.rows()); }
  int num_sites() const { return static_cast<int>(y.cols()); }
  int num_covariates() const { return static_cast<int>(covariates.size()); }
  int missing_count() const;

  /// Enforces the structural invariants (shape agreement, T >= 3, finite
  /// covariates, NaN exactly under the mask, consecutive daily dates).
  /// Throws ConstraintViolation on the first violation found.
  void validate() const;
};

}  // namespace varch

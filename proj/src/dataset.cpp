#include "varch/dataset.hpp"

#include <cmath>

#include "varch/errors.hpp"

namespace varch {

const char* site_group_name(SiteGroup g) {
  return g == SiteGroup::Dredging ? "dredging" : "dump";
}

SiteGroup site_group_from_name(const std::string& name) {
  if (name == "dredging") return SiteGroup::Dredging;
  if (name == "dump") return SiteGroup::Dump;
  fail(ErrorKind::ConfigError, "unknown site group '" + name + "' (expected dredging|dump)");
}

const char* covariate_role_name(CovariateRole r) {
  switch (r) {
    case CovariateRole::Dumping: return "dumping";
    case CovariateRole::Dredging: return "dredging";
    case CovariateRole::Wind: return "wind";
  }
  return "?";
}

CovariateRole covariate_role_from_name(const std::string& name) {
  if (name == "dumping") return CovariateRole::Dumping;
  if (name == "dredging") return CovariateRole::Dredging;
  if (name == "wind") return CovariateRole::Wind;
  fail(ErrorKind::ConfigError, "unknown covariate role '" + name + "'");
}

int Dataset::missing_count() const { return static_cast<int>(missing.count()); }

void Dataset::validate() const {
  const int t_len = num_times();
  const int s_len = num_sites();
  if (t_len < 3) fail(ErrorKind::ConstraintViolation, "Dataset: needs at least 3 time points");
  if (s_len < 1) fail(ErrorKind::ConstraintViolation, "Dataset: needs at least one site");
  if (missing.rows() != t_len || missing.cols() != s_len) {
    fail(ErrorKind::ConstraintViolation, "Dataset: mask shape disagrees with y");
  }
  if (static_cast<int>(site_names.size()) != s_len ||
      static_cast<int>(site_groups.size()) != s_len) {
    fail(ErrorKind::ConstraintViolation, "Dataset: site metadata length disagrees with y");
  }
  if (static_cast<int>(dates.size()) != t_len) {
    fail(ErrorKind::ConstraintViolation, "Dataset: date index length disagrees with y");
  }
  for (int t = 1; t < t_len; ++t) {
    if (dates[t].days != dates[t - 1].days + 1) {
      fail(ErrorKind::ConstraintViolation, "Dataset: dates must be consecutive days");
    }
  }
  if (covariate_roles.size() != covariates.size()) {
    fail(ErrorKind::ConstraintViolation, "Dataset: covariate role per covariate required");
  }
  for (const auto& x : covariates) {
    if (x.rows() != t_len || x.cols() != s_len) {
      fail(ErrorKind::ConstraintViolation, "Dataset: covariate shape disagrees with y");
    }
    if (!x.allFinite()) {
      fail(ErrorKind::ConstraintViolation, "Dataset: covariates must be fully observed");
    }
  }
  for (int t = 0; t < t_len; ++t) {
    for (int s = 0; s < s_len; ++s) {
      const bool is_nan = std::isnan(y(t, s));
      if (missing(t, s) != is_nan) {
        fail(ErrorKind::ConstraintViolation,
             "Dataset: mask and NaN pattern disagree at (" + std::to_string(t) + ", " +
                 std::to_string(s) + ")");
      }
    }
  }
}

}  // namespace varch

#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varch/dataset.hpp"

namespace varch {

struct RawRecord {
  Timestamp timestamp;
  std::string site;
  double turbidity = 0.0;  // NTU, non-negative
};

/// Parses `timestamp,site,turbidity_ntu` rows, rejecting negative or
/// non-numeric readings and duplicate (site, timestamp) pairs with
/// row-numbered diagnostics. Result is sorted by (site, timestamp).
std::vector<RawRecord> load_raw(const std::string& path);

/// Daily grid after averaging: one row per calendar day (UTC) spanning the
/// full min-max range, one column per site (sites sorted by name); days
/// without readings are missing.
struct DailyPanel {
  std::vector<Date> dates;
  std::vector<std::string> sites;
  Eigen::MatrixXd y;  // NaN where missing
  BoolGrid missing;
};

DailyPanel aggregate_daily(const std::vector<RawRecord>& records);

struct WindSeries {
  std::vector<Date> dates;
  std::vector<double> knots;
};

/// Parses `date,wind_knots`.
WindSeries load_wind(const std::string& path);

struct OperationsLog {
  std::vector<Date> dates;
  std::vector<CovariateRole> operations;  // Dredging or Dumping per row
};

/// Parses `date,operation` with operation in {dredging, dumping}.
OperationsLog load_operations(const std::string& path);

/// Joins everything on the overlapping date range and builds the covariates:
/// dumping indicator 1 at Dump-group sites on logged dumping days, dredging
/// likewise at Dredging-group sites, wind replicated across sites. Wind must
/// cover every day in the overlap (gaps are a hard error, not imputed).
Dataset build_dataset(const DailyPanel& turbidity, const WindSeries& wind,
                      const OperationsLog& operations,
                      const std::map<std::string, SiteGroup>& site_groups);

/// Dataset file form: `date,site,turbidity_ntu,dumping,dredging,wind_knots`
/// with an empty turbidity field for missing entries. Only panels with the
/// standard three covariates can be written. Reading needs the site-group
/// classification, which the file does not carry.
std::string dataset_to_csv(const Dataset& data);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(const std::string& path,
                         const std::map<std::string, SiteGroup>& site_groups);

}  // namespace varch

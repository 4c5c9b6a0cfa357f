#include "varch/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "varch/errors.hpp"
#include "varch/io.hpp"

namespace varch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void parse_fail(const std::string& path, std::size_t row, const std::string& reason) {
  fail(ErrorKind::ParseError, path + " row " + std::to_string(row) + ": " + reason);
}

std::vector<std::string> data_lines(const std::string& path, const std::string& header) {
  std::vector<std::string> lines = split_lines(read_file(path));
  if (lines.empty()) fail(ErrorKind::EmptyFile, path + " is empty");
  if (lines[0] != header) {
    parse_fail(path, 1, "expected header '" + header + "', got '" + lines[0] + "'");
  }
  if (lines.size() == 1) fail(ErrorKind::EmptyFile, path + " has no data rows");
  return lines;
}

}  // namespace

std::vector<RawRecord> load_raw(const std::string& path) {
  const auto lines = data_lines(path, "timestamp,site,turbidity_ntu");
  std::vector<RawRecord> records;
  records.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    const std::size_t row = i + 1;
    if (fields.size() != 3) parse_fail(path, row, "expected 3 fields");
    RawRecord rec;
    try {
      rec.timestamp = parse_timestamp(fields[0]);
    } catch (const Error& e) {
      parse_fail(path, row, e.what());
    }
    rec.site = fields[1];
    if (rec.site.empty()) parse_fail(path, row, "empty site id");
    if (!parse_double(fields[2], rec.turbidity)) {
      parse_fail(path, row, "NonNumericValue: '" + fields[2] + "'");
    }
    if (rec.turbidity < 0.0) {
      parse_fail(path, row, "NegativeValue: " + fields[2]);
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) fail(ErrorKind::EmptyFile, path + " has no data rows");

  std::stable_sort(records.begin(), records.end(), [](const RawRecord& a, const RawRecord& b) {
    if (a.site != b.site) return a.site < b.site;
    if (a.timestamp.date.days != b.timestamp.date.days) {
      return a.timestamp.date.days < b.timestamp.date.days;
    }
    return a.timestamp.seconds_of_day < b.timestamp.seconds_of_day;
  });
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    if (a.site == b.site && a.timestamp.date.days == b.timestamp.date.days &&
        a.timestamp.seconds_of_day == b.timestamp.seconds_of_day) {
      fail(ErrorKind::ParseError,
           path + ": Duplicate reading for (" + b.site + ", " + format_date(b.timestamp.date) +
               ") at the same time of day");
    }
  }
  return records;
}

DailyPanel aggregate_daily(const std::vector<RawRecord>& records) {
  if (records.empty()) fail(ErrorKind::EmptyFile, "aggregate_daily: no records");

  std::set<std::string> site_set;
  std::int64_t d_min = records[0].timestamp.date.days;
  std::int64_t d_max = d_min;
  for (const auto& r : records) {
    site_set.insert(r.site);
    d_min = std::min(d_min, r.timestamp.date.days);
    d_max = std::max(d_max, r.timestamp.date.days);
  }

  DailyPanel panel;
  panel.sites.assign(site_set.begin(), site_set.end());
  const int s_len = static_cast<int>(panel.sites.size());
  const int t_len = static_cast<int>(d_max - d_min + 1);
  for (int t = 0; t < t_len; ++t) panel.dates.push_back(Date{d_min + t});

  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(t_len, s_len);
  Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(t_len, s_len);
  std::unordered_map<std::string, int> site_index;
  for (int s = 0; s < s_len; ++s) site_index[panel.sites[s]] = s;
  for (const auto& r : records) {
    const int t = static_cast<int>(r.timestamp.date.days - d_min);
    const int s = site_index.at(r.site);
    sums(t, s) += r.turbidity;
    counts(t, s) += 1;
  }

  panel.y = Eigen::MatrixXd::Constant(t_len, s_len, kNaN);
  panel.missing = BoolGrid::Constant(t_len, s_len, true);
  for (int t = 0; t < t_len; ++t) {
    for (int s = 0; s < s_len; ++s) {
      if (counts(t, s) > 0) {
        panel.y(t, s) = sums(t, s) / counts(t, s);
        panel.missing(t, s) = false;
      }
    }
  }
  return panel;
}

WindSeries load_wind(const std::string& path) {
  const auto lines = data_lines(path, "date,wind_knots");
  WindSeries wind;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    const std::size_t row = i + 1;
    if (fields.size() != 2) parse_fail(path, row, "expected 2 fields");
    try {
      wind.dates.push_back(parse_date(fields[0]));
    } catch (const Error& e) {
      parse_fail(path, row, e.what());
    }
    double knots = 0.0;
    if (!parse_double(fields[1], knots) || !std::isfinite(knots)) {
      parse_fail(path, row, "NonNumericValue: '" + fields[1] + "'");
    }
    wind.knots.push_back(knots);
  }
  if (wind.dates.empty()) fail(ErrorKind::EmptyFile, path + " has no data rows");
  return wind;
}

OperationsLog load_operations(const std::string& path) {
  const auto lines = data_lines(path, "date,operation");
  OperationsLog log;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    const std::size_t row = i + 1;
    if (fields.size() != 2) parse_fail(path, row, "expected 2 fields");
    try {
      log.dates.push_back(parse_date(fields[0]));
    } catch (const Error& e) {
      parse_fail(path, row, e.what());
    }
    if (fields[1] == "dredging") {
      log.operations.push_back(CovariateRole::Dredging);
    } else if (fields[1] == "dumping") {
      log.operations.push_back(CovariateRole::Dumping);
    } else {
      parse_fail(path, row, "operation must be 'dredging' or 'dumping', got '" + fields[1] + "'");
    }
  }
  return log;  // an empty log (header only) is legal: no operations happened
}

Dataset build_dataset(const DailyPanel& turbidity, const WindSeries& wind,
                      const OperationsLog& operations,
                      const std::map<std::string, SiteGroup>& site_groups) {
  if (turbidity.dates.empty() || wind.dates.empty()) {
    fail(ErrorKind::NoDateOverlap, "build_dataset: empty inputs");
  }
  const int s_len = static_cast<int>(turbidity.sites.size());
  for (const auto& site : turbidity.sites) {
    if (site_groups.find(site) == site_groups.end()) {
      fail(ErrorKind::UnclassifiedSite, "site '" + site + "' has no group classification");
    }
  }

  std::int64_t w_min = wind.dates[0].days, w_max = wind.dates[0].days;
  for (const auto& d : wind.dates) {
    w_min = std::min(w_min, d.days);
    w_max = std::max(w_max, d.days);
  }
  const std::int64_t lo = std::max(turbidity.dates.front().days, w_min);
  const std::int64_t hi = std::min(turbidity.dates.back().days, w_max);
  if (lo > hi) fail(ErrorKind::NoDateOverlap, "turbidity and wind dates do not overlap");
  const int t_len = static_cast<int>(hi - lo + 1);

  std::unordered_map<std::int64_t, double> wind_by_day;
  for (std::size_t i = 0; i < wind.dates.size(); ++i) wind_by_day[wind.dates[i].days] = wind.knots[i];

  Dataset data;
  data.site_names = turbidity.sites;
  for (const auto& site : turbidity.sites) data.site_groups.push_back(site_groups.at(site));
  for (int t = 0; t < t_len; ++t) data.dates.push_back(Date{lo + t});

  const int offset = static_cast<int>(lo - turbidity.dates.front().days);
  data.y = turbidity.y.middleRows(offset, t_len);
  data.missing = turbidity.missing.middleRows(offset, t_len);

  Eigen::MatrixXd dumping = Eigen::MatrixXd::Zero(t_len, s_len);
  Eigen::MatrixXd dredging = Eigen::MatrixXd::Zero(t_len, s_len);
  for (std::size_t i = 0; i < operations.dates.size(); ++i) {
    const std::int64_t day = operations.dates[i].days;
    if (day < lo || day > hi) continue;
    const int t = static_cast<int>(day - lo);
    const bool is_dump = operations.operations[i] == CovariateRole::Dumping;
    for (int s = 0; s < s_len; ++s) {
      const SiteGroup g = data.site_groups[s];
      if (is_dump && g == SiteGroup::Dump) dumping(t, s) = 1.0;
      if (!is_dump && g == SiteGroup::Dredging) dredging(t, s) = 1.0;
    }
  }

  Eigen::MatrixXd wind_x(t_len, s_len);
  for (int t = 0; t < t_len; ++t) {
    const auto it = wind_by_day.find(lo + t);
    if (it == wind_by_day.end()) {
      fail(ErrorKind::MissingCovariate,
           "wind has no reading on " + format_date(Date{lo + t}) + " inside the joined range");
    }
    wind_x.row(t).setConstant(it->second);
  }

  data.covariates = {std::move(dumping), std::move(dredging), std::move(wind_x)};
  data.covariate_roles = {CovariateRole::Dumping, CovariateRole::Dredging, CovariateRole::Wind};
  data.validate();
  return data;
}

std::string dataset_to_csv(const Dataset& data) {
  const std::vector<CovariateRole> expected = {CovariateRole::Dumping, CovariateRole::Dredging,
                                               CovariateRole::Wind};
  if (data.covariate_roles != expected) {
    fail(ErrorKind::ConstraintViolation,
         "dataset_to_csv: file schema requires the dumping, dredging, wind covariates");
  }
  std::string out = "date,site,turbidity_ntu,dumping,dredging,wind_knots\n";
  for (int t = 0; t < data.num_times(); ++t) {
    for (int s = 0; s < data.num_sites(); ++s) {
      out += format_date(data.dates[t]);
      out += ',';
      out += data.site_names[s];
      out += ',';
      if (!data.missing(t, s)) out += format_double(data.y(t, s));
      out += ',';
      out += format_double(data.covariates[0](t, s));
      out += ',';
      out += format_double(data.covariates[1](t, s));
      out += ',';
      out += format_double(data.covariates[2](t, s));
      out += '\n';
    }
  }
  return out;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  atomic_write_file(path, dataset_to_csv(data));
}

Dataset read_dataset_csv(const std::string& path,
                         const std::map<std::string, SiteGroup>& site_groups) {
  const auto lines = data_lines(path, "date,site,turbidity_ntu,dumping,dredging,wind_knots");

  struct Row {
    Date date;
    int site = 0;
    bool missing = false;
    double y = 0.0, dumping = 0.0, dredging = 0.0, wind = 0.0;
  };

  // First pass: collect site names and the date range.
  std::set<std::string> site_set;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (fields.size() != 6) parse_fail(path, i + 1, "expected 6 fields");
    site_set.insert(fields[1]);
  }
  std::vector<std::string> sites(site_set.begin(), site_set.end());
  std::unordered_map<std::string, int> site_index;
  for (std::size_t s = 0; s < sites.size(); ++s) site_index[sites[s]] = static_cast<int>(s);

  std::vector<Row> rows;
  std::int64_t d_min = 0, d_max = 0;
  bool first = true;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    const std::size_t rownum = i + 1;
    Row row;
    try {
      row.date = parse_date(fields[0]);
    } catch (const Error& e) {
      parse_fail(path, rownum, e.what());
    }
    row.site = site_index.at(fields[1]);
    if (fields[2].empty()) {
      row.missing = true;
    } else if (!parse_double(fields[2], row.y)) {
      parse_fail(path, rownum, "NonNumericValue: '" + fields[2] + "'");
    }
    if (!parse_double(fields[3], row.dumping) || !parse_double(fields[4], row.dredging) ||
        !parse_double(fields[5], row.wind)) {
      parse_fail(path, rownum, "non-numeric covariate");
    }
    if (first) {
      d_min = d_max = row.date.days;
      first = false;
    } else {
      d_min = std::min(d_min, row.date.days);
      d_max = std::max(d_max, row.date.days);
    }
    rows.push_back(row);
  }
  if (rows.empty()) fail(ErrorKind::EmptyFile, path + " has no data rows");

  const int t_len = static_cast<int>(d_max - d_min + 1);
  const int s_len = static_cast<int>(sites.size());
  Dataset data;
  data.site_names = sites;
  for (const auto& site : sites) {
    const auto it = site_groups.find(site);
    if (it == site_groups.end()) {
      fail(ErrorKind::UnclassifiedSite, "site '" + site + "' has no group classification");
    }
    data.site_groups.push_back(it->second);
  }
  for (int t = 0; t < t_len; ++t) data.dates.push_back(Date{d_min + t});
  data.y = Eigen::MatrixXd::Constant(t_len, s_len, kNaN);
  data.missing = BoolGrid::Constant(t_len, s_len, true);
  Eigen::MatrixXd dumping = Eigen::MatrixXd::Zero(t_len, s_len);
  Eigen::MatrixXd dredging = Eigen::MatrixXd::Zero(t_len, s_len);
  Eigen::MatrixXd wind = Eigen::MatrixXd::Zero(t_len, s_len);
  BoolGrid seen = BoolGrid::Constant(t_len, s_len, false);
  for (const auto& row : rows) {
    const int t = static_cast<int>(row.date.days - d_min);
    if (seen(t, row.site)) {
      fail(ErrorKind::ParseError, path + ": Duplicate row for (" + sites[row.site] + ", " +
                                      format_date(row.date) + ")");
    }
    seen(t, row.site) = true;
    if (!row.missing) {
      data.y(t, row.site) = row.y;
      data.missing(t, row.site) = false;
    }
    dumping(t, row.site) = row.dumping;
    dredging(t, row.site) = row.dredging;
    wind(t, row.site) = row.wind;
  }
  if (!seen.all()) {
    fail(ErrorKind::ParseError, path + ": grid has gaps (every date-site pair needs a row)");
  }
  data.covariates = {std::move(dumping), std::move(dredging), std::move(wind)};
  data.covariate_roles = {CovariateRole::Dumping, CovariateRole::Dredging, CovariateRole::Wind};
  data.validate();
  return data;
}

}  // namespace varch

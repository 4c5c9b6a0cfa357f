#include "varch/report.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "varch/errors.hpp"
#include "varch/io.hpp"

namespace varch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// NaN-aware CSV field: diagnostics that are undefined stay empty rather than
// serializing as a parseable number.
std::string num_field(double v) { return std::isnan(v) ? std::string() : format_double(v); }

}  // namespace

double FitReport::max_rhat() const {
  double out = kNaN;
  for (int i = 0; i < rhat.size(); ++i) {
    if (std::isnan(rhat[i])) continue;
    if (std::isnan(out) || rhat[i] > out) out = rhat[i];
  }
  return out;
}

int FitReport::total_divergences() const {
  int n = 0;
  for (const auto& t : telemetry) n += t.divergences;
  return n;
}

FitReport build_fit_report(const PosteriorDraws& draws, const ModelSpec& spec,
                           const Dataset& data, std::uint64_t seed) {
  if (draws.num_kept() < 2) {
    fail(ErrorKind::InsufficientDraws, "build_fit_report needs at least 2 kept draws");
  }
  FitReport report;
  report.variant = spec.variant;
  report.parameter_names = draws.names;
  report.telemetry = draws.telemetry;

  const int dim = draws.dim();
  report.rhat = Eigen::VectorXd::Constant(dim, kNaN);
  report.ess = Eigen::VectorXd::Constant(dim, kNaN);
  report.summaries.reserve(dim);
  for (int col = 0; col < dim; ++col) {
    const auto chains = draws.per_chain(col);
    try {
      report.rhat[col] = split_rhat(chains);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroVariance) throw;
    }
    try {
      report.ess[col] = ess(chains);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroVariance) throw;
    }
    report.summaries.push_back(summarize(draws.pooled(col)));
  }

  const Eigen::MatrixXd loglik = pointwise_loglik(draws, spec, data);
  report.waic = waic(loglik);
  report.looic = loo_ic(loglik);

  report.forecasts = one_step_forecast(draws, spec, data, seed);
  report.coverage = predictive_coverage(report.forecasts, data);

  // Posterior-mean Phi from the constrained view (identity transform there).
  const ParameterLayout layout(spec, data);
  Eigen::VectorXd mean_con = Eigen::VectorXd::Zero(dim);
  for (const auto& chain : draws.constrained) mean_con += chain.colwise().mean().transpose();
  mean_con /= static_cast<double>(draws.num_chains());
  const int s_len = layout.num_sites();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(s_len, s_len);
  if (layout.full_phi()) {
    for (int i = 0; i < s_len; ++i) {
      for (int j = 0; j < s_len; ++j) phi(i, j) = mean_con[layout.off_phi() + i * s_len + j];
    }
  } else {
    for (int s = 0; s < s_len; ++s) phi(s, s) = mean_con[layout.off_phi() + s];
  }
  report.spectral_radius = spectral_radius(phi);
  return report;
}

std::string report_to_json(const FitReport& report) {
  nlohmann::ordered_json j;
  j["variant"] = variant_name(report.variant);
  j["spectral_radius"] = report.spectral_radius;
  j["coverage"] = report.coverage;
  j["waic"] = {{"waic", report.waic.waic},
               {"se", report.waic.se},
               {"p_waic", report.waic.p_waic},
               {"lppd", report.waic.lppd}};
  double max_k = kNaN;
  for (int i = 0; i < report.looic.pareto_k.size(); ++i) {
    const double k = report.looic.pareto_k[i];
    if (std::isnan(k)) continue;
    if (std::isnan(max_k) || k > max_k) max_k = k;
  }
  j["looic"] = {{"looic", report.looic.looic},
                {"se", report.looic.se},
                {"elpd", report.looic.elpd},
                {"max_pareto_k", max_k},
                {"flagged_points", report.looic.flagged}};
  j["max_rhat"] = report.max_rhat();
  j["total_divergences"] = report.total_divergences();

  nlohmann::ordered_json params = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.parameter_names.size(); ++i) {
    const Summary& s = report.summaries[i];
    params.push_back({{"name", report.parameter_names[i]},
                      {"mean", s.mean},
                      {"sd", s.sd},
                      {"q2.5", s.q025},
                      {"q50", s.q50},
                      {"q97.5", s.q975},
                      {"rhat", report.rhat[static_cast<int>(i)]},
                      {"ess", report.ess[static_cast<int>(i)]}});
  }
  j["parameters"] = std::move(params);

  nlohmann::ordered_json chains = nlohmann::ordered_json::array();
  for (const auto& t : report.telemetry) {
    chains.push_back({{"divergences", t.divergences},
                      {"max_depth_hits", t.max_depth_hits},
                      {"step_size", t.step_size},
                      {"accept_rate", t.accept_rate}});
  }
  j["chains"] = std::move(chains);
  j["forecast_t0"] = report.forecasts.t0;
  return j.dump(2) + "\n";
}

void write_report_json(const FitReport& report, const std::string& path) {
  atomic_write_file(path, report_to_json(report));
}

void write_summary_csv(const FitReport& report, const std::string& path) {
  std::string out = "parameter,mean,sd,q2.5,q50,q97.5,rhat,ess\n";
  for (std::size_t i = 0; i < report.parameter_names.size(); ++i) {
    const Summary& s = report.summaries[i];
    out += report.parameter_names[i];
    out += ',' + format_double(s.mean) + ',' + format_double(s.sd) + ',' + format_double(s.q025) +
           ',' + format_double(s.q50) + ',' + format_double(s.q975);
    out += ',' + num_field(report.rhat[static_cast<int>(i)]);
    out += ',' + num_field(report.ess[static_cast<int>(i)]);
    out += '\n';
  }
  atomic_write_file(path, out);
}

void write_forecast_csv(const FitReport& report, const Dataset& data, const std::string& path) {
  const auto& fc = report.forecasts;
  if (fc.mean.rows() != data.num_times() || fc.mean.cols() != data.num_sites()) {
    fail(ErrorKind::LengthMismatch, "forecast grid does not match the dataset");
  }
  std::string out = "date,site,observed,forecast_mean,forecast_lo,forecast_hi\n";
  for (int t = fc.t0; t < data.num_times(); ++t) {
    for (int s = 0; s < data.num_sites(); ++s) {
      out += format_date(data.dates[t]);
      out += ',';
      out += data.site_names[s];
      out += ',';
      if (!data.missing(t, s)) out += format_double(data.y(t, s));
      out += ',' + format_double(fc.mean(t, s)) + ',' + format_double(fc.lo(t, s)) + ',' +
             format_double(fc.hi(t, s)) + '\n';
    }
  }
  atomic_write_file(path, out);
}

void write_draws_csv(const PosteriorDraws& draws, const std::string& path) {
  std::string out = "chain,iteration";
  for (const auto& name : draws.names) out += ',' + name;
  out += '\n';
  for (int c = 0; c < draws.num_chains(); ++c) {
    const Eigen::MatrixXd& m = draws.constrained[c];
    for (int d = 0; d < m.rows(); ++d) {
      out += std::to_string(c + 1) + ',' + std::to_string(d + 1);
      for (int k = 0; k < m.cols(); ++k) out += ',' + format_double(m(d, k));
      out += '\n';
    }
  }
  atomic_write_file(path, out);
}

PosteriorDraws read_draws_csv(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_file(path));
  if (lines.empty()) fail(ErrorKind::EmptyFile, path + " is empty");
  const auto header = split_csv(lines[0]);
  if (header.size() < 3 || header[0] != "chain" || header[1] != "iteration") {
    fail(ErrorKind::ParseError, path + ": expected header 'chain,iteration,<parameters...>'");
  }
  const int dim = static_cast<int>(header.size()) - 2;

  PosteriorDraws draws;
  draws.names.assign(header.begin() + 2, header.end());

  std::vector<std::vector<Eigen::VectorXd>> rows_by_chain;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_csv(lines[i]);
    if (static_cast<int>(fields.size()) != dim + 2) {
      fail(ErrorKind::ParseError, path + " row " + std::to_string(i + 1) + ": field count");
    }
    double chain_d = 0.0;
    if (!parse_double(fields[0], chain_d) || chain_d < 1.0) {
      fail(ErrorKind::ParseError, path + " row " + std::to_string(i + 1) + ": bad chain id");
    }
    const std::size_t chain = static_cast<std::size_t>(chain_d) - 1;
    if (chain >= rows_by_chain.size()) rows_by_chain.resize(chain + 1);
    Eigen::VectorXd row(dim);
    for (int k = 0; k < dim; ++k) {
      if (!parse_double(fields[k + 2], row[k])) {
        fail(ErrorKind::ParseError, path + " row " + std::to_string(i + 1) + ": bad value '" +
                                        fields[k + 2] + "'");
      }
    }
    rows_by_chain[chain].push_back(std::move(row));
  }
  if (rows_by_chain.empty()) fail(ErrorKind::EmptyFile, path + " has no draws");

  const std::size_t kept = rows_by_chain[0].size();
  for (const auto& rows : rows_by_chain) {
    if (rows.size() != kept || rows.empty()) {
      fail(ErrorKind::ParseError, path + ": chains have unequal draw counts");
    }
  }
  for (const auto& rows : rows_by_chain) {
    Eigen::MatrixXd m(static_cast<int>(rows.size()), dim);
    for (std::size_t d = 0; d < rows.size(); ++d) m.row(static_cast<int>(d)) = rows[d];
    draws.constrained.push_back(std::move(m));
  }
  draws.telemetry.resize(draws.constrained.size());
  return draws;
}

}  // namespace varch

// varch_cli: reproducible fitting, comparison, simulation, ingestion, and
// diagnostics runs driven by a JSON config. Every command writes a manifest
// (config hash, dataset hash, seed, version) so a run can be repeated
// exactly; all file writes are atomic.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "varch/dataset.hpp"
#include "varch/errors.hpp"
#include "varch/hmc.hpp"
#include "varch/io.hpp"
#include "varch/model.hpp"
#include "varch/pipeline.hpp"
#include "varch/posterior.hpp"
#include "varch/report.hpp"
#include "varch/simulate.hpp"

#ifndef VARCH_VERSION
#define VARCH_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace varch;

struct CliOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::optional<std::string> out;     // overrides output.dir
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::FileNotFound:
    case ErrorKind::ParseError:
    case ErrorKind::EmptyFile:
    case ErrorKind::NoDateOverlap:
    case ErrorKind::UnclassifiedSite:
    case ErrorKind::MissingCovariate:
    case ErrorKind::DatasetMismatch:
      return 2;
    default:
      return 3;
  }
}

json parse_config(const std::string& text, const std::string& path) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::ConfigError, path + ": " + e.what());
  }
}

// --- typed config accessors -------------------------------------------------

const json& require(const json& j, const std::string& key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::ConfigError, where + ": missing key '" + key + "'");
  return *it;
}

std::string require_string(const json& j, const std::string& key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) fail(ErrorKind::ConfigError, where + "." + key + " must be a string");
  return v.get<std::string>();
}

double number_or(const json& j, const std::string& key, double fallback,
                 const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) fail(ErrorKind::ConfigError, where + "." + key + " must be a number");
  return it->get<double>();
}

int int_or(const json& j, const std::string& key, int fallback, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer()) {
    fail(ErrorKind::ConfigError, where + "." + key + " must be an integer");
  }
  return it->get<int>();
}

std::uint64_t seed_or(const json& j, const std::string& key, std::uint64_t fallback,
                      const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_unsigned() && !it->is_number_integer()) {
    fail(ErrorKind::ConfigError, where + "." + key + " must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

Eigen::VectorXd vector_field(const json& j, const std::string& key, int expect,
                             const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array() || static_cast<int>(v.size()) != expect) {
    fail(ErrorKind::ConfigError,
         where + "." + key + " must be an array of " + std::to_string(expect) + " numbers");
  }
  Eigen::VectorXd out(expect);
  for (int i = 0; i < expect; ++i) out[i] = v[i].get<double>();
  return out;
}

Eigen::MatrixXd matrix_field(const json& j, const std::string& key, int rows, int cols,
                             const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array() || static_cast<int>(v.size()) != rows) {
    fail(ErrorKind::ConfigError,
         where + "." + key + " must be an array of " + std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      fail(ErrorKind::ConfigError, where + "." + key + " rows must have " +
                                       std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) out(i, k) = row[k].get<double>();
  }
  return out;
}

// --- config sections ----------------------------------------------------------

std::map<std::string, SiteGroup> parse_site_groups(const json& data) {
  const json& groups = require(data, "site_groups", "data");
  if (!groups.is_object()) fail(ErrorKind::ConfigError, "data.site_groups must be an object");
  std::map<std::string, SiteGroup> out;
  for (const auto& [site, name] : groups.items()) {
    if (!name.is_string()) {
      fail(ErrorKind::ConfigError, "data.site_groups entries must be strings");
    }
    out[site] = site_group_from_name(name.get<std::string>());
  }
  return out;
}

PriorConfig parse_priors(const json& config, int s_len) {
  PriorConfig priors;
  const auto it = config.find("priors");
  if (it == config.end()) return priors;
  const json& p = *it;
  if (!p.is_object()) fail(ErrorKind::ConfigError, "priors must be an object");
  priors.sd_intercept = number_or(p, "sd_intercept", priors.sd_intercept, "priors");
  priors.sd_beta_wind = number_or(p, "sd_beta_wind", priors.sd_beta_wind, "priors");
  priors.sd_effect_active = number_or(p, "sd_effect_active", priors.sd_effect_active, "priors");
  priors.sd_effect_inactive =
      number_or(p, "sd_effect_inactive", priors.sd_effect_inactive, "priors");
  priors.sd_phi_diag = number_or(p, "sd_phi_diag", priors.sd_phi_diag, "priors");
  priors.sd_phi_offdiag = number_or(p, "sd_phi_offdiag", priors.sd_phi_offdiag, "priors");
  priors.sd_theta1 = number_or(p, "sd_theta1", priors.sd_theta1, "priors");
  priors.theta2_a = number_or(p, "theta2_a", priors.theta2_a, "priors");
  priors.theta2_b = number_or(p, "theta2_b", priors.theta2_b, "priors");
  priors.nu = number_or(p, "nu", priors.nu, "priors");
  priors.missing_sd = number_or(p, "missing_sd", priors.missing_sd, "priors");
  priors.missing_lo = number_or(p, "missing_lo", priors.missing_lo, "priors");
  priors.missing_hi = number_or(p, "missing_hi", priors.missing_hi, "priors");
  if (p.contains("psi")) priors.psi = matrix_field(p, "psi", s_len, s_len, "priors");
  return priors;
}

SamplerConfig parse_sampler(const json& config, const CliOptions& cli) {
  SamplerConfig sampler;
  const auto it = config.find("sampler");
  if (it != config.end()) {
    const json& s = *it;
    if (!s.is_object()) fail(ErrorKind::ConfigError, "sampler must be an object");
    sampler.n_chains = int_or(s, "n_chains", sampler.n_chains, "sampler");
    sampler.n_iter = int_or(s, "n_iter", sampler.n_iter, "sampler");
    sampler.n_warmup = int_or(s, "n_warmup", sampler.n_warmup, "sampler");
    sampler.target_accept = number_or(s, "target_accept", sampler.target_accept, "sampler");
    sampler.max_leapfrog_steps =
        int_or(s, "max_leapfrog_steps", sampler.max_leapfrog_steps, "sampler");
    sampler.seed = seed_or(s, "seed", sampler.seed, "sampler");
  }
  if (cli.seed) sampler.seed = *cli.seed;
  sampler.validate();
  return sampler;
}

std::string output_dir(const json& config, const CliOptions& cli) {
  if (cli.out) return *cli.out;
  const auto it = config.find("output");
  if (it != config.end() && it->contains("dir")) {
    return require_string(*it, "dir", "output");
  }
  return ".";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_manifest(const std::string& dir, const std::string& command,
                    const std::string& config_text, const std::string& dataset_hash,
                    std::uint64_t seed, const std::string& variant) {
  nlohmann::ordered_json m;
  m["command"] = command;
  if (!variant.empty()) m["variant"] = variant;
  m["config_hash"] = hash_hex(fnv1a64(config_text));
  m["dataset_hash"] = dataset_hash;
  m["seed"] = seed;
  m["version"] = VARCH_VERSION;
  atomic_write_file(join_path(dir, "manifest.json"), m.dump(2) + "\n");
}

// --- parameter construction for simulate -------------------------------------

// Stable demo truth used when the config does not pin parameters: turbidity
// around 10 NTU, positive operation effects, mild wind effect, stable
// autoregression, moderate volatility.
ParameterSet demo_params(const ModelSpec& spec, int s_len) {
  const int p_len = static_cast<int>(spec.covariate_roles.size());
  ParameterSet params;
  params.intercept = Eigen::VectorXd::LinSpaced(s_len, 8.0, 8.0 + 0.5 * (s_len - 1));
  params.beta = Eigen::MatrixXd::Zero(p_len, s_len);
  for (int j = 0; j < p_len; ++j) {
    switch (spec.covariate_roles[j]) {
      case CovariateRole::Dumping: params.beta.row(j).setConstant(4.0); break;
      case CovariateRole::Dredging: params.beta.row(j).setConstant(2.5); break;
      case CovariateRole::Wind: params.beta.row(j).setConstant(0.08); break;
    }
  }
  if (spec.variant == Variant::Arch) {
    params.phi = (0.45 * Eigen::VectorXd::Ones(s_len)).asDiagonal();
  } else {
    params.phi = Eigen::MatrixXd::Constant(s_len, s_len, 0.03);
    params.phi.diagonal().setConstant(0.45);
  }
  params.theta1 = Eigen::VectorXd::LinSpaced(s_len, 2.0, 2.0 + 0.2 * (s_len - 1));
  params.theta2 = Eigen::VectorXd::Constant(s_len, 0.25);
  if (spec.variant == Variant::VarIw) {
    params.sigma = Eigen::MatrixXd::Constant(s_len, s_len, 0.5);
    params.sigma.diagonal().setConstant(2.0);
  } else {
    params.sigma = Eigen::MatrixXd::Identity(s_len, s_len);
  }
  params.y_missing = Eigen::VectorXd();
  return params;
}

ParameterSet parse_params(const json& sim, const ModelSpec& spec, int s_len) {
  ParameterSet params = demo_params(spec, s_len);
  const auto it = sim.find("params");
  if (it == sim.end()) return params;
  const json& p = *it;
  if (!p.is_object()) fail(ErrorKind::ConfigError, "simulate.params must be an object");
  const int p_len = static_cast<int>(spec.covariate_roles.size());
  if (p.contains("intercept")) params.intercept = vector_field(p, "intercept", s_len, "params");
  if (p.contains("beta")) params.beta = matrix_field(p, "beta", p_len, s_len, "params");
  if (p.contains("phi")) params.phi = matrix_field(p, "phi", s_len, s_len, "params");
  if (p.contains("theta1")) params.theta1 = vector_field(p, "theta1", s_len, "params");
  if (p.contains("theta2")) params.theta2 = vector_field(p, "theta2", s_len, "params");
  if (p.contains("sigma")) params.sigma = matrix_field(p, "sigma", s_len, s_len, "params");
  return params;
}

// --- commands ----------------------------------------------------------------

int cmd_fit(const CliOptions& cli) {
  const std::string config_text = read_file(cli.config_path);
  const json config = parse_config(config_text, cli.config_path);

  const json& data_cfg = require(config, "data", "config");
  const std::string dataset_path = require_string(data_cfg, "dataset", "data");
  const auto site_groups = parse_site_groups(data_cfg);
  const Dataset data = read_dataset_csv(dataset_path, site_groups);

  ModelSpec spec;
  const json& model_cfg = require(config, "model", "config");
  spec.variant = variant_from_name(require_string(model_cfg, "variant", "model"));
  spec.priors = parse_priors(config, data.num_sites());
  spec.priors.validate(data.num_sites());
  spec.covariate_roles = data.covariate_roles;

  const SamplerConfig sampler = parse_sampler(config, cli);
  const std::string dir = output_dir(config, cli);
  ensure_dir(dir);

  const PosteriorModel model(spec, data);
  const PosteriorDraws draws = run_chains(model, sampler);
  const FitReport report = build_fit_report(draws, spec, data, sampler.seed);

  write_draws_csv(draws, join_path(dir, "draws.csv"));
  write_report_json(report, join_path(dir, "report.json"));
  write_summary_csv(report, join_path(dir, "summary.csv"));
  write_forecast_csv(report, data, join_path(dir, "forecast.csv"));
  write_manifest(dir, "fit", config_text, file_hash_hex(dataset_path), sampler.seed,
                 variant_name(spec.variant));

  double min_rhat = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < report.rhat.size(); ++i) {
    if (std::isnan(report.rhat[i])) continue;
    if (std::isnan(min_rhat) || report.rhat[i] < min_rhat) min_rhat = report.rhat[i];
  }
  std::cout << "fit " << variant_name(spec.variant) << ": " << draws.num_chains() << " chains x "
            << draws.num_kept() << " kept draws\n"
            << "R-hat range: [" << format_double(min_rhat) << ", "
            << format_double(report.max_rhat()) << "]; divergences: "
            << report.total_divergences() << "\n"
            << "WAIC " << format_double(report.waic.waic) << " (se "
            << format_double(report.waic.se) << "); LOO-IC " << format_double(report.looic.looic)
            << " (se " << format_double(report.looic.se) << ")\n"
            << "spectral radius " << format_double(report.spectral_radius) << "; coverage "
            << format_double(report.coverage) << "\n";
  return 0;
}

int cmd_simulate(const CliOptions& cli) {
  const std::string config_text = read_file(cli.config_path);
  const json config = parse_config(config_text, cli.config_path);
  const json& sim = require(config, "simulate", "config");

  ModelSpec spec;
  spec.variant = variant_from_name(require_string(sim, "variant", "simulate"));
  const int s_len = int_or(sim, "n_sites", 0, "simulate");
  const int t_len = int_or(sim, "t_len", 0, "simulate");
  if (s_len < 2 || t_len < 3) {
    fail(ErrorKind::ConfigError, "simulate needs n_sites >= 2 and t_len >= 3");
  }
  std::uint64_t seed = seed_or(sim, "seed", 0, "simulate");
  if (cli.seed) seed = *cli.seed;

  std::vector<SiteGroup> groups = default_site_groups(s_len);
  if (sim.contains("site_groups")) {
    const json& g = sim["site_groups"];
    if (!g.is_array() || static_cast<int>(g.size()) != s_len) {
      fail(ErrorKind::ConfigError, "simulate.site_groups must list one group per site");
    }
    for (int s = 0; s < s_len; ++s) groups[s] = site_group_from_name(g[s].get<std::string>());
  }

  const ParameterSet params = parse_params(sim, spec, s_len);
  const auto covariates = demo_covariates(t_len, groups, seed + 1);
  Dataset data = simulate(spec, params, t_len, covariates, seed, groups);

  const double fraction = number_or(sim, "missing_fraction", 0.0, "simulate");
  if (fraction > 0.0) {
    data = inject_missing(data, MissingScheme::random_fraction(fraction), seed + 2);
  }
  if (sim.contains("missing_blocks")) {
    const json& blocks = sim["missing_blocks"];
    if (!blocks.is_array()) fail(ErrorKind::ConfigError, "simulate.missing_blocks: array");
    for (const auto& b : blocks) {
      const MissingScheme scheme = MissingScheme::block(
          int_or(b, "site", 0, "missing_blocks"), int_or(b, "start", 0, "missing_blocks"),
          int_or(b, "length", 0, "missing_blocks"));
      data = inject_missing(data, scheme, seed + 3);
    }
  }

  const std::string dir = output_dir(config, cli);
  ensure_dir(dir);
  std::string filename = "dataset.csv";
  const auto out_it = config.find("output");
  if (out_it != config.end() && out_it->contains("dataset")) {
    filename = require_string(*out_it, "dataset", "output");
  }
  const std::string path = join_path(dir, filename);
  write_dataset_csv(data, path);
  write_manifest(dir, "simulate", config_text, file_hash_hex(path), seed,
                 variant_name(spec.variant));
  std::cout << "simulated " << variant_name(spec.variant) << " panel: T=" << data.num_times()
            << " S=" << data.num_sites() << " missing=" << data.missing_count() << " -> " << path
            << "\n";
  return 0;
}

int cmd_ingest(const CliOptions& cli) {
  const std::string config_text = read_file(cli.config_path);
  const json config = parse_config(config_text, cli.config_path);
  const json& data_cfg = require(config, "data", "config");

  const std::string raw_path = require_string(data_cfg, "raw", "data");
  const std::string wind_path = require_string(data_cfg, "wind", "data");
  const std::string ops_path = require_string(data_cfg, "operations", "data");
  const auto site_groups = parse_site_groups(data_cfg);

  const DailyPanel panel = aggregate_daily(load_raw(raw_path));
  const WindSeries wind = load_wind(wind_path);
  const OperationsLog ops = load_operations(ops_path);
  const Dataset data = build_dataset(panel, wind, ops, site_groups);

  const std::string dir = output_dir(config, cli);
  ensure_dir(dir);
  std::string filename = "dataset.csv";
  const auto out_it = config.find("output");
  if (out_it != config.end() && out_it->contains("dataset")) {
    filename = require_string(*out_it, "dataset", "output");
  }
  const std::string path = join_path(dir, filename);
  write_dataset_csv(data, path);
  write_manifest(dir, "ingest", config_text, file_hash_hex(path), 0, "");
  std::cout << "ingested panel: T=" << data.num_times() << " S=" << data.num_sites()
            << " missing=" << data.missing_count() << " -> " << path << "\n";
  return 0;
}

int cmd_compare(const CliOptions& cli) {
  const std::string config_text = read_file(cli.config_path);
  const json config = parse_config(config_text, cli.config_path);
  const json& cmp = require(config, "compare", "config");
  const json& runs = require(cmp, "runs", "compare");
  if (!runs.is_array() || runs.size() < 2) {
    fail(ErrorKind::ConfigError, "compare.runs must list at least two fitted run directories");
  }

  struct Row {
    std::string model;
    double waic, waic_se, looic, looic_se, spectral_radius;
  };
  std::vector<Row> rows;
  std::string dataset_hash;
  for (const auto& entry : runs) {
    if (!entry.is_string()) fail(ErrorKind::ConfigError, "compare.runs entries must be paths");
    const std::string run_dir = entry.get<std::string>();
    const json manifest = parse_config(read_file(join_path(run_dir, "manifest.json")),
                                       join_path(run_dir, "manifest.json"));
    const std::string hash = require_string(manifest, "dataset_hash", "manifest");
    if (dataset_hash.empty()) {
      dataset_hash = hash;
    } else if (hash != dataset_hash) {
      fail(ErrorKind::DatasetMismatch,
           run_dir + " was fitted to a different dataset (hash " + hash + " != " + dataset_hash +
               ")");
    }
    const json report = parse_config(read_file(join_path(run_dir, "report.json")),
                                     join_path(run_dir, "report.json"));
    Row row;
    row.model = require_string(report, "variant", "report");
    const json& waic = require(report, "waic", "report");
    const json& looic = require(report, "looic", "report");
    row.waic = require(waic, "waic", "report.waic").get<double>();
    row.waic_se = require(waic, "se", "report.waic").get<double>();
    row.looic = require(looic, "looic", "report.looic").get<double>();
    row.looic_se = require(looic, "se", "report.looic").get<double>();
    row.spectral_radius = require(report, "spectral_radius", "report").get<double>();
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.waic < b.waic; });

  std::string table = "model,waic,waic_se,looic,looic_se,spectral_radius\n";
  for (const auto& r : rows) {
    table += r.model + ',' + format_double(r.waic) + ',' + format_double(r.waic_se) + ',' +
             format_double(r.looic) + ',' + format_double(r.looic_se) + ',' +
             format_double(r.spectral_radius) + '\n';
  }
  const std::string dir = output_dir(config, cli);
  ensure_dir(dir);
  atomic_write_file(join_path(dir, "comparison.csv"), table);
  write_manifest(dir, "compare", config_text, dataset_hash, 0, "");
  std::cout << table;
  return 0;
}

int cmd_diagnose(const CliOptions& cli) {
  const std::string config_text = read_file(cli.config_path);
  const json config = parse_config(config_text, cli.config_path);
  const json& diag = require(config, "diagnose", "config");
  const std::string draws_path = require_string(diag, "draws", "diagnose");

  const PosteriorDraws draws = read_draws_csv(draws_path);
  std::string table = "parameter,mean,sd,q2.5,q50,q97.5,rhat,ess\n";
  double max_rhat = std::numeric_limits<double>::quiet_NaN();
  double min_ess = std::numeric_limits<double>::quiet_NaN();
  for (int col = 0; col < draws.dim(); ++col) {
    const auto chains = draws.per_chain(col);
    double rhat = std::numeric_limits<double>::quiet_NaN();
    double col_ess = std::numeric_limits<double>::quiet_NaN();
    try {
      rhat = split_rhat(chains);
      col_ess = ess(chains);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ZeroVariance) throw;
    }
    const Summary s = summarize(draws.pooled(col));
    table += draws.names[col] + ',' + format_double(s.mean) + ',' + format_double(s.sd) + ',' +
             format_double(s.q025) + ',' + format_double(s.q50) + ',' + format_double(s.q975);
    table += ',' + (std::isnan(rhat) ? std::string() : format_double(rhat));
    table += ',' + (std::isnan(col_ess) ? std::string() : format_double(col_ess));
    table += '\n';
    if (!std::isnan(rhat) && (std::isnan(max_rhat) || rhat > max_rhat)) max_rhat = rhat;
    if (!std::isnan(col_ess) && (std::isnan(min_ess) || col_ess < min_ess)) min_ess = col_ess;
  }

  const std::string dir = output_dir(config, cli);
  ensure_dir(dir);
  atomic_write_file(join_path(dir, "diagnostics.csv"), table);
  write_manifest(dir, "diagnose", config_text, file_hash_hex(draws_path), 0, "");
  std::cout << "diagnosed " << draws.dim() << " parameters over " << draws.num_chains()
            << " chains\nmax R-hat: " << format_double(max_rhat)
            << "; min ESS: " << format_double(min_ess) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian vector time-series models of turbidity (ARCH / VAR_IW / VARCH / VARICH)"};
  app.require_subcommand(1);

  CliOptions cli;
  std::uint64_t seed_flag = 0;
  std::string out_flag;

  const std::vector<std::string> commands = {"fit", "compare", "simulate", "ingest", "diagnose"};
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", cli.config_path, "JSON config file")->required();
    sub->add_option("--seed", seed_flag, "override the config seed");
    sub->add_option("--out", out_flag, "override the output directory");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly, usage errors are config errors
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (subs[command]->count("--seed") > 0) cli.seed = seed_flag;
  if (subs[command]->count("--out") > 0) cli.out = out_flag;

  try {
    if (command == "fit") return cmd_fit(cli);
    if (command == "compare") return cmd_compare(cli);
    if (command == "simulate") return cmd_simulate(cli);
    if (command == "ingest") return cmd_ingest(cli);
    return cmd_diagnose(cli);
  } catch (const varch::Error& e) {
    nlohmann::ordered_json err;
    err["error"] = e.kind_name();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = "RuntimeError";
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 3;
  }
}

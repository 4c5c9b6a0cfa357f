#pragma once

// Shared fixtures for the unit suites: synthetic model problems, a
// finite-difference gradient, scratch directories, and a CLI runner.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varch/dataset.hpp"
#include "varch/model.hpp"
#include "varch/posterior.hpp"
#include "varch/simulate.hpp"

namespace testutil {

// Stable ground truth on the data scale: turbidity around 8-10 NTU, mild
// covariate effects, spectral radius of Phi well below 1.
inline varch::ParameterSet toy_truth(const varch::ModelSpec& spec, int s_len) {
  const int p_len = static_cast<int>(spec.covariate_roles.size());
  varch::ParameterSet params;
  params.intercept = Eigen::VectorXd::LinSpaced(s_len, 8.0, 8.0 + 0.6 * (s_len - 1));
  params.beta = Eigen::MatrixXd::Zero(p_len, s_len);
  for (int j = 0; j < p_len; ++j) {
    switch (spec.covariate_roles[j]) {
      case varch::CovariateRole::Dumping: params.beta.row(j).setConstant(4.0); break;
      case varch::CovariateRole::Dredging: params.beta.row(j).setConstant(2.5); break;
      case varch::CovariateRole::Wind: params.beta.row(j).setConstant(0.08); break;
    }
  }
  if (spec.variant == varch::Variant::Arch) {
    params.phi = (0.4 * Eigen::VectorXd::Ones(s_len)).asDiagonal();
  } else {
    params.phi = Eigen::MatrixXd::Constant(s_len, s_len, 0.05);
    params.phi.diagonal().setConstant(0.4);
  }
  params.theta1 = Eigen::VectorXd::LinSpaced(s_len, 2.0, 2.0 + 0.3 * (s_len - 1));
  params.theta2 = Eigen::VectorXd::Constant(s_len, 0.2);
  if (spec.variant == varch::Variant::VarIw) {
    params.sigma = Eigen::MatrixXd::Constant(s_len, s_len, 0.6);
    params.sigma.diagonal().setConstant(2.5);
  } else {
    params.sigma = Eigen::MatrixXd::Identity(s_len, s_len);
  }
  params.y_missing = Eigen::VectorXd();
  return params;
}

inline varch::ModelSpec toy_spec(varch::Variant variant) {
  varch::ModelSpec spec;
  spec.variant = variant;
  spec.covariate_roles = {varch::CovariateRole::Dumping, varch::CovariateRole::Dredging,
                          varch::CovariateRole::Wind};
  return spec;
}

// Simulated panel from the toy truth, optionally with random missingness.
inline varch::Dataset toy_dataset(const varch::ModelSpec& spec, int s_len, int t_len,
                                  double missing_fraction, std::uint64_t seed) {
  const auto groups = varch::default_site_groups(s_len);
  const auto covariates = varch::demo_covariates(t_len, groups, seed + 1);
  varch::Dataset data =
      varch::simulate(spec, toy_truth(spec, s_len), t_len, covariates, seed, groups);
  if (missing_fraction > 0.0) {
    data = varch::inject_missing(data, varch::MissingScheme::random_fraction(missing_fraction),
                                 seed + 2);
  }
  return data;
}

// Central finite differences of log_posterior, the reference for analytic
// gradients throughout the model tests.
inline Eigen::VectorXd fd_gradient(const varch::PosteriorModel& model, const Eigen::VectorXd& u,
                                   double step = 1e-5) {
  Eigen::VectorXd g(u.size());
  Eigen::VectorXd probe = u;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    probe[i] = u[i] + step;
    const double hi = model.log_posterior(probe);
    probe[i] = u[i] - step;
    const double lo = model.log_posterior(probe);
    probe[i] = u[i];
    g[i] = (hi - lo) / (2.0 * step);
  }
  return g;
}

// Worst relative mismatch between an analytic and a reference gradient,
// guarding the denominator for near-zero entries.
inline double max_rel_err(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    const double scale = std::max({std::abs(got[i]), std::abs(want[i]), 1.0});
    worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
  }
  return worst;
}

// Scratch directory unique to one test, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("varch_test_" + tag + "_" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs the installed CLI binary with output capture. `args` is everything
// after the binary name, already shell-quoted by the caller where needed.
inline CliResult run_cli(const std::string& args, const TempDir& scratch) {
  const std::string out_path = scratch.file("cli_stdout.txt");
  const std::string err_path = scratch.file("cli_stderr.txt");
  const std::string cmd =
      std::string(VARCH_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text(out_path);
  r.err = read_text(err_path);
  return r;
}

}  // namespace testutil

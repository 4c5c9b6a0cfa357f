#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "varch/target.hpp"

namespace varch {

struct SamplerConfig {
  int n_chains = 4;
  int n_iter = 1000;
  int n_warmup = 200;
  double target_accept = 0.8;
  int max_leapfrog_steps = 1024;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

struct ChainTelemetry {
  int divergences = 0;      // post-warmup divergent iterations
  int max_depth_hits = 0;   // post-warmup trajectories stopped by the step cap
  double step_size = 0.0;   // adapted leapfrog step size
  double accept_rate = 0.0; // mean acceptance statistic over kept iterations
};

/// Kept draws from all chains, in both coordinate systems. Matrices are
/// kept-iterations x dim, one per chain, merged in chain order.
struct PosteriorDraws {
  std::vector<std::string> names;              // constrained-view column names
  std::vector<Eigen::MatrixXd> unconstrained;
  std::vector<Eigen::MatrixXd> constrained;
  std::vector<ChainTelemetry> telemetry;

  int num_chains() const { return static_cast<int>(constrained.size()); }
  int num_kept() const {
    return constrained.empty() ? 0 : static_cast<int>(constrained[0].rows());
  }
  int dim() const { return constrained.empty() ? 0 : static_cast<int>(constrained[0].cols()); }

  /// All chains' kept draws of one constrained column, stacked chain-major.
  Eigen::VectorXd pooled(int column) const;
  /// Per-chain draw sequences of one constrained column.
  std::vector<Eigen::VectorXd> per_chain(int column) const;
  /// Column index of a named parameter, or -1.
  int column_of(const std::string& name) const;
};

struct LeapfrogResult {
  Eigen::VectorXd position;
  Eigen::VectorXd momentum;
  Eigen::VectorXd grad;   // gradient at the final position
  double value = 0.0;     // log density at the final position
  bool divergent = false; // Hamiltonian drifted by more than 1000 from the start
};

/// Plain leapfrog integration of n_steps with the given (diagonal) inverse
/// mass; pass an empty vector for the identity. Kinetic energy is
/// 0.5 * sum(inv_mass .* p^2).
LeapfrogResult leapfrog(const Target& target, const Eigen::VectorXd& position,
                        const Eigen::VectorXd& momentum, double step_size, int n_steps,
                        const Eigen::VectorXd& inv_mass = Eigen::VectorXd());

/// Runs config.n_chains independent dynamically-doubled Hamiltonian chains
/// (multinomial no-U-turn scheme). Warmup adapts the step size by dual
/// averaging toward target_accept and estimates a diagonal inverse mass from
/// the second half of warmup. Deterministic given (target, config): chains
/// draw from counter-split generator streams and are merged by index.
/// Throws AllInitializationsFailed if a chain finds no finite start in 100
/// attempts.
PosteriorDraws run_chains(const Target& target, const SamplerConfig& config);

}  // namespace varch

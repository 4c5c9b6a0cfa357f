#include "varch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "varch/errors.hpp"

namespace varch {

namespace {

// Half-chain views: first and last floor(len/2) draws of every chain (the
// middle draw of an odd-length chain is dropped).
std::vector<Eigen::VectorXd> split_halves(const std::vector<Eigen::VectorXd>& chains) {
  std::vector<Eigen::VectorXd> halves;
  halves.reserve(2 * chains.size());
  for (const auto& c : chains) {
    const Eigen::Index n = c.size() / 2;
    halves.push_back(c.head(n));
    halves.push_back(c.tail(n));
  }
  return halves;
}

double mean_of(const Eigen::VectorXd& x) { return x.mean(); }

double sample_var(const Eigen::VectorXd& x) {
  if (x.size() < 2) return 0.0;
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

}  // namespace

double split_rhat(const std::vector<Eigen::VectorXd>& chains) {
  if (chains.empty()) fail(ErrorKind::LengthMismatch, "split_rhat: no chains");
  for (const auto& c : chains) {
    if (c.size() < 2) fail(ErrorKind::InsufficientDraws, "split_rhat: need at least 2 draws per chain");
  }
  const auto halves = split_halves(chains);
  const int k = static_cast<int>(halves.size());
  const double n = static_cast<double>(halves[0].size());

  double w = 0.0;
  Eigen::VectorXd means(k);
  for (int j = 0; j < k; ++j) {
    means[j] = mean_of(halves[j]);
    w += sample_var(halves[j]);
  }
  w /= k;
  if (!(w > 0.0)) fail(ErrorKind::ZeroVariance, "split_rhat: zero within-chain variance");
  const double b_over_n = k > 1 ? sample_var(means) : 0.0;
  return std::sqrt(((n - 1.0) / n * w + b_over_n) / w);
}

double ess(const std::vector<Eigen::VectorXd>& chains) {
  if (chains.empty()) fail(ErrorKind::LengthMismatch, "ess: no chains");
  Eigen::Index n = chains[0].size();
  for (const auto& c : chains) n = std::min(n, c.size());
  if (n < 4) fail(ErrorKind::InsufficientDraws, "ess: need at least 4 draws per chain");
  const int k = static_cast<int>(chains.size());
  const int len = static_cast<int>(n);

  // Per-chain autocovariances (divisor n) up to lag len-1, computed lazily.
  std::vector<Eigen::VectorXd> centered;
  Eigen::VectorXd means(k);
  for (int j = 0; j < k; ++j) {
    means[j] = chains[j].head(len).mean();
    centered.push_back(chains[j].head(len).array() - means[j]);
  }
  auto acov = [&](int j, int t) {
    return centered[j].head(len - t).dot(centered[j].tail(len - t)) / static_cast<double>(len);
  };

  double w_unbiased = 0.0;
  for (int j = 0; j < k; ++j) w_unbiased += acov(j, 0) * len / (len - 1.0);
  w_unbiased /= k;
  const double b_over_n = k > 1 ? sample_var(means) : 0.0;
  const double var_plus = w_unbiased * (len - 1.0) / len + b_over_n;
  if (!(var_plus > 0.0)) fail(ErrorKind::ZeroVariance, "ess: zero draw variance");

  auto rho = [&](int t) {
    double m = 0.0;
    for (int j = 0; j < k; ++j) m += acov(j, t);
    m /= k;
    return 1.0 - (w_unbiased - m) / var_plus;
  };

  // Geyer: sum consecutive pairs while positive, enforcing monotone decrease.
  double tau = 0.0;
  double prev_pair = std::numeric_limits<double>::infinity();
  for (int t = 0; t + 1 < len; t += 2) {
    double pair = (t == 0 ? 1.0 : rho(t)) + rho(t + 1);
    if (pair <= 0.0) break;
    pair = std::min(pair, prev_pair);
    tau += 2.0 * pair;
    prev_pair = pair;
  }
  tau -= 1.0;  // the lag-0 term is counted once, not twice
  tau = std::max(tau, 1.0 / std::log10(static_cast<double>(k) * len + 10.0));
  return static_cast<double>(k) * len / tau;
}

double quantile(const Eigen::VectorXd& draws, double p) {
  if (draws.size() == 0) fail(ErrorKind::InsufficientDraws, "quantile of empty draws");
  std::vector<double> v(draws.data(), draws.data() + draws.size());
  std::sort(v.begin(), v.end());
  if (v.size() == 1) return v[0];
  const double h = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

Summary summarize(const Eigen::VectorXd& pooled_draws) {
  if (pooled_draws.size() == 0) fail(ErrorKind::InsufficientDraws, "summarize of empty draws");
  Summary s;
  s.mean = pooled_draws.mean();
  s.sd = std::sqrt(sample_var(pooled_draws));
  s.q025 = quantile(pooled_draws, 0.025);
  s.q50 = quantile(pooled_draws, 0.5);
  s.q975 = quantile(pooled_draws, 0.975);
  return s;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::LengthMismatch, "spectral_radius: matrix not square");
  if (m.size() == 0) return 0.0;
  const Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace varch

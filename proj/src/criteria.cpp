#include "varch/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "varch/errors.hpp"
#include "varch/kernel.hpp"

namespace varch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sample_var(const Eigen::VectorXd& x) {
  if (x.size() < 2) return 0.0;
  const double m = x.mean();
  return (x.array() - m).square().sum() / static_cast<double>(x.size() - 1);
}

double gpd_quantile(double p, double xi, double sigma) {
  if (std::abs(xi) < 1e-12) return -sigma * std::log1p(-p);
  return sigma / xi * (std::pow(1.0 - p, -xi) - 1.0);
}

}  // namespace

Eigen::MatrixXd pointwise_loglik(const PosteriorDraws& draws, const ModelSpec& spec,
                                 const Dataset& data) {
  const ParameterLayout layout(spec, data);
  if (draws.dim() != layout.dim() || draws.unconstrained.empty() ||
      draws.unconstrained[0].cols() != layout.dim()) {
    fail(ErrorKind::LengthMismatch, "pointwise_loglik: draws do not match the model layout");
  }
  const int t_len = data.num_times();
  const int s_len = data.num_sites();
  const int t0 = first_likelihood_time(spec.variant);
  const bool var_iw = spec.variant == Variant::VarIw;

  // Point index: (t, s) cells for diagonal variants, times for VAR_IW.
  std::vector<std::pair<int, int>> cells;          // diagonal variants
  std::vector<int> times;                          // VAR_IW
  std::vector<std::vector<int>> observed_at_time;  // VAR_IW site indices
  if (var_iw) {
    for (int t = t0; t < t_len; ++t) {
      std::vector<int> obs;
      for (int s = 0; s < s_len; ++s) {
        if (!data.missing(t, s)) obs.push_back(s);
      }
      if (!obs.empty()) {
        times.push_back(t);
        observed_at_time.push_back(std::move(obs));
      }
    }
  } else {
    for (int t = t0; t < t_len; ++t) {
      for (int s = 0; s < s_len; ++s) {
        if (!data.missing(t, s)) cells.emplace_back(t, s);
      }
    }
  }
  const int n_points = var_iw ? static_cast<int>(times.size()) : static_cast<int>(cells.size());

  const int n_draws = draws.num_chains() * draws.num_kept();
  Eigen::MatrixXd out(n_draws, n_points);
  int row = 0;
  for (int c = 0; c < draws.num_chains(); ++c) {
    for (int d = 0; d < draws.num_kept(); ++d, ++row) {
      const ParameterSet params = layout.unpack(draws.unconstrained[c].row(d).transpose());
      const Eigen::MatrixXd completed = complete_data(params, data);
      const ConditionalProfile prof =
          conditional_profile(params, spec, completed, data.covariates);
      if (var_iw) {
        // Cache the observed-pattern Cholesky factors for this draw.
        std::unordered_map<std::uint64_t, Eigen::MatrixXd> pattern_chol;
        for (int i = 0; i < n_points; ++i) {
          const int t = times[i];
          const auto& obs = observed_at_time[i];
          const int m = static_cast<int>(obs.size());
          std::uint64_t key = 0;
          for (int s : obs) key |= (std::uint64_t{1} << s);
          auto it = pattern_chol.find(key);
          if (it == pattern_chol.end()) {
            Eigen::MatrixXd sub(m, m);
            for (int a = 0; a < m; ++a) {
              for (int b = 0; b < m; ++b) sub(a, b) = params.sigma(obs[a], obs[b]);
            }
            it = pattern_chol.emplace(key, cholesky(SpdMatrix(sub)).matrix()).first;
          }
          Eigen::VectorXd e(m);
          for (int a = 0; a < m; ++a) e[a] = completed(t, obs[a]) - prof.mean(t - t0, obs[a]);
          const Eigen::VectorXd z = it->second.triangularView<Eigen::Lower>().solve(e);
          double log_det = 0.0;
          for (int a = 0; a < m; ++a) log_det += std::log(it->second(a, a));
          out(row, i) = -0.5 * m * kLogTwoPi - log_det - 0.5 * z.squaredNorm();
        }
      } else {
        for (int i = 0; i < n_points; ++i) {
          const auto& [t, s] = cells[i];
          out(row, i) = normal_logpdf(data.y(t, s), prof.mean(t - t0, s),
                                      std::sqrt(prof.var(t - t0, s)));
        }
      }
    }
  }
  return out;
}

WaicResult waic(const Eigen::MatrixXd& loglik) {
  const int n_draws = static_cast<int>(loglik.rows());
  const int n_points = static_cast<int>(loglik.cols());
  if (n_draws < 2) fail(ErrorKind::InsufficientDraws, "waic: need at least 2 draws");

  WaicResult res;
  Eigen::VectorXd elpd(n_points);
  const double log_d = std::log(static_cast<double>(n_draws));
  for (int i = 0; i < n_points; ++i) {
    // Grouped so a zero-variance column cancels exactly against the loo path.
    const double m = loglik.col(i).maxCoeff();
    const double lppd_i = (std::log((loglik.col(i).array() - m).exp().sum()) - log_d) + m;
    const double p_i = sample_var(loglik.col(i));
    res.lppd += lppd_i;
    res.p_waic += p_i;
    elpd[i] = lppd_i - p_i;
  }
  res.waic = -2.0 * elpd.sum();
  res.se = 2.0 * std::sqrt(static_cast<double>(n_points) * sample_var(elpd));
  return res;
}

LooResult loo_ic(const Eigen::MatrixXd& loglik, bool smooth) {
  const int n_draws = static_cast<int>(loglik.rows());
  const int n_points = static_cast<int>(loglik.cols());
  if (n_draws < 2) fail(ErrorKind::InsufficientDraws, "loo_ic: need at least 2 draws");

  LooResult res;
  res.pareto_k = Eigen::VectorXd::Constant(n_points, kNaN);
  Eigen::VectorXd elpd(n_points);
  const int tail = static_cast<int>(std::ceil(0.2 * n_draws));

  for (int i = 0; i < n_points; ++i) {
    // Raw importance weights exp(-loglik), normalized by the largest so the
    // linear-space values live in (0, 1].
    const Eigen::VectorXd lw = -loglik.col(i);
    const double lw_max = lw.maxCoeff();
    Eigen::VectorXd w = (lw.array() - lw_max).exp();

    if (smooth && tail >= 5) {
      std::vector<int> order(n_draws);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return w[a] < w[b]; });
      const double cut = w[order[n_draws - tail - 1]];
      Eigen::VectorXd exceed(tail);
      for (int j = 0; j < tail; ++j) exceed[j] = w[order[n_draws - tail + j]] - cut;
      const double m = exceed.mean();
      const double v = sample_var(exceed);
      if (m > 0.0 && v > 0.0) {
        const double ratio = m * m / v;
        const double xi = 0.5 * (1.0 - ratio);
        const double sigma = 0.5 * m * (1.0 + ratio);
        const double w_cap = w[order[n_draws - 1]];
        for (int j = 0; j < tail; ++j) {
          const double p = (j + 0.5) / tail;
          w[order[n_draws - tail + j]] = std::min(cut + gpd_quantile(p, xi, sigma), w_cap);
        }
        res.pareto_k[i] = xi;
        if (pareto_k_flagged(xi)) res.flagged.push_back(i);
      }
    }

    const double c = loglik.col(i).maxCoeff();
    const double num = (w.array() * (loglik.col(i).array() - c).exp()).sum();
    elpd[i] = std::log(num) - std::log(w.sum()) + c;
  }

  res.elpd = elpd.sum();
  res.looic = -2.0 * res.elpd;
  res.se = 2.0 * std::sqrt(static_cast<double>(n_points) * sample_var(elpd));
  return res;
}

}  // namespace varch

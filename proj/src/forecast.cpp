#include "varch/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "varch/errors.hpp"
#include "varch/kernel.hpp"
#include "varch/rng.hpp"

namespace varch {

ForecastResult one_step_forecast(const PosteriorDraws& draws, const ModelSpec& spec,
                                 const Dataset& data, std::uint64_t seed) {
  const ParameterLayout layout(spec, data);
  const int t_len = data.num_times();
  const int s_len = data.num_sites();
  const int t0 = first_likelihood_time(spec.variant);
  if (t_len <= t0) {
    fail(ErrorKind::TimeIndexOutOfRange, "one_step_forecast: panel too short for any forecast");
  }
  const int n = t_len - t0;
  const int n_draws = draws.num_chains() * draws.num_kept();
  if (n_draws < 1 || draws.dim() != layout.dim()) {
    fail(ErrorKind::LengthMismatch, "one_step_forecast: draws do not match the model layout");
  }
  // Top up thin posteriors with several predictive samples per draw so the
  // interval endpoints are not determined by a handful of values.
  const int reps = std::max(1, (2000 + n_draws - 1) / n_draws);

  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_draws) * reps,
                          static_cast<Eigen::Index>(n) * s_len);
  Eigen::MatrixXd mean_acc = Eigen::MatrixXd::Zero(n, s_len);
  Philox rng(seed);

  int row = 0;
  for (int c = 0; c < draws.num_chains(); ++c) {
    for (int d = 0; d < draws.num_kept(); ++d) {
      const ParameterSet params = layout.unpack(draws.unconstrained[c].row(d).transpose());
      const Eigen::MatrixXd completed = complete_data(params, data);
      const ConditionalProfile prof =
          conditional_profile(params, spec, completed, data.covariates);
      mean_acc += prof.mean;

      Eigen::MatrixXd chol;
      if (spec.variant == Variant::VarIw) chol = cholesky(SpdMatrix(params.sigma)).matrix();
      for (int rep = 0; rep < reps; ++rep, ++row) {
        for (int i = 0; i < n; ++i) {
          Eigen::VectorXd z(s_len);
          for (int s = 0; s < s_len; ++s) z[s] = rng.normal();
          Eigen::VectorXd y;
          if (spec.variant == Variant::VarIw) {
            y = prof.mean.row(i).transpose() + chol * z;
          } else {
            y = prof.mean.row(i).transpose() +
                (prof.var.row(i).transpose().array().sqrt() * z.array()).matrix();
          }
          samples.block(row, static_cast<Eigen::Index>(i) * s_len, 1, s_len) = y.transpose();
        }
      }
    }
  }

  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  ForecastResult out;
  out.t0 = t0;
  out.mean = Eigen::MatrixXd::Constant(t_len, s_len, nan);
  out.lo = Eigen::MatrixXd::Constant(t_len, s_len, nan);
  out.hi = Eigen::MatrixXd::Constant(t_len, s_len, nan);
  out.mean.middleRows(t0, n) = mean_acc / static_cast<double>(n_draws);

  std::vector<double> col(samples.rows());
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < s_len; ++s) {
      Eigen::VectorXd::Map(col.data(), samples.rows()) =
          samples.col(static_cast<Eigen::Index>(i) * s_len + s);
      std::sort(col.begin(), col.end());
      auto interp = [&](double p) {
        const double h = p * static_cast<double>(col.size() - 1);
        const auto lo_i = static_cast<std::size_t>(std::floor(h));
        const auto hi_i = std::min(lo_i + 1, col.size() - 1);
        return col[lo_i] + (h - static_cast<double>(lo_i)) * (col[hi_i] - col[lo_i]);
      };
      out.lo(t0 + i, s) = interp(0.025);
      out.hi(t0 + i, s) = interp(0.975);
    }
  }
  return out;
}

double predictive_coverage(const ForecastResult& forecast, const Dataset& data) {
  int covered = 0, total = 0;
  for (int t = forecast.t0; t < data.num_times(); ++t) {
    for (int s = 0; s < data.num_sites(); ++s) {
      if (data.missing(t, s)) continue;
      ++total;
      const double y = data.y(t, s);
      if (y >= forecast.lo(t, s) && y <= forecast.hi(t, s)) ++covered;
    }
  }
  return total > 0 ? static_cast<double>(covered) / total : 0.0;
}

}  // namespace varch

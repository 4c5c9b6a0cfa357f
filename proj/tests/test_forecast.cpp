#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "varch/errors.hpp"
#include "varch/forecast.hpp"
#include "varch/model.hpp"
#include "varch/simulate.hpp"

using namespace varch;

namespace {

// Single-draw container around one known parameter set.
PosteriorDraws single_draw(const ParameterLayout& layout, const ParameterSet& params,
                           int copies = 1) {
  PosteriorDraws draws;
  draws.names = layout.names();
  Eigen::MatrixXd m(copies, layout.dim());
  for (int i = 0; i < copies; ++i) m.row(i) = layout.pack(params).transpose();
  draws.unconstrained = {m};
  draws.constrained = {m};
  draws.telemetry.resize(1);
  return draws;
}

}  // namespace

TEST_SUITE("forecast") {

TEST_CASE("zero dynamics forecast the covariate level with a gaussian band") {
  // With phi = 0 and theta2 ~ 0 the predictive for every (t, s) is
  // N(A_s + x_ts . beta_s, theta1_s), independent of the history.
  const ModelSpec spec = testutil::toy_spec(Variant::Varch);
  const Dataset data = testutil::toy_dataset(spec, 2, 120, 0.0, 17);
  ParameterSet params = testutil::toy_truth(spec, 2);
  params.phi.setZero();
  params.theta1 << 4.0, 1.0;
  params.theta2 << 1e-12, 1e-12;
  const ParameterLayout layout(spec, data);
  const ForecastResult fc = one_step_forecast(single_draw(layout, params, 200), spec, data, 5);

  REQUIRE(fc.t0 == 1);
  REQUIRE(fc.mean.rows() == 120);
  for (int s = 0; s < 2; ++s) {
    CHECK(std::isnan(fc.mean(0, s)));
    const double halfwidth = 1.959964 * std::sqrt(params.theta1[s]);
    for (int t = 1; t < 120; ++t) {
      double level = params.intercept[s];
      for (int j = 0; j < data.num_covariates(); ++j) {
        level += data.covariates[j](t, s) * params.beta(j, s);
      }
      CHECK(fc.mean(t, s) == doctest::Approx(level).epsilon(1e-10));
      // Interval endpoints are sample quantiles of gaussian draws around the
      // level; with 200 identical parameter draws they sit near the normal
      // quantiles.
      CHECK(std::abs((fc.hi(t, s) - fc.lo(t, s)) / 2.0 - halfwidth) < 0.45 * halfwidth);
      CHECK(fc.lo(t, s) < fc.mean(t, s));
      CHECK(fc.hi(t, s) > fc.mean(t, s));
    }
  }
}

TEST_CASE("coverage counts interval hits among observed cells") {
  const ModelSpec spec = testutil::toy_spec(Variant::Arch);
  Dataset data = testutil::toy_dataset(spec, 2, 10, 0.0, 23);
  ForecastResult fc;
  fc.t0 = 1;
  fc.mean = Eigen::MatrixXd::Zero(10, 2);
  fc.lo = Eigen::MatrixXd::Constant(10, 2, -1e6);
  fc.hi = Eigen::MatrixXd::Constant(10, 2, 1e6);
  fc.lo.row(0).setConstant(std::numeric_limits<double>::quiet_NaN());
  fc.hi.row(0).setConstant(std::numeric_limits<double>::quiet_NaN());
  CHECK(predictive_coverage(fc, data) == 1.0);

  // Shrink the band to empty: nothing is covered.
  fc.lo.setConstant(1e6);
  fc.hi.setConstant(1e6 + 1.0);
  CHECK(predictive_coverage(fc, data) == 0.0);

  // Half the cells inside: site 0 covered, site 1 not.
  fc.lo.col(0).setConstant(-1e6);
  fc.hi.col(0).setConstant(1e6);
  CHECK(predictive_coverage(fc, data) == doctest::Approx(0.5).epsilon(1e-12));

  // Masked cells drop out of the denominator.
  data.missing(3, 1) = true;
  data.missing(4, 1) = true;
  const double n_obs = 9 * 2 - 2;
  CHECK(predictive_coverage(fc, data) == doctest::Approx(9.0 / n_obs).epsilon(1e-12));
}

TEST_CASE("well-specified simulation achieves near-nominal coverage") {
  const ModelSpec spec = testutil::toy_spec(Variant::Varch);
  const ParameterSet truth = testutil::toy_truth(spec, 3);
  const Dataset data = testutil::toy_dataset(spec, 3, 400, 0.0, 29);
  const ParameterLayout layout(spec, data);
  // Forecasting from the true parameters - the only error is predictive
  // noise, so hits should come in near 95%.
  const ForecastResult fc = one_step_forecast(single_draw(layout, truth, 400), spec, data, 31);
  const double cov = predictive_coverage(fc, data);
  CHECK(cov > 0.90);
  CHECK(cov < 0.99);
}

TEST_CASE("forecast ignores the date labels attached to rows") {
  const ModelSpec spec = testutil::toy_spec(Variant::Varich);
  Dataset data = testutil::toy_dataset(spec, 2, 40, 0.1, 37);
  const ParameterLayout layout(spec, data);
  ParameterSet params = testutil::toy_truth(spec, 2);
  params.y_missing = Eigen::VectorXd::Constant(layout.missing_count(), 8.0);

  Dataset relabeled = data;
  for (auto& d : relabeled.dates) d.days += 5000;

  const ForecastResult a = one_step_forecast(single_draw(layout, params, 50), spec, data, 7);
  const ForecastResult b =
      one_step_forecast(single_draw(layout, params, 50), spec, relabeled, 7);
  REQUIRE(a.t0 == 2);
  CHECK(a.mean == b.mean);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
}

TEST_CASE("panels too short to forecast raise TimeIndexOutOfRange") {
  const ModelSpec spec = testutil::toy_spec(Variant::Varich);
  // toy_dataset validates t_len >= 3; build a two-row panel directly.
  Dataset data = testutil::toy_dataset(spec, 2, 3, 0.0, 41);
  data.y.conservativeResize(2, 2);
  data.missing.conservativeResize(2, 2);
  for (auto& c : data.covariates) c.conservativeResize(2, 2);
  data.dates.resize(2);
  const ParameterLayout layout(spec, data);
  const PosteriorDraws draws = single_draw(layout, testutil::toy_truth(spec, 2), 3);
  try {
    one_step_forecast(draws, spec, data, 1);
    FAIL("expected TimeIndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TimeIndexOutOfRange);
  }
}

}  // TEST_SUITE

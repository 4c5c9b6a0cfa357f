#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "helpers.hpp"
#include "varch/diagnostics.hpp"
#include "varch/errors.hpp"
#include "varch/hmc.hpp"
#include "varch/target.hpp"

using namespace varch;

namespace {

class StdNormalTarget : public Target {
 public:
  explicit StdNormalTarget(int dim) : dim_(dim) {}
  int dim() const override { return dim_; }
  double value_and_grad(const Eigen::VectorXd& u, Eigen::VectorXd& grad) const override {
    grad = -u;
    return -0.5 * u.squaredNorm();
  }

 private:
  int dim_;
};

// Zero-mean gaussian with a dense precision matrix.
class GaussianTarget : public Target {
 public:
  explicit GaussianTarget(Eigen::MatrixXd precision) : prec_(std::move(precision)) {}
  int dim() const override { return static_cast<int>(prec_.rows()); }
  double value_and_grad(const Eigen::VectorXd& u, Eigen::VectorXd& grad) const override {
    grad = -(prec_ * u);
    return -0.5 * u.dot(prec_ * u);
  }

 private:
  Eigen::MatrixXd prec_;
};

double pooled_var(const PosteriorDraws& draws, int col) {
  const Eigen::VectorXd x = draws.pooled(col);
  const double m = x.mean();
  return (x.array() - m).square().sum() / (x.size() - 1);
}

}  // namespace

TEST_SUITE("hmc") {

TEST_CASE("leapfrog on the harmonic oscillator returns after one period") {
  // For H = u^2/2 + p^2/2 the exact flow is a rotation with period 2*pi; the
  // integrator's phase error per period is O(step^2).
  StdNormalTarget target(1);
  Eigen::VectorXd q(1), p(1);
  q << 1.3;
  p << -0.4;
  const double step = 1e-3;
  const int n = static_cast<int>(std::llround(2.0 * std::numbers::pi / step));
  const LeapfrogResult end = leapfrog(target, q, p, step, n);
  CHECK(end.divergent == false);
  CHECK(end.position[0] == doctest::Approx(q[0]).epsilon(1e-4));
  CHECK(end.momentum[0] == doctest::Approx(p[0]).epsilon(1e-4));
  // Half a period later the state is mirrored.
  const LeapfrogResult half = leapfrog(target, q, p, step, n / 2);
  CHECK(half.position[0] == doctest::Approx(-q[0]).epsilon(1e-4));
  CHECK(half.momentum[0] == doctest::Approx(-p[0]).epsilon(1e-4));
}

TEST_CASE("leapfrog is time reversible") {
  Eigen::Matrix3d prec;
  prec << 2.0, 0.4, -0.1, 0.4, 1.5, 0.3, -0.1, 0.3, 1.1;
  GaussianTarget target(prec);
  Eigen::VectorXd q(3), p(3);
  q << 0.9, -1.4, 0.2;
  p << 0.5, 0.1, -1.2;
  Eigen::VectorXd inv_mass(3);
  inv_mass << 1.0, 0.7, 1.4;

  const LeapfrogResult fwd = leapfrog(target, q, p, 0.05, 60, inv_mass);
  const LeapfrogResult back = leapfrog(target, fwd.position, -fwd.momentum, 0.05, 60, inv_mass);
  CHECK((back.position - q).lpNorm<Eigen::Infinity>() < 1e-8);
  CHECK((-back.momentum - p).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("a mode with zero momentum is a fixed point") {
  StdNormalTarget target(4);
  const Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
  const Eigen::VectorXd p = Eigen::VectorXd::Zero(4);
  const LeapfrogResult end = leapfrog(target, q, p, 0.2, 25);
  CHECK(end.position.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(end.momentum.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(end.value == 0.0);
}

TEST_CASE("sampling is deterministic for a fixed seed and differs across seeds") {
  StdNormalTarget target(3);
  SamplerConfig config;
  config.n_chains = 2;
  config.n_iter = 120;
  config.n_warmup = 60;
  config.seed = 99;
  const PosteriorDraws first = run_chains(target, config);
  const PosteriorDraws second = run_chains(target, config);
  REQUIRE(first.num_chains() == 2);
  for (int c = 0; c < 2; ++c) {
    CHECK(first.constrained[c] == second.constrained[c]);
    CHECK(first.unconstrained[c] == second.unconstrained[c]);
    CHECK(first.telemetry[c].step_size == second.telemetry[c].step_size);
  }
  config.seed = 100;
  const PosteriorDraws other = run_chains(target, config);
  CHECK(first.constrained[0] != other.constrained[0]);
}

TEST_CASE("five-dimensional standard normal is sampled calibrated") {
  StdNormalTarget target(5);
  SamplerConfig config;
  config.n_chains = 4;
  config.n_iter = 1000;
  config.n_warmup = 200;
  config.seed = 2024;
  const PosteriorDraws draws = run_chains(target, config);
  REQUIRE(draws.num_kept() == 800);
  REQUIRE(draws.dim() == 5);

  int divergences = 0;
  for (const ChainTelemetry& t : draws.telemetry) divergences += t.divergences;
  CHECK(divergences == 0);

  for (int col = 0; col < 5; ++col) {
    const Eigen::VectorXd pooled = draws.pooled(col);
    REQUIRE(pooled.allFinite());
    const std::vector<Eigen::VectorXd> chains = draws.per_chain(col);
    const double e = ess(chains);
    const double var = pooled_var(draws, col);
    const double mcse = std::sqrt(var / e);
    CHECK(std::abs(pooled.mean()) < 3.0 * mcse);
    CHECK(var > 0.8);
    CHECK(var < 1.2);
    CHECK(split_rhat(chains) < 1.01);
  }
}

TEST_CASE("strongly correlated gaussian recovers its correlation") {
  Eigen::Matrix2d cov;
  cov << 1.0, 0.9, 0.9, 1.0;
  GaussianTarget target(cov.inverse());
  SamplerConfig config;
  config.n_chains = 4;
  config.n_iter = 1000;
  config.n_warmup = 200;
  config.seed = 7;
  const PosteriorDraws draws = run_chains(target, config);
  const Eigen::VectorXd x = draws.pooled(0);
  const Eigen::VectorXd y = draws.pooled(1);
  const double mx = x.mean(), my = y.mean();
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  const double sxx = (x.array() - mx).square().sum();
  const double syy = (y.array() - my).square().sum();
  const double corr = sxy / std::sqrt(sxx * syy);
  CHECK(std::abs(corr - 0.9) < 0.05);
}

TEST_CASE("adaptation lands near the acceptance target") {
  StdNormalTarget target(10);
  SamplerConfig config;
  config.n_chains = 2;
  config.n_iter = 600;
  config.n_warmup = 300;
  config.target_accept = 0.8;
  config.seed = 31;
  const PosteriorDraws draws = run_chains(target, config);
  for (const ChainTelemetry& t : draws.telemetry) {
    CHECK(t.step_size > 0.0);
    CHECK(t.accept_rate > 0.6);
    CHECK(t.accept_rate <= 1.0);
    CHECK(t.divergences == 0);
  }
}

TEST_CASE("draw containers are consistent") {
  StdNormalTarget target(3);
  SamplerConfig config;
  config.n_chains = 2;
  config.n_iter = 80;
  config.n_warmup = 40;
  config.seed = 5;
  const PosteriorDraws draws = run_chains(target, config);
  CHECK(draws.names == std::vector<std::string>({"p.1", "p.2", "p.3"}));
  CHECK(draws.column_of("p.2") == 1);
  CHECK(draws.column_of("nope") == -1);
  // The identity constraint map keeps both views equal.
  for (int c = 0; c < draws.num_chains(); ++c) {
    CHECK(draws.constrained[c] == draws.unconstrained[c]);
  }
  // pooled() stacks chains in order.
  const Eigen::VectorXd pooled = draws.pooled(0);
  REQUIRE(pooled.size() == 80);
  CHECK(pooled.head(40) == draws.constrained[0].col(0));
  CHECK(pooled.tail(40) == draws.constrained[1].col(0));
}

TEST_CASE("configuration validation rejects bad settings") {
  SamplerConfig config;
  config.n_iter = 100;
  config.n_warmup = 100;
  CHECK_THROWS_AS(config.validate(), Error);
  config.n_warmup = 150;
  CHECK_THROWS_AS(config.validate(), Error);
  config.n_warmup = 50;
  config.n_chains = 0;
  CHECK_THROWS_AS(config.validate(), Error);
  config.n_chains = 2;
  config.target_accept = 1.0;
  CHECK_THROWS_AS(config.validate(), Error);
  config.target_accept = 0.8;
  CHECK_NOTHROW(config.validate());
  try {
    config.n_warmup = 200;
    config.n_iter = 100;
    config.validate();
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
  }
}

}  // TEST_SUITE

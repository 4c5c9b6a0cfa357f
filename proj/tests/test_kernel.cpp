#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "varch/errors.hpp"
#include "varch/kernel.hpp"
#include "varch/rng.hpp"

// Frozen constants in this file come from 40-digit evaluations of the
// standard closed forms (bivariate-normal inverse, inverse-gamma density,
// erf-based normal CDF), printed to 20 significant digits.

using namespace varch;

namespace {

Eigen::MatrixXd random_spd(int dim, Philox& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
  return a * a.transpose() + dim * Eigen::MatrixXd::Identity(dim, dim);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("cholesky of the identity is the identity") {
  const SpdMatrix s{Eigen::MatrixXd::Identity(3, 3)};
  const LowerTriangular l = cholesky(s);
  CHECK((l.entries - Eigen::MatrixXd::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("cholesky known 2x2 factor") {
  Eigen::MatrixXd s(2, 2);
  s << 4, 2, 2, 3;
  const LowerTriangular l = cholesky(SpdMatrix{s});
  CHECK(l.entries(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(l.entries(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(l.entries(0, 1) == 0.0);
  CHECK(l.entries(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK((l.entries * l.entries.transpose() - s).norm() < 1e-12);
}

TEST_CASE("cholesky rejects an indefinite matrix") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 2, 2, 1;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(cholesky(SpdMatrix{s}), Error);
  try {
    cholesky(SpdMatrix{s});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
}

TEST_CASE("cholesky reconstructs 1000 random SPD matrices") {
  Philox rng(17, 0);
  for (int rep = 0; rep < 1000; ++rep) {
    const int dim = 1 + static_cast<int>(rng.below(6));
    const Eigen::MatrixXd s = random_spd(dim, rng);
    const LowerTriangular l = cholesky(SpdMatrix{s});
    const double rel = (l.entries * l.entries.transpose() - s).norm() / s.norm();
    REQUIRE(rel < 1e-10);
    for (int i = 0; i < dim; ++i) {
      REQUIRE(l.entries(i, i) > 0.0);
      for (int j = i + 1; j < dim; ++j) REQUIRE(l.entries(i, j) == 0.0);
    }
  }
}

TEST_CASE("mvn_logpdf at the mean with identity covariance") {
  const Eigen::Vector2d y(0.0, 0.0);
  CHECK(mvn_logpdf(y, y, SpdMatrix{Eigen::MatrixXd::Identity(2, 2)}) ==
        doctest::Approx(-1.8378770664093454836).epsilon(1e-14));
}

TEST_CASE("mvn_logpdf with diagonal covariance is the sum of univariate terms") {
  const Eigen::Vector2d y(1.0, 2.0);
  const Eigen::Vector2d mu(0.0, 0.0);
  Eigen::MatrixXd sigma = Eigen::Vector2d(1.0, 4.0).asDiagonal();
  CHECK(mvn_logpdf(y, mu, SpdMatrix{sigma}) ==
        doctest::Approx(-3.531024246969290793).epsilon(1e-14));

  Philox rng(4, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const int dim = 1 + static_cast<int>(rng.below(5));
    Eigen::VectorXd yv(dim), mv(dim), var(dim);
    for (int i = 0; i < dim; ++i) {
      yv[i] = 3.0 * rng.normal();
      mv[i] = 3.0 * rng.normal();
      var[i] = 0.1 + 4.0 * rng.uniform();
    }
    double want = 0.0;
    for (int i = 0; i < dim; ++i) want += normal_logpdf(yv[i], mv[i], std::sqrt(var[i]));
    const Eigen::MatrixXd sig = var.asDiagonal();
    REQUIRE(mvn_logpdf(yv, mv, SpdMatrix{sig}) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("mvn_logpdf matches the explicit bivariate inverse formula") {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2, 1, 1, 2;
  const Eigen::Vector2d y(1.0, 0.0);
  const Eigen::Vector2d mu(0.0, 0.0);
  CHECK(mvn_logpdf(y, mu, SpdMatrix{sigma}) ==
        doctest::Approx(-2.7205165440767336626).epsilon(1e-14));
  // Same answer through the pre-factored overload.
  CHECK(mvn_logpdf(y, mu, cholesky(SpdMatrix{sigma})) ==
        doctest::Approx(-2.7205165440767336626).epsilon(1e-14));
}

TEST_CASE("mvn_logpdf integrates to one on 1-D and 2-D grids") {
  // 1-D: N(0.3, 1.44) over [-10, 10].
  {
    const Eigen::VectorXd mu = Eigen::VectorXd::Constant(1, 0.3);
    const Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(1, 1, 1.44);
    const double h = 0.002;
    double total = 0.0;
    for (double x = -10.0; x <= 10.0; x += h) {
      total += h * std::exp(mvn_logpdf(Eigen::VectorXd::Constant(1, x), mu, SpdMatrix{sigma}));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(5e-5));
  }
  // 2-D: correlated covariance over [-8, 8]^2.
  {
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, 0.6, 0.6, 2.0;
    const LowerTriangular l = cholesky(SpdMatrix{sigma});
    const Eigen::Vector2d mu(0.0, 0.0);
    const double h = 0.02;
    double total = 0.0;
    Eigen::Vector2d y;
    for (double a = -8.0; a <= 8.0; a += h) {
      y[0] = a;
      double row = 0.0;
      for (double b = -8.0; b <= 8.0; b += h) {
        y[1] = b;
        row += std::exp(mvn_logpdf(y, mu, l));
      }
      total += h * h * row;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(5e-5));
  }
}

TEST_CASE("inv_wishart_logpdf 1x1 equals the inverse-gamma density") {
  // IW(psi=1, nu=3) in one dimension is InvGamma(shape 1.5, scale 0.5).
  const SpdMatrix one{Eigen::MatrixXd::Constant(1, 1, 1.0)};
  const SpdMatrix half{Eigen::MatrixXd::Constant(1, 1, 0.5)};
  CHECK(inv_wishart_logpdf(half, one, 3.0) ==
        doctest::Approx(-0.18607058180480946824).epsilon(1e-14));
}

TEST_CASE("inv_wishart_logpdf rejects nu at or below dim - 1") {
  const SpdMatrix eye{Eigen::MatrixXd::Identity(2, 2)};
  CHECK_THROWS_AS(inv_wishart_logpdf(eye, eye, 1.0), Error);
  try {
    inv_wishart_logpdf(eye, eye, 1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDegreesOfFreedom);
  }
}

TEST_CASE("inv_wishart_logpdf matches high-precision references") {
  const SpdMatrix eye{Eigen::MatrixXd::Identity(2, 2)};
  CHECK(inv_wishart_logpdf(eye, eye, 14.0) ==
        doctest::Approx(-23.518238742631176942).epsilon(1e-13));

  Eigen::MatrixXd psi(2, 2), sigma(2, 2);
  psi << 2.0, 0.5, 0.5, 1.0;
  sigma << 1.0, 0.3, 0.3, 2.0;
  CHECK(inv_wishart_logpdf(SpdMatrix{sigma}, SpdMatrix{psi}, 5.0) ==
        doctest::Approx(-6.7425237067395399686).epsilon(1e-13));
}

TEST_CASE("inv_wishart_logpdf 1x1 integrates to one") {
  // Substituting x = e^u turns the positive axis into a plain line integral.
  const SpdMatrix psi{Eigen::MatrixXd::Constant(1, 1, 1.0)};
  const double h = 0.001;
  double total = 0.0;
  for (double u = -12.0; u <= 10.0; u += h) {
    const double x = std::exp(u);
    const SpdMatrix sx{Eigen::MatrixXd::Constant(1, 1, x)};
    total += h * x * std::exp(inv_wishart_logpdf(sx, psi, 3.0));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(5e-5));
}

TEST_CASE("trunc_normal_logpdf half-normal doubles the density") {
  CHECK(trunc_normal_logpdf(0.5, 0.0, 1.0, 0.0, std::numeric_limits<double>::infinity()) ==
        doctest::Approx(-0.35079135264472743236).epsilon(1e-14));
}

TEST_CASE("trunc_normal_logpdf rejects points outside the support") {
  CHECK_THROWS_AS(
      trunc_normal_logpdf(-1.0, 0.0, 1.0, 0.0, std::numeric_limits<double>::infinity()), Error);
  try {
    trunc_normal_logpdf(-1.0, 0.0, 1.0, 0.0, std::numeric_limits<double>::infinity());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfSupport);
  }
}

TEST_CASE("trunc_normal_logpdf matches the CDF-normalized references") {
  CHECK(trunc_normal_logpdf(50.0, 0.0, 50.0, 0.0, 100.0) ==
        doctest::Approx(-4.5912464457804833274).epsilon(1e-14));
  CHECK(trunc_normal_logpdf(2.5, 1.0, 2.0, 0.5, 6.0) ==
        doctest::Approx(-1.3699256712478610194).epsilon(1e-14));
}

TEST_CASE("trunc_normal_logpdf integrates to one over its interval") {
  const double h = 1e-4;
  double total = 0.0;
  for (double x = 0.5 + h / 2; x < 6.0; x += h) {
    total += h * std::exp(trunc_normal_logpdf(x, 1.0, 2.0, 0.5, 6.0));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(5e-5));
}

TEST_CASE("beta_logpdf anchors") {
  // Beta(1,5) density is 5(1-x)^4.
  CHECK(beta_logpdf(0.1, 1.0, 5.0) == doctest::Approx(1.1879958498027951697).epsilon(1e-14));
  CHECK(beta_logpdf(0.1, 1.0, 5.0) ==
        doctest::Approx(std::log(5.0 * std::pow(0.9, 4))).epsilon(1e-14));
  CHECK(beta_logpdf(0.3, 1.0, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(beta_logpdf(0.37, 2.5, 3.5) == doctest::Approx(0.65536821095485552395).epsilon(1e-14));
}

TEST_CASE("beta_logpdf rejects points outside (0,1)") {
  CHECK_THROWS_AS(beta_logpdf(1.2, 1.0, 5.0), Error);
  CHECK_THROWS_AS(beta_logpdf(0.0, 1.0, 5.0), Error);
  try {
    beta_logpdf(1.2, 1.0, 5.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfSupport);
  }
}

TEST_CASE("beta_logpdf integrates to one") {
  const double h = 1e-5;
  double total = 0.0;
  for (double x = h / 2; x < 1.0; x += h) total += h * std::exp(beta_logpdf(x, 2.5, 3.5));
  CHECK(total == doctest::Approx(1.0).epsilon(5e-5));
}

TEST_CASE("normal_cdf matches erf-based references") {
  CHECK(normal_cdf(1.96) == doctest::Approx(0.97500210485177956586).epsilon(1e-14));
  CHECK(normal_cdf(-3.0) == doctest::Approx(0.0013498980316300945267).epsilon(1e-14));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normal_cdf_diff survives far-tail cancellation") {
  CHECK(normal_cdf_diff(-1.0, 1.0) == doctest::Approx(0.68268949213708589717).epsilon(1e-14));
  // Naive cdf(9) - cdf(8) loses all precision; the difference form keeps it.
  // Approx's absolute scale term would pass any tiny value, so compare ratios.
  CHECK(std::abs(normal_cdf_diff(8.0, 9.0) / 6.2198319858658302829e-16 - 1.0) < 1e-12);
  CHECK(std::abs(normal_cdf_diff(-9.0, -8.0) / 6.2198319858658302829e-16 - 1.0) < 1e-12);
}

TEST_CASE("log_multivariate_gamma anchors") {
  CHECK(log_multivariate_gamma(1, 4.5) == doctest::Approx(std::lgamma(4.5)).epsilon(1e-14));
  CHECK(log_multivariate_gamma(3, 7.2) ==
        doctest::Approx(19.830675526371818389).epsilon(1e-14));
}

TEST_CASE("normal_logpdf matches the closed form") {
  CHECK(normal_logpdf(1.3, 0.4, 2.2) == doctest::Approx(-1.7910735795193561344).epsilon(1e-14));
}

}  // TEST_SUITE

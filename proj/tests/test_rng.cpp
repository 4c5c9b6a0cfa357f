#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "varch/rng.hpp"

using namespace varch;

TEST_SUITE("rng") {

TEST_CASE("identical seed and stream reproduce the sequence exactly") {
  Philox a(42, 7);
  Philox b(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
  Philox c(42, 7);
  Philox d(42, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(c.normal() == d.normal());
}

TEST_CASE("different streams from one seed decorrelate") {
  Philox a(42, 0);
  Philox b(42, 1);
  const int n = 20000;
  int equal = 0;
  double cross = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform() - 0.5;
    const double y = b.uniform() - 0.5;
    cross += x * y;
    if (x == y) ++equal;
  }
  CHECK(equal == 0);
  // Sample covariance of independent uniforms has sd 1/(12 sqrt(n)).
  CHECK(std::abs(cross / n) < 5.0 / (12.0 * std::sqrt(static_cast<double>(n))));
}

TEST_CASE("uniform() stays in [0,1) with the right first two moments") {
  Philox rng(3, 0);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("uniform(lo,hi) respects its bounds") {
  Philox rng(9, 2);
  double sum = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform(-2.0, 2.0);
    REQUIRE(u >= -2.0);
    REQUIRE(u < 2.0);
    sum += u;
  }
  CHECK(std::abs(sum / n) < 0.03);
}

TEST_CASE("normal() has standard moments and tail mass") {
  Philox rng(5, 0);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  int tail = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    sum += z;
    sq += z * z;
    if (std::abs(z) > 1.96) ++tail;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(static_cast<double>(tail) / n == doctest::Approx(0.05).epsilon(0.08));
}

TEST_CASE("below(n) covers 0..n-1 without bias") {
  Philox rng(13, 1);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[static_cast<int>(v)];
  }
  for (int c : counts) {
    // Each bin expects 10000 draws with sd ~ 95; allow six sigma.
    CHECK(std::abs(c - 10000) < 600);
  }
}

TEST_CASE("next_u32 and next_u64 look full-range") {
  Philox rng(21, 4);
  std::set<std::uint64_t> seen;
  bool high_bit32 = false, high_bit64 = false;
  for (int i = 0; i < 4096; ++i) {
    const std::uint64_t v = rng.next_u64();
    seen.insert(v);
    if (v >> 63) high_bit64 = true;
    if (rng.next_u32() >> 31) high_bit32 = true;
  }
  CHECK(seen.size() == 4096);  // collisions in 4096 u64 draws are absurd
  CHECK(high_bit32);
  CHECK(high_bit64);
}

}  // TEST_SUITE

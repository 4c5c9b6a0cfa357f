#pragma once

#include <array>
#include <cstdint>

namespace varch {

/// Counter-based Philox4x32-10 generator. Streams are split by (seed, stream)
/// key so independent consumers (chains, replicates) never share state and
/// draw order is insensitive to scheduling.
class Philox {
 public:
  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform double in the open interval (0, 1).
  double uniform();

  /// Uniform double in (lo, hi).
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller.
  double normal();

  /// Integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  void advance();

  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;  // forces generation on first use
};

}  // namespace varch

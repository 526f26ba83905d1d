#pragma once

#include <array>
#include <cstdint>

#include "kappa/core.hpp"

namespace kappa {

/// xoshiro256++ stream keyed by a SeedSpec. The state is derived from
/// (master_seed, stream_index) with splitmix64, so a stream depends only on
/// its SeedSpec and never on the order in which streams are created.
class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  /// Standard normal (Marsaglia polar method).
  double normal() noexcept;

  /// Exponential with the given rate.
  double exponential(double rate) noexcept;

  /// Two independent chi-square(1) variates from one polar pair.
  std::array<double, 2> chi_square1_pair() noexcept;

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

[[nodiscard]] inline RandomStream substream(SeedSpec seed) noexcept { return RandomStream(seed); }

}  // namespace kappa

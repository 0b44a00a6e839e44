#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace invgauss {

// Seeded pseudo-random source shared by every stochastic routine.
//
// Algorithm (fixed, so streams are reproducible bit for bit):
//   * state: xoshiro256** (Blackman & Vigna), four 64-bit words filled by
//     successive SplitMix64 outputs starting from the user seed;
//   * uniform(): ((next() >> 11) + 0.5) * 2^-53, strictly inside (0, 1);
//   * normal(): Box-Muller on two uniforms, the sine branch is cached and
//     returned by the following call;
//   * derive_seed(master, i): SplitMix64 finalizer applied to
//     master + (i + 1) * 0x9E3779B97F4A7C15, used to split independent
//     streams per path, fold or replicate.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  std::uint64_t next() noexcept;

  double uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() noexcept;
  double exponential() noexcept;
  // Unbiased integer in [0, bound) by Lemire's multiply-and-reject.
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

}  // namespace invgauss

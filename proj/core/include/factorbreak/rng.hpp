#pragma once

#include <array>
#include <cstdint>

namespace factorbreak {

/// SplitMix64 finalizer. Used for seeding and stream derivation only.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives the seed of child stream `index` from a parent seed.
///
///   child = splitmix64(splitmix64(parent) ^ splitmix64(index + 0x9E3779B97F4A7C15))
///
/// The mapping is a pure function of (parent, index), so any work item can
/// build its own generator without reference to execution order.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// xoshiro256** generator with a Marsaglia polar-method normal sampler.
///
/// The state is filled from four successive SplitMix64 outputs of the seed.
/// Uniforms use the top 53 bits. Normals come in pairs from the polar method;
/// the second member of each pair is cached and returned by the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0, 1).
  double uniform() noexcept;

  /// Standard normal.
  double normal() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace factorbreak

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace govgram {

/// 64-bit FNV-1a. Stable across platforms, used to derive RNG streams from ids.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// SplitMix64 finalizer combining a seed with a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Seeded random stream. The engine output is fixed by the standard and the
/// bounded draws are computed here, so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::size_t below(std::size_t bound);

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace govgram

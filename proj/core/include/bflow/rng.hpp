#pragma once

#include <cstdint>

namespace bflow {

// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used both as the stream
// generator and as the hash that keys per-realization and per-mode draws.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of realization `index` under `master`. Depends only on the pair, so
/// ensembles can be generated in any order.
constexpr std::uint64_t realization_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr std::uint64_t zigzag(std::int64_t v) noexcept {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

/// Counter-based draw for spectral mode (n, m) of a realization.
constexpr std::uint64_t mode_bits(std::uint64_t seed, std::int64_t n, std::int64_t m) noexcept {
  return mix64(mix64(seed + zigzag(n)) ^ zigzag(m));
}

}  // namespace bflow

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace causalkit::noise {

// Counter-based uniforms: every draw is a pure function of
// (seed, unit, key, stream), so any partition of units across workers
// reproduces the sequential run bit for bit.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a; node noise is keyed by identifier so it survives graph surgery.
constexpr std::uint64_t key_of(std::string_view id) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : id) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t unit, std::uint64_t key,
                            std::uint64_t stream) noexcept {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ unit);
  h = splitmix64(h ^ key);
  return splitmix64(h ^ stream);
}

/// Uniform in the open interval (0, 1): top 53 bits, offset by half an ulp.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

constexpr double uniform(std::uint64_t seed, std::uint64_t unit, std::uint64_t key,
                         std::uint64_t stream = 0) noexcept {
  return to_unit(mix(seed, unit, key, stream));
}

/// Standard normal by the Box-Muller cosine branch:
/// z = sqrt(-2 ln u1) * cos(2 pi u2), with u1 = stream 1 and u2 = stream 2.
inline double standard_normal(std::uint64_t seed, std::uint64_t unit, std::uint64_t key) noexcept {
  const double u1 = uniform(seed, unit, key, 1);
  const double u2 = uniform(seed, unit, key, 2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Sub-seed for replicate `index` of a stochastic procedure seeded with `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix(seed, index, 0x5eedULL, 0);
}

/// Small sequential generator for resampling indices within one replicate.
class Stream {
 public:
  explicit constexpr Stream(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, n) by Lemire's multiply-shift (bias < n / 2^64).
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  double uniform() noexcept { return to_unit(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace causalkit::noise

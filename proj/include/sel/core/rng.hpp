#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "sel/core/error.hpp"

namespace sel::core {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t s = x;
  return splitmix64(s);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace detail

/// Deterministic random stream keyed by (master_seed, stream_index).
///
/// The generator is xoshiro256** whose 256-bit state is filled by SplitMix64
/// from a hash of both keys, so every key pair gets its own well-separated
/// sequence. Only integer arithmetic touches the state; uniform doubles use the
/// top 53 bits. Instances are cheap and must not be shared between threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint64_t seeder = detail::mix64(master_seed) ^
                           detail::mix64(stream_index ^ 0xD1B54A32D192ED03ULL);
    for (auto& word : state_) word = detail::splitmix64(seeder);
  }

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = detail::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) noexcept { return low + (high - low) * uniform(); }

  /// Uniform integer on [0, bound) by rejection, free of modulo bias.
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next_u64();
      const unsigned __int128 product = static_cast<unsigned __int128>(r) * bound;
      if (static_cast<std::uint64_t>(product) >= limit) return static_cast<std::uint64_t>(product >> 64);
    }
  }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::array<std::uint64_t, 4> state_{};
  std::optional<double> spare_;
};

/// Maps a uniform variate to a Cauchy(location, scale) draw by inverse CDF.
inline double cauchy_quantile(double u, double location, double scale) noexcept {
  return location + scale * std::tan(std::numbers::pi * (u - 0.5));
}

inline std::vector<double> sample_normal(RngStream& rng, std::size_t n, double mean, double sd) {
  if (!(sd >= 0.0)) fail(ErrorCode::InvalidArgument, "normal sd must be non-negative");
  std::vector<double> out(n);
  for (auto& x : out) x = mean + sd * rng.normal();
  return out;
}

inline std::vector<double> sample_cauchy(RngStream& rng, std::size_t n, double location, double scale) {
  if (!(scale > 0.0)) fail(ErrorCode::NonPositiveScale, "Cauchy scale must be positive");
  std::vector<double> out(n);
  for (auto& x : out) x = cauchy_quantile(rng.uniform(), location, scale);
  return out;
}

/// Fisher-Yates shuffle driven by the stream.
template <typename T>
void shuffle(std::span<T> values, RngStream& rng) noexcept {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace sel::core

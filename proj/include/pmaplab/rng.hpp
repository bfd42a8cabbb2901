#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "pmaplab/error.hpp"

namespace pmaplab {

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stafford variant 13 finalizer (the SplitMix64 output function).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream addressed by (master_seed, stream_index).
///
/// Output k of a stream is a pure function of (seed, index, k), so a
/// replication that owns stream (seed, r) reproduces bit-for-bit no matter
/// which thread runs it. Satisfies UniformRandomBitGenerator, so the
/// standard <random> distributions can draw from it.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : seed_(master_seed), index_(stream_index) {
    key_ = detail::mix64(master_seed + detail::kGolden);
    key_ ^= detail::mix64(stream_index * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL);
    tweak_ = detail::mix64(key_ ^ 0xA0761D6478BD642FULL);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t z = key_ + (counter_++) * detail::kGolden;
    return detail::mix64(detail::mix64(z) ^ tweak_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Exp(rate).
  double exponential(double rate) noexcept { return -std::log(uniform_open()) / rate; }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(*this);
  }

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_index() const noexcept { return index_; }
  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
  std::uint64_t key_;
  std::uint64_t tweak_;
  std::uint64_t counter_ = 0;
};

/// Finite distribution on {0, ..., n-1}.
class Categorical {
 public:
  explicit Categorical(std::span<const double> weights)
      : dist_(weights.begin(), weights.end()) {
    require(!weights.empty(), ErrorCode::InvalidArgument, "categorical over empty support");
  }

  int operator()(RngStream& rng) const { return dist_(rng); }

  std::size_t size() const { return dist_.probabilities().size(); }

 private:
  mutable std::discrete_distribution<int> dist_;
};

}  // namespace pmaplab

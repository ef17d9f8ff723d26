// Copyright 2026 The casbi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CASBI_RNG_HPP
#define CASBI_RNG_HPP

#include <array>
#include <cstdint>

namespace casbi {

/// Mixes a 64-bit value with the SplitMix64 finalizer. Used to derive stream keys.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Folds any number of 64-bit identifiers into one key.
template <class... Ids>
constexpr std::uint64_t derive_key(std::uint64_t seed, Ids... ids) {
  std::uint64_t key = mix64(seed);
  ((key = mix64(key ^ static_cast<std::uint64_t>(ids))), ...);
  return key;
}

/// Stream identifier tags. Every random decision in the library draws from a
/// stream keyed by (seed, tag, indices...), so results do not depend on thread
/// scheduling or worker count.
namespace stream_tag {
inline constexpr std::uint64_t rejection = 0x01;
inline constexpr std::uint64_t simulate = 0x02;
inline constexpr std::uint64_t measure = 0x03;
inline constexpr std::uint64_t cg_monte_carlo = 0x04;
inline constexpr std::uint64_t resample = 0x05;
inline constexpr std::uint64_t pilot = 0x06;
inline constexpr std::uint64_t observed = 0x07;
inline constexpr std::uint64_t fit = 0x08;
}  // namespace stream_tag

/// Counter-based stream built on the Philox-4x32-10 block function.
///
/// A stream is identified by a 64-bit key (derived from the seed and any
/// number of purpose/index identifiers) plus a 64-bit stream offset; draws
/// within a stream advance a 64-bit block counter. Distinct keys give
/// statistically independent streams, which is what makes parallel sampling
/// reproducible for any worker count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key, std::uint64_t stream = 0)
      : key_(key), stream_(stream) {}

  /// Next raw 32-bit word.
  std::uint32_t next_u32() {
    if (word_index_ == 4) {
      block_ = philox_block(key_, stream_, counter_++);
      word_index_ = 0;
    }
    return block_[word_index_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  /// Uniform draw strictly inside (0, 1): safe for logarithms.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; the antithetic twin is cached.
  double normal();

  /// Exponential with the given rate.
  double exponential(double rate);

  /// Poisson draw; exact for any mean (multiplicative method, with recursive
  /// halving for large means to stay within double range).
  std::uint64_t poisson(double mean);

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  static std::array<std::uint32_t, 4> philox_block(std::uint64_t key, std::uint64_t ctr_hi,
                                                   std::uint64_t ctr_lo);

  std::uint64_t key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int word_index_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Gamma(shape, 1) draw as the sum of floor(shape) unit exponentials plus an
/// acceptance-rejection step for the fractional part. `uniforms_used`, when
/// given, accumulates the number of uniform draws consumed; the count grows
/// linearly with the shape, which is the property the gamma simulator's cost
/// accounting relies on.
double gamma_sum_of_exponentials(RngStream& rng, double shape, std::uint64_t* uniforms_used = nullptr);

}  // namespace casbi

#endif

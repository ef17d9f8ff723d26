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

#include "casbi/rng.hpp"

#include <cmath>

#include "casbi/errors.hpp"

namespace casbi {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> RngStream::philox_block(std::uint64_t key, std::uint64_t ctr_hi,
                                                     std::uint64_t ctr_lo) {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  std::array<std::uint32_t, 4> c = {
      static_cast<std::uint32_t>(ctr_lo), static_cast<std::uint32_t>(ctr_lo >> 32),
      static_cast<std::uint32_t>(ctr_hi), static_cast<std::uint32_t>(ctr_hi >> 32)};
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  cached_normal_ = r * std::sin(a);
  has_cached_normal_ = true;
  return r * std::cos(a);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw DomainError("exponential draw requires a positive rate");
  }
  return -std::log(uniform01()) / rate;
}

std::uint64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("poisson draw requires a finite non-negative mean");
  }
  if (mean == 0.0) {
    return 0;
  }
  // Poisson(a + b) = Poisson(a) + Poisson(b) for independent summands, so
  // large means are split until exp(-mean) is comfortably representable.
  if (mean > 500.0) {
    const double half = 0.5 * mean;
    return poisson(half) + poisson(mean - half);
  }
  const double limit = std::exp(-mean);
  std::uint64_t count = 0;
  double product = uniform01();
  while (product > limit) {
    ++count;
    product *= uniform01();
  }
  return count;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) {
    throw DomainError("uniform_index requires n >= 1");
  }
  // Rejection on the top of the range keeps the draw exactly uniform.
  const std::uint64_t bound = n * (~std::uint64_t{0} / n);
  std::uint64_t x = next_u64();
  while (x >= bound) {
    x = next_u64();
  }
  return x % n;
}

double gamma_sum_of_exponentials(RngStream& rng, double shape, std::uint64_t* uniforms_used) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma draw requires a positive finite shape");
  }
  std::uint64_t used = 0;
  double value = 0.0;
  const double integer_part = std::floor(shape);
  for (double i = 0; i < integer_part; ++i) {
    value += -std::log(rng.uniform01());
    ++used;
  }
  const double frac = shape - integer_part;
  if (frac > 0.0) {
    // Acceptance-rejection for Gamma(frac, 1), frac in (0,1).
    const double e = 2.718281828459045235360287471353;
    const double b = (e + frac) / e;
    for (;;) {
      const double u1 = rng.uniform01();
      const double u2 = rng.uniform01();
      used += 2;
      const double p = b * u1;
      if (p <= 1.0) {
        const double x = std::pow(p, 1.0 / frac);
        if (u2 <= std::exp(-x)) {
          value += x;
          break;
        }
      } else {
        const double x = -std::log((b - p) / frac);
        if (u2 <= std::pow(x, frac - 1.0)) {
          value += x;
          break;
        }
      }
    }
  }
  if (uniforms_used != nullptr) {
    *uniforms_used += used;
  }
  return value;
}

}  // namespace casbi

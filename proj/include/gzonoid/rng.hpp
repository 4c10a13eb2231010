// Copyright 2026 The gzonoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Counter-based random numbers for reproducible chunked Monte Carlo.
//
// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as
// 1, 2, 3") keyed by a SplitMix64 hash of (seed, stream). Every chunk of a
// Monte Carlo run owns one stream, so results do not depend on how chunks
// are scheduled onto threads.

#ifndef GZONOID_RNG_HPP
#define GZONOID_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace gzonoid {

/// One SplitMix64 step applied to `x`; used as a 64-bit mixing function.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  /// The bare Philox4x32-10 bijection.
  [[nodiscard]] static constexpr Counter round10(Counter ctr, Key key) noexcept {
    for (int r = 0; r < 10; ++r) {
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }
};

/// UniformRandomBitGenerator producing 64-bit words from a Philox stream.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  /// Independent child stream; deterministic in (parent key, id).
  [[nodiscard]] CounterRng split(std::uint64_t id) const noexcept {
    const std::uint64_t parent =
        (std::uint64_t{key_[1]} << 32) | std::uint64_t{key_[0]};
    return CounterRng(parent, id);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    if (pos_ == 2) refill();
    const auto lo = std::uint64_t{block_[2 * pos_]};
    const auto hi = std::uint64_t{block_[2 * pos_ + 1]};
    ++pos_;
    return (hi << 32) | lo;
  }

  /// Uniform double in the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate (Box-Muller; pairs are cached).
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  void refill() noexcept {
    block_ = Philox4x32::round10(
        {static_cast<std::uint32_t>(counter_),
         static_cast<std::uint32_t>(counter_ >> 32), 0u, 0u},
        key_);
    ++counter_;
    pos_ = 0;
  }

  Philox4x32::Key key_{};
  std::uint64_t counter_ = 0;
  Philox4x32::Counter block_{};
  int pos_ = 2;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gzonoid

#endif  // GZONOID_RNG_HPP

// Copyright 2026 The rmap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RMAP_RANDOM_HPP_
#define RMAP_RANDOM_HPP_

#include <cstdint>
#include <limits>

namespace rmap {

// xoshiro256** generator whose state is derived from a key tuple rather than
// advanced from a shared parent. Sample i of an experiment always gets
// Stream::ForSample(seed, domain, i), so results do not depend on how samples
// are scheduled across threads.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t seed);

  // Substream keyed by (seed, domain, index). `domain` separates independent
  // experiments sharing a seed (e.g. different n).
  static Stream ForSample(std::uint64_t seed, std::uint64_t domain,
                          std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const std::uint64_t result = Rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = Rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, bound), bound >= 1. Lemire's multiply-shift with rejection,
  // so the result is exactly uniform.
  std::uint64_t Below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Poisson(1) by inversion over the unbounded support.
  std::uint32_t Poisson1();

 private:
  static std::uint64_t Rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

// SplitMix64 finaliser; a bijective 64-bit mixer.
std::uint64_t Mix64(std::uint64_t x);

}  // namespace rmap

#endif  // RMAP_RANDOM_HPP_

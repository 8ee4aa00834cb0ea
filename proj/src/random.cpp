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

#include "rmap/random.hpp"

#include <array>
#include <cmath>

namespace rmap {

std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Stream::Stream(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) {
    s += 0x9e3779b97f4a7c15ULL;
    word = Mix64(s);
  }
  // All-zero state is the one fixed point of xoshiro.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

Stream Stream::ForSample(std::uint64_t seed, std::uint64_t domain,
                         std::uint64_t index) {
  std::uint64_t key = Mix64(seed);
  key = Mix64(key ^ Mix64(domain + 0x632be59bd9b4e019ULL));
  key = Mix64(key ^ Mix64(index + 0x8cb92ba72f3d8dd7ULL));
  return Stream(key);
}

namespace {

constexpr int kTableSize = 24;

std::array<double, kTableSize> MakePoissonCdf() {
  std::array<double, kTableSize> cdf{};
  double p = std::exp(-1.0);
  double acc = p;
  cdf[0] = acc;
  for (int k = 1; k < kTableSize; ++k) {
    p /= k;
    acc += p;
    cdf[k] = acc;
  }
  return cdf;
}

}  // namespace

std::uint32_t Stream::Poisson1() {
  static const std::array<double, kTableSize> cdf = MakePoissonCdf();
  const double u = Uniform();
  for (int k = 0; k < kTableSize; ++k) {
    if (u < cdf[k]) return static_cast<std::uint32_t>(k);
  }
  // Beyond the table (probability ~1e-24): continue the recurrence.
  double p = std::exp(-1.0);
  for (int k = 1; k < kTableSize; ++k) p /= k;
  double acc = cdf[kTableSize - 1];
  std::uint32_t k = kTableSize - 1;
  while (u >= acc && p > 0.0) {
    ++k;
    p /= k;
    acc += p;
  }
  return k;
}

}  // namespace rmap

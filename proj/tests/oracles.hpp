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

#ifndef RMAP_TESTS_ORACLES_HPP_
#define RMAP_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

// Deliberately naive reference implementations, written from the definitions
// and sharing no code with the library.
namespace oracle {

struct Structure {
  std::vector<bool> cyclic;
  std::vector<std::uint32_t> height;
  std::vector<std::uint32_t> tree_root;
  std::uint32_t lambda = 0;
};

// f is 0-based. Quadratic: v is cyclic iff f^k(v) = v for some 1 <= k <= n.
inline Structure Decompose(const std::vector<std::uint32_t>& f) {
  const auto n = static_cast<std::uint32_t>(f.size());
  Structure s;
  s.cyclic.assign(n, false);
  s.height.assign(n, 0);
  s.tree_root.assign(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t x = v;
    for (std::uint32_t k = 1; k <= n; ++k) {
      x = f[x];
      if (x == v) {
        s.cyclic[v] = true;
        break;
      }
    }
    if (s.cyclic[v]) ++s.lambda;
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    std::uint32_t x = v;
    std::uint32_t k = 0;
    while (!s.cyclic[x]) {
      x = f[x];
      ++k;
    }
    s.height[v] = k;
    s.tree_root[v] = x;
  }
  return s;
}

struct Crown {
  std::uint32_t branches = 0;
  std::uint32_t top = 0;
  std::uint32_t second = 0;
  std::uint32_t ties = 0;
  std::vector<std::uint32_t> crown;  // ascending, 0-based
  std::uint32_t r = 0;
  bool unique = false;
  bool margin2 = false;
  bool crown_ok = false;
};

inline Crown CrownAt(const std::vector<std::uint32_t>& f, std::uint32_t c) {
  const auto n = static_cast<std::uint32_t>(f.size());
  const Structure s = Decompose(f);
  auto branch_root = [&](std::uint32_t v) {
    std::uint32_t x = v;
    for (std::uint32_t k = s.height[v]; k > c; --k) x = f[x];
    return x;
  };
  std::vector<std::uint32_t> roots;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (s.height[v] == c) roots.push_back(v);
  }
  Crown out;
  out.branches = static_cast<std::uint32_t>(roots.size());
  if (roots.empty()) return out;
  std::vector<std::uint32_t> heights;
  for (std::uint32_t root : roots) {
    std::uint32_t best = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (s.height[v] >= c && branch_root(v) == root) {
        best = std::max(best, s.height[v] - c);
      }
    }
    heights.push_back(best);
  }
  out.top = *std::max_element(heights.begin(), heights.end());
  out.ties = static_cast<std::uint32_t>(
      std::count(heights.begin(), heights.end(), out.top));
  if (out.ties > 1) {
    out.second = out.top;
  } else {
    out.second = 0;
    for (std::uint32_t h : heights) {
      if (h < out.top) out.second = std::max(out.second, h);
    }
  }
  out.unique = out.ties == 1;
  out.margin2 = out.unique && out.top - out.second >= 2;
  if (out.unique) {
    const std::uint32_t top_root =
        roots[std::max_element(heights.begin(), heights.end()) -
              heights.begin()];
    for (std::uint32_t v = 0; v < n; ++v) {
      if (s.height[v] < c || branch_root(v) != top_root) continue;
      const std::uint32_t rel = s.height[v] - c;
      if (rel >= out.second + 1) out.crown.push_back(v);
      if (rel == out.second + 1) ++out.r;
    }
  }
  out.crown_ok = out.r > 0 && out.crown.size() > 2 * out.r;
  return out;
}

// A-event predicate written from extinction times alone. tau[i] is the first
// empty generation of founder i, or kAlive when the line outlives the record.
inline constexpr std::uint32_t kAlive = std::numeric_limits<std::uint32_t>::max();

// For d = 0 the conditions say: the top line has tau1 >= t+1, the particles it
// has from generation t on are all in generation t (so tau1 = t+1), the
// runner-up dies exactly at t+1 and everyone else is dead by then.
// For d > 0: tau1 in [t+1, t+r], exactly d further lines die at t+1 and the
// rest die by t.
inline bool AEvent(std::vector<std::uint32_t> tau, std::uint32_t t,
                   std::uint32_t d, std::uint32_t r) {
  std::sort(tau.begin(), tau.end(), std::greater<>());
  const std::size_t big_n = tau.size();
  if (d == 0) {
    if (big_n < 2) return false;
    if (tau[0] != t + 1 || tau[1] != t + 1) return false;
    return true;  // the rest are <= t+1 by sorting
  }
  if (big_n < d + 1) return false;
  if (tau[0] < t + 1 || tau[0] > t + r) return false;
  for (std::size_t i = 1; i <= d; ++i) {
    if (tau[i] != t + 1) return false;
  }
  for (std::size_t j = d + 1; j < big_n; ++j) {
    if (tau[j] > t) return false;
  }
  return true;
}

// sum over |k - N| > N/2 of the Poisson(N) pmf, by direct summation in logs.
inline double PoissonTail(std::uint32_t big_n) {
  const double mean = big_n;
  double total = 0;
  const std::uint32_t upper = big_n * 4 + 200;
  for (std::uint32_t k = 0; k <= upper; ++k) {
    if (2.0 * std::fabs(double(k) - mean) <= mean) continue;
    total += std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
  }
  return total;
}

}  // namespace oracle

#endif  // RMAP_TESTS_ORACLES_HPP_

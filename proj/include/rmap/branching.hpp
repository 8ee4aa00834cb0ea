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

#ifndef RMAP_BRANCHING_HPP_
#define RMAP_BRANCHING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmap/random.hpp"

namespace rmap {

inline constexpr std::uint64_t kDefaultProgenyCap = 10'000'000;

// A critical Galton-Watson process with Poisson(1) offspring and several
// founders, recorded founder by founder.
struct GWTrace {
  std::uint32_t founders = 0;
  // generations[i][s]: particles of founder i in generation s. Recording
  // stops at the first empty generation (which is stored) or at t_max.
  std::vector<std::vector<std::uint64_t>> generations;
  // Index of the first empty generation, if it was observed.
  std::vector<std::optional<std::uint32_t>> extinction;
  bool truncated = false;  // progeny cap hit
  std::uint64_t total_particles = 0;

  // Last generation index recorded for founder i.
  std::uint32_t recorded_through(std::uint32_t i) const {
    return static_cast<std::uint32_t>(generations[i].size() - 1);
  }
  // mu^i(s); nullopt when s lies beyond the record of a surviving line.
  std::optional<std::uint64_t> size_at(std::uint32_t i, std::uint32_t s) const;
  // nu^i(t): particles in generations strictly before t.
  std::uint64_t partial_progeny(std::uint32_t i, std::uint32_t t) const;
  // nu^i over the recorded generations (the total progeny once extinct).
  std::uint64_t progeny(std::uint32_t i) const;
  // nu_N when every line went extinct.
  std::optional<std::uint64_t> total_progeny() const;
};

// Each particle independently spawns Poisson(1) children. Stops when every
// line is extinct, at generation t_max, or once more than progeny_cap
// particles exist (truncated = true).
GWTrace SimulateGW(std::uint32_t founders, std::uint32_t t_max,
                   std::uint64_t progeny_cap, Stream& stream);

// P(mu(t) = 0) for one founder: q_0 = 0, q_{s+1} = exp(q_s - 1).
double ExtinctionProbExact(std::uint32_t t);
// 1 - q_t, iterated directly so it stays accurate when q_t is near 1.
double SurvivalProbExact(std::uint32_t t);

// P(nu_N = k) = (N/k) e^{-k} k^{k-N} / (k-N)!, the Borel-Tanner law.
double BorelTannerPmf(std::uint32_t founders, std::uint64_t k);
double BorelTannerLogPmf(std::uint32_t founders, std::uint64_t k);

struct AEventParams {
  std::uint32_t t = 1;
  std::uint32_t d = 0;
  std::uint32_t r = 1;  // read only when d > 0
};

enum class EventVerdict { kFalse, kTrue, kIndeterminate };

// Founders are relabelled by descending extinction time (lines still alive
// at the end of the record rank first; ties keep founder order), then
//   d = 0: mu1(t) > 0, nu1 - nu1(t) <= mu1(t), tau2 = t+1, mu_j(t+1) = 0 (j>=3)
//   d > 0: mu1(t) > 0, mu1(t+r) = 0, tau_i = t+1 (2 <= i <= d+1),
//          tau_j <= t (j > d+1).
// Indeterminate when the trace was truncated or not recorded far enough.
EventVerdict ClassifyEvent(const GWTrace& trace, const AEventParams& params);

// Rejection sampling of a trace with nu_N == total; the accepted trace is a
// uniform random forest with N labelled roots and `total` vertices up to
// relabelling. Throws RejectionExhausted after max_attempts.
struct ConditionedSample {
  GWTrace trace;
  std::uint64_t attempts = 0;
};
ConditionedSample SampleConditioned(std::uint32_t founders,
                                    std::uint64_t total,
                                    std::uint64_t max_attempts,
                                    Stream& stream);

// Per-founder tree heights of an extinct trace (tau - 1), sorted descending.
std::vector<std::uint32_t> TreeHeightProfile(const GWTrace& trace);

// mu_N(1) is Poisson(N); estimates P(|mu_N(1)/N - 1| > 1/2).
struct FounderCheck {
  std::uint32_t founders = 0;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  double estimate = 0;
  double exact = 0;
};
FounderCheck FoundersGenerationCheck(std::uint32_t founders,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads = 1);
// sum over |k - N| > N/2 of e^{-N} N^k / k!
double PoissonDeviationTailExact(std::uint32_t founders);

}  // namespace rmap

#endif  // RMAP_BRANCHING_HPP_

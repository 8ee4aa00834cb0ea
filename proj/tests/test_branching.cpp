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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "oracles.hpp"
#include "rmap/branching.hpp"
#include "rmap/error.hpp"
#include "rmap/experiments.hpp"

using rmap::EventVerdict;
using rmap::GWTrace;

namespace {

// Builds a trace from explicit generation sizes, each ending in an empty
// generation unless `alive` is set for that founder.
GWTrace MakeTrace(const std::vector<std::vector<std::uint64_t>>& gens,
                  const std::vector<bool>& alive = {}) {
  GWTrace trace;
  trace.founders = static_cast<std::uint32_t>(gens.size());
  trace.generations = gens;
  trace.extinction.resize(gens.size());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (alive.empty() || !alive[i]) {
      trace.extinction[i] = static_cast<std::uint32_t>(gens[i].size() - 1);
    }
    for (auto g : gens[i]) trace.total_particles += g;
  }
  return trace;
}

std::vector<std::uint32_t> Taus(const GWTrace& trace) {
  std::vector<std::uint32_t> tau;
  for (const auto& e : trace.extinction) tau.push_back(e ? *e : oracle::kAlive);
  return tau;
}

double ThreeSigma(double p, double trials) {
  return 3 * std::sqrt(p * (1 - p) / trials);
}

}  // namespace

TEST_CASE("simulate basics") {
  SUBCASE("a lone founder without children") {
    for (std::uint64_t i = 0;; ++i) {
      auto stream = rmap::Stream::ForSample(3, 1, i);
      const GWTrace trace = rmap::SimulateGW(1, 10, 100, stream);
      if (trace.generations[0][1] != 0) continue;
      CHECK(trace.extinction[0] == 1u);
      CHECK(trace.progeny(0) == 1);
      CHECK(trace.total_progeny() == 1u);
      break;
    }
  }
  SUBCASE("invalid arguments") {
    rmap::Stream stream(1);
    CHECK_THROWS_AS(rmap::SimulateGW(0, 5, 10, stream), rmap::InvalidArgument);
    CHECK_THROWS_AS(rmap::SimulateGW(1, 0, 10, stream), rmap::InvalidArgument);
    CHECK_THROWS_AS(rmap::SimulateGW(5, 5, 4, stream), rmap::InvalidArgument);
  }
  SUBCASE("trace invariants and the progeny cap") {
    std::uint64_t truncated = 0;
    for (std::uint64_t i = 0; i < 20'000; ++i) {
      auto stream = rmap::Stream::ForSample(8, 4, i);
      const GWTrace trace = rmap::SimulateGW(4, 200, 500, stream);
      if (trace.truncated) {
        ++truncated;
        CHECK_FALSE(trace.total_progeny().has_value());
        continue;
      }
      std::uint64_t total = 0;
      for (std::uint32_t f = 0; f < 4; ++f) {
        const auto& g = trace.generations[f];
        CHECK(g[0] == 1);
        for (std::size_t s = 1; s + 1 < g.size(); ++s) CHECK(g[s] > 0);
        CHECK(trace.partial_progeny(f, 0) == 0);
        CHECK(trace.partial_progeny(f, 1) == 1);
        total += trace.progeny(f);
      }
      CHECK(total == trace.total_particles);
    }
    CHECK(truncated > 0);
  }
}

TEST_CASE("simulated extinction frequencies") {
  const int runs = 1'000'000;
  std::map<std::uint32_t, int> dead;
  const std::uint32_t checkpoints[] = {1, 2, 5, 10, 50};
  for (int i = 0; i < runs; ++i) {
    auto stream = rmap::Stream::ForSample(17, 1, i);
    const GWTrace trace = rmap::SimulateGW(1, 50, rmap::kDefaultProgenyCap, stream);
    for (std::uint32_t t : checkpoints) {
      if (trace.size_at(0, t).value() == 0) ++dead[t];
    }
  }
  for (std::uint32_t t : checkpoints) {
    CAPTURE(t);
    const double q = rmap::ExtinctionProbExact(t);
    CHECK(std::fabs(dead[t] / double(runs) - q) <= ThreeSigma(q, runs));
  }
  CHECK(rmap::ExtinctionProbExact(1) == doctest::Approx(std::exp(-1.0)));
  CHECK(rmap::ExtinctionProbExact(2) == doctest::Approx(0.531464).epsilon(1e-6));
}

TEST_CASE("generation sizes are Poisson given the previous size") {
  // counts[k][m]: transitions from k particles to m particles
  std::map<std::uint64_t, std::vector<double>> counts;
  for (int i = 0; i < 1'000'000; ++i) {
    auto stream = rmap::Stream::ForSample(23, 1, i);
    const GWTrace trace = rmap::SimulateGW(1, 4, rmap::kDefaultProgenyCap, stream);
    const auto& g = trace.generations[0];
    for (std::size_t s = 0; s + 1 < g.size() && s <= 3; ++s) {
      if (g[s] < 1 || g[s] > 5) continue;
      auto& row = counts[g[s]];
      if (row.size() < 40) row.resize(40, 0);
      ++row[std::min<std::uint64_t>(g[s + 1], 39)];
    }
  }
  for (std::uint64_t k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const auto& observed = counts[k];
    double n = 0;
    for (double c : observed) n += c;
    std::vector<double> expected(40, 0);
    double covered = 0;
    for (int m = 0; m < 39; ++m) {
      const double p = std::exp(-double(k) + m * std::log(double(k)) - std::lgamma(m + 1.0));
      expected[m] = p * n;
      covered += p;
    }
    expected[39] = std::max(0.0, 1 - covered) * n;
    CHECK(rmap::ChiSquare(observed, expected).p_value > 1e-3);
  }
}

TEST_CASE("extinction_prob_exact") {
  CHECK(rmap::ExtinctionProbExact(0) == 0);
  for (std::uint32_t t = 0; t < 500; ++t) {
    CHECK(rmap::ExtinctionProbExact(t + 1) > rmap::ExtinctionProbExact(t));
  }
  double previous = 0;
  for (std::uint32_t t : {100u, 300u, 1000u, 3000u, 10000u}) {
    const double scaled = t * rmap::SurvivalProbExact(t);
    CHECK(scaled < 2);
    CHECK(scaled > previous);
    previous = scaled;
    CHECK(rmap::SurvivalProbExact(t) ==
          doctest::Approx(1 - rmap::ExtinctionProbExact(t)).epsilon(1e-9));
  }
  CHECK(previous > 1.99);
}

TEST_CASE("borel_tanner_pmf") {
  CHECK(rmap::BorelTannerPmf(1, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(rmap::BorelTannerPmf(1, 2) == doctest::Approx(0.135335).epsilon(1e-5));
  CHECK(rmap::BorelTannerPmf(3, 2) == 0);
  SUBCASE("sums to one up to a rigorous tail bound") {
    for (std::uint32_t big_n : {1u, 3u, 10u}) {
      const std::uint64_t k_max = 4'000'000;
      double partial = 0;
      for (std::uint64_t k = k_max; k >= big_n; --k) {
        partial += rmap::BorelTannerPmf(big_n, k);
      }
      // Stirling gives pmf(k) <= N / (k sqrt(2 pi (k - N))), whose tail
      // integral is at most 2 N / sqrt(2 pi (K - N)).
      const double tail = 2.0 * big_n / std::sqrt(2 * M_PI * (k_max - big_n));
      CHECK(partial <= 1 + 1e-12);
      CHECK(partial + tail >= 1 - 1e-6);
    }
  }
  SUBCASE("matches simulated progeny for three founders") {
    const auto r = rmap::ProgenyExperiment(3, 40, 1'000'000, 5, 1);
    for (std::size_t i = 0; i < r.counts.size(); ++i) {
      const double p = rmap::BorelTannerPmf(3, 3 + i);
      CAPTURE(3 + i);
      CHECK(std::fabs(r.counts[i] / 1e6 - p) <= ThreeSigma(p, 1e6) + 1e-12);
    }
    CHECK(r.fit.p_value > 1e-3);
  }
}

TEST_CASE("classify_event on hand-built traces") {
  const std::uint32_t t = 2;
  SUBCASE("everything extinct by t") {
    const GWTrace trace = MakeTrace({{1, 1, 0}, {1, 0}});
    for (std::uint32_t d = 0; d < 3; ++d) {
      CHECK(rmap::ClassifyEvent(trace, {t, d, 2}) == EventVerdict::kFalse);
    }
  }
  SUBCASE("taus t+2 and t+1 with d = 1, r = 2") {
    const GWTrace trace = MakeTrace({{1, 1, 1, 0}, {1, 2, 1, 1, 0}});
    CHECK(rmap::ClassifyEvent(trace, {t, 1, 2}) == EventVerdict::kTrue);
    CHECK(rmap::ClassifyEvent(trace, {t, 1, 1}) == EventVerdict::kFalse);
    CHECK(rmap::ClassifyEvent(trace, {t, 0, 1}) == EventVerdict::kFalse);
  }
  SUBCASE("two lines dying at t+1") {
    const GWTrace trace = MakeTrace({{1, 1, 2, 0}, {1, 1, 1, 0}, {1, 0}});
    CHECK(rmap::ClassifyEvent(trace, {t, 0, 1}) == EventVerdict::kTrue);
    CHECK(rmap::ClassifyEvent(trace, {t, 1, 1}) == EventVerdict::kTrue);
    CHECK(rmap::ClassifyEvent(trace, {t, 2, 1}) == EventVerdict::kFalse);
  }
  SUBCASE("truncated or short records are indeterminate") {
    GWTrace trace = MakeTrace({{1, 1, 1}}, {true});
    CHECK(rmap::ClassifyEvent(trace, {t, 0, 1}) == EventVerdict::kIndeterminate);
    trace = MakeTrace({{1, 0}});
    trace.truncated = true;
    CHECK(rmap::ClassifyEvent(trace, {t, 0, 1}) == EventVerdict::kIndeterminate);
  }
}

TEST_CASE("classify_event agrees with the extinction-time predicate") {
  std::uint64_t disagreements = 0;
  std::uint64_t true_count = 0;
  for (std::uint64_t i = 0; i < 100'000; ++i) {
    auto stream = rmap::Stream::ForSample(41, 3, i);
    const GWTrace trace = rmap::SimulateGW(3, 8, rmap::kDefaultProgenyCap, stream);
    for (std::uint32_t d : {0u, 1u}) {
      for (std::uint32_t r : {1u, 2u}) {
        const EventVerdict verdict = rmap::ClassifyEvent(trace, {2, d, r});
        REQUIRE(verdict != EventVerdict::kIndeterminate);
        const bool expected = oracle::AEvent(Taus(trace), 2, d, r);
        if ((verdict == EventVerdict::kTrue) != expected) ++disagreements;
        true_count += expected;
      }
    }
  }
  CHECK(disagreements == 0);
  CHECK(true_count > 1000);
}

TEST_CASE("classify_event ignores founder order") {
  for (std::uint64_t i = 0; i < 5000; ++i) {
    auto stream = rmap::Stream::ForSample(42, 4, i);
    GWTrace trace = rmap::SimulateGW(4, 10, rmap::kDefaultProgenyCap, stream);
    for (std::uint32_t d = 0; d < 3; ++d) {
      const rmap::AEventParams p{2, d, 2};
      const auto verdict = rmap::ClassifyEvent(trace, p);
      GWTrace shuffled = trace;
      std::reverse(shuffled.generations.begin(), shuffled.generations.end());
      std::reverse(shuffled.extinction.begin(), shuffled.extinction.end());
      CHECK(rmap::ClassifyEvent(shuffled, p) == verdict);
      std::rotate(shuffled.generations.begin(), shuffled.generations.begin() + 1,
                  shuffled.generations.end());
      std::rotate(shuffled.extinction.begin(), shuffled.extinction.begin() + 1,
                  shuffled.extinction.end());
      CHECK(rmap::ClassifyEvent(shuffled, p) == verdict);
    }
  }
}

TEST_CASE("conditioned_sample") {
  SUBCASE("one founder, total one") {
    std::uint64_t attempts = 0;
    const int samples = 200'000;
    for (int i = 0; i < samples; ++i) {
      auto stream = rmap::Stream::ForSample(9, 1, i);
      attempts += rmap::SampleConditioned(1, 1, 1000, stream).attempts;
    }
    const double rate = samples / double(attempts);
    CHECK(rate == doctest::Approx(std::exp(-1.0)).epsilon(0.01));
  }
  SUBCASE("exhaustion is reported") {
    rmap::Stream stream(4);
    try {
      rmap::SampleConditioned(1, 200, 3, stream);
      FAIL("expected RejectionExhausted");
    } catch (const rmap::RejectionExhausted& e) {
      CHECK(e.attempts() == 3);
    }
  }
  SUBCASE("two founders, total six: forests match mapping enumeration") {
    const auto r = rmap::ForestExperiment(2, 6, 100'000, 12);
    CHECK(r.acceptance_rate ==
          doctest::Approx(rmap::BorelTannerPmf(2, 6)).epsilon(0.03));
    std::uint64_t exact_total = 0;
    for (const auto& [profile, count] : r.exact_counts) exact_total += count;
    // 6^6 P(lambda = 2) mappings of [6] have two cyclic vertices
    CHECK(exact_total == 2 * 5 * 4 * 3 * 2 * 1 * 6 * 6 * 6 * 6 / (4 * 3 * 2 * 1));
    for (const auto& [profile, count] : r.exact_counts) {
      const double p = count / double(exact_total);
      const auto it = r.observed.find(profile);
      const double observed = it == r.observed.end() ? 0 : it->second / 1e5;
      CHECK(std::fabs(observed - p) <= ThreeSigma(p, 1e5) + 1e-12);
    }
    for (const auto& [profile, count] : r.observed) {
      CHECK(r.exact_counts.count(profile) == 1);
    }
  }
}

TEST_CASE("founders_generation_check") {
  SUBCASE("one founder") {
    const auto r = rmap::FoundersGenerationCheck(1, 1'000'000, 2, 1);
    CHECK(r.exact == doctest::Approx(1 - std::exp(-1.0)));
    CHECK(std::fabs(r.estimate - r.exact) <= ThreeSigma(r.exact, 1e6));
  }
  SUBCASE("hundred founders") {
    const auto r = rmap::FoundersGenerationCheck(100, 1'000'000, 2, 1);
    CHECK(r.estimate < 1e-3);
    CHECK(r.exact == doctest::Approx(oracle::PoissonTail(100)).epsilon(1e-9));
  }
  SUBCASE("four hundred founders") {
    const auto r = rmap::FoundersGenerationCheck(400, 20'000, 2, 1);
    const double exact = oracle::PoissonTail(400);
    CHECK(r.exact == doctest::Approx(exact).epsilon(1e-9));
    // 3 sigma of a binomial with this mean, never tighter than one hit
    CHECK(std::fabs(r.estimate - exact) <= std::max(ThreeSigma(exact, 2e4), 1 / 2e4));
  }
}

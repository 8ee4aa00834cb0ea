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

#include "rmap/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "rmap/error.hpp"

namespace rmap {

std::optional<std::uint64_t> GWTrace::size_at(std::uint32_t i,
                                              std::uint32_t s) const {
  const auto& gens = generations[i];
  if (s < gens.size()) return gens[s];
  if (extinction[i]) return 0;
  return std::nullopt;
}

std::uint64_t GWTrace::partial_progeny(std::uint32_t i, std::uint32_t t) const {
  const auto& gens = generations[i];
  const std::size_t stop = std::min<std::size_t>(t, gens.size());
  return std::accumulate(gens.begin(), gens.begin() + stop, std::uint64_t{0});
}

std::uint64_t GWTrace::progeny(std::uint32_t i) const {
  return std::accumulate(generations[i].begin(), generations[i].end(),
                         std::uint64_t{0});
}

std::optional<std::uint64_t> GWTrace::total_progeny() const {
  if (truncated) return std::nullopt;
  for (const auto& tau : extinction) {
    if (!tau) return std::nullopt;
  }
  return total_particles;
}

GWTrace SimulateGW(std::uint32_t founders, std::uint32_t t_max,
                   std::uint64_t progeny_cap, Stream& stream) {
  if (founders == 0) throw InvalidArgument("need at least one founder");
  if (t_max == 0) throw InvalidArgument("t_max must be positive");
  if (progeny_cap < founders) {
    throw InvalidArgument("progeny cap below the number of founders");
  }
  GWTrace trace;
  trace.founders = founders;
  trace.generations.resize(founders);
  trace.extinction.resize(founders);
  trace.total_particles = founders;
  for (std::uint32_t i = 0; i < founders && !trace.truncated; ++i) {
    auto& gens = trace.generations[i];
    gens.push_back(1);
    for (std::uint32_t s = 0; s < t_max; ++s) {
      const std::uint64_t parents = gens.back();
      std::uint64_t children = 0;
      for (std::uint64_t p = 0; p < parents; ++p) {
        children += stream.Poisson1();
        if (trace.total_particles + children > progeny_cap) {
          trace.truncated = true;
          break;
        }
      }
      if (trace.truncated) break;
      trace.total_particles += children;
      gens.push_back(children);
      if (children == 0) {
        trace.extinction[i] = s + 1;
        break;
      }
    }
  }
  return trace;
}

double SurvivalProbExact(std::uint32_t t) {
  double alive = 1.0;
  for (std::uint32_t s = 0; s < t; ++s) alive = -std::expm1(-alive);
  return alive;
}

double ExtinctionProbExact(std::uint32_t t) {
  double q = 0.0;
  for (std::uint32_t s = 0; s < t; ++s) q = std::exp(q - 1.0);
  return q;
}

double BorelTannerLogPmf(std::uint32_t founders, std::uint64_t k) {
  if (founders == 0 || k < founders) {
    return -std::numeric_limits<double>::infinity();
  }
  const auto kk = static_cast<double>(k);
  const auto big_n = static_cast<double>(founders);
  return std::log(big_n) - std::log(kk) - kk + (kk - big_n) * std::log(kk) -
         std::lgamma(kk - big_n + 1);
}

double BorelTannerPmf(std::uint32_t founders, std::uint64_t k) {
  if (founders == 0 || k < founders) return 0.0;
  return std::exp(BorelTannerLogPmf(founders, k));
}

EventVerdict ClassifyEvent(const GWTrace& trace, const AEventParams& p) {
  if (trace.truncated) return EventVerdict::kIndeterminate;
  const std::uint32_t t = p.t;
  const std::uint32_t horizon = t + (p.d == 0 ? 1 : std::max(p.r, 1u));
  const std::uint32_t n = trace.founders;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!trace.extinction[i] && trace.recorded_through(i) < horizon) {
      return EventVerdict::kIndeterminate;
    }
  }

  constexpr std::uint32_t kAlive = std::numeric_limits<std::uint32_t>::max();
  auto tau = [&](std::uint32_t i) {
    return trace.extinction[i] ? *trace.extinction[i] : kAlive;
  };
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return tau(a) > tau(b); });

  const std::uint32_t first = order[0];
  if (trace.size_at(first, t).value() == 0) return EventVerdict::kFalse;
  const std::uint64_t mu_t = *trace.size_at(first, t);

  if (p.d == 0) {
    const std::uint64_t from_t =
        trace.progeny(first) - trace.partial_progeny(first, t);
    if (from_t > mu_t) return EventVerdict::kFalse;
    if (n < 2 || tau(order[1]) != t + 1) return EventVerdict::kFalse;
    for (std::uint32_t j = 2; j < n; ++j) {
      if (trace.size_at(order[j], t + 1).value() != 0) {
        return EventVerdict::kFalse;
      }
    }
    return EventVerdict::kTrue;
  }

  if (trace.size_at(first, t + p.r).value() != 0) return EventVerdict::kFalse;
  if (n < p.d + 1) return EventVerdict::kFalse;
  for (std::uint32_t i = 1; i <= p.d; ++i) {
    if (tau(order[i]) != t + 1) return EventVerdict::kFalse;
  }
  for (std::uint32_t j = p.d + 1; j < n; ++j) {
    if (tau(order[j]) > t) return EventVerdict::kFalse;
  }
  return EventVerdict::kTrue;
}

ConditionedSample SampleConditioned(std::uint32_t founders,
                                    std::uint64_t total,
                                    std::uint64_t max_attempts,
                                    Stream& stream) {
  if (founders == 0) throw InvalidArgument("need at least one founder");
  if (total < founders) {
    throw InvalidArgument("total progeny below the number of founders");
  }
  if (total > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument("total progeny too large for rejection sampling");
  }
  // A line with total progeny m dies out by generation m, so this horizon
  // never cuts off an acceptable trace.
  const auto horizon = static_cast<std::uint32_t>(total);
  std::uint64_t truncated = 0;
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    GWTrace trace = SimulateGW(founders, horizon, total, stream);
    if (trace.truncated) {
      ++truncated;
      continue;
    }
    if (trace.total_progeny() == total) {
      return ConditionedSample{std::move(trace), attempt};
    }
  }
  throw RejectionExhausted("no trace with total progeny " +
                               std::to_string(total) + " in " +
                               std::to_string(max_attempts) + " attempts",
                           max_attempts, truncated);
}

std::vector<std::uint32_t> TreeHeightProfile(const GWTrace& trace) {
  std::vector<std::uint32_t> heights;
  heights.reserve(trace.founders);
  for (const auto& tau : trace.extinction) {
    if (!tau) throw InvalidArgument("tree heights need an extinct trace");
    heights.push_back(*tau - 1);
  }
  std::sort(heights.begin(), heights.end(), std::greater<>());
  return heights;
}

double PoissonDeviationTailExact(std::uint32_t founders) {
  if (founders == 0) throw InvalidArgument("need at least one founder");
  const double lambda = founders;
  auto log_pmf = [&](std::uint64_t k) {
    const auto kk = static_cast<double>(k);
    return -lambda + kk * std::log(lambda) - std::lgamma(kk + 1);
  };
  // |k - N| > N/2  <=>  2k < N  or  2k > 3N
  double lower = 0;
  for (std::uint64_t k = 0; 2 * k < founders; ++k) {
    lower += std::exp(log_pmf(k));
  }
  double upper = 0;
  for (std::uint64_t k = (3ULL * founders) / 2 + 1;; ++k) {
    const double term = std::exp(log_pmf(k));
    upper += term;
    if (term <= upper * 1e-18 || term == 0.0) break;
  }
  return lower + upper;
}

namespace {

struct HitCount {
  std::uint64_t hits = 0;
  HitCount& operator+=(const HitCount& o) {
    hits += o.hits;
    return *this;
  }
};

}  // namespace

FounderCheck FoundersGenerationCheck(std::uint32_t founders,
                                     std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads) {
  if (founders == 0) throw InvalidArgument("need at least one founder");
  if (trials == 0) throw InvalidArgument("trials must be positive");
  const auto counted = internal::ParallelReduce<HitCount>(
      trials, threads, [] { return HitCount{}; },
      [&](HitCount& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
          Stream stream = Stream::ForSample(seed, founders, i);
          std::uint64_t first_generation = 0;
          for (std::uint32_t f = 0; f < founders; ++f) {
            first_generation += stream.Poisson1();
          }
          const auto diff = static_cast<std::int64_t>(first_generation) -
                            static_cast<std::int64_t>(founders);
          if (2 * std::llabs(diff) > static_cast<std::int64_t>(founders)) {
            ++acc.hits;
          }
        }
      });
  FounderCheck check;
  check.founders = founders;
  check.trials = trials;
  check.hits = counted.hits;
  check.estimate = static_cast<double>(counted.hits) / static_cast<double>(trials);
  check.exact = PoissonDeviationTailExact(founders);
  return check;
}

}  // namespace rmap

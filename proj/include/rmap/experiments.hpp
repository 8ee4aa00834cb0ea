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

#ifndef RMAP_EXPERIMENTS_HPP_
#define RMAP_EXPERIMENTS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rmap/asymptotics.hpp"
#include "rmap/branching.hpp"
#include "rmap/exact.hpp"
#include "rmap/mapping.hpp"

namespace rmap {

enum class EventKind {
  kUniqueHighest,
  kTwoHighest,
  kKHighest,
  kCrownOk,
  kMargin2,
  kBranchUnique,
  kBranchCrownOk,
};

struct Event {
  EventKind kind = EventKind::kUniqueHighest;
  std::uint32_t k = 2;  // kKHighest
  std::uint32_t c = 0;  // kBranchUnique, kBranchCrownOk

  // CLI name ("k-highest") plus the parameters it reads; validates k >= 2.
  static Event FromName(std::string_view name, std::uint32_t k = 2,
                        std::uint32_t c = 1);
  // Label as written in estimate files: "two-highest", "k-highest(3)",
  // "c-crown-ok(2)".
  static Event FromLabel(std::string_view label);
  std::string Label() const;

  // Branch level the event is evaluated at.
  std::uint32_t level() const;
  bool Holds(const ClassificationFlags& flags) const;
  // True when the event is expected to hold w.h.p.; the rare quantity is then
  // its failure, 1 - p.
  bool Typical() const;

  friend bool operator==(const Event&, const Event&) = default;
};

inline constexpr double kDefaultVertexBudget = 2e10;

struct SimulateConfig {
  std::vector<std::uint64_t> sizes;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  Event event;
  unsigned threads = 0;  // 0: hardware concurrency
  bool force = false;    // lift the vertex budget
  double vertex_budget = kDefaultVertexBudget;
  bool record_wall_time = true;
};

struct EstimateRow {
  std::uint64_t n = 0;
  std::string event;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double p_hat = 0;
  double std_error = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  double sqrt_n_scaled = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0;
};

// Binomial estimate with a normal 95% interval, or Wilson when hits < 30.
EstimateRow MakeEstimate(std::uint64_t n, const Event& event,
                         std::uint64_t samples, std::uint64_t hits,
                         std::uint64_t seed);

// Sample i for size n uses Stream::ForSample(seed, n, i), so rows do not
// depend on the thread count. Throws BudgetExceeded when sum(n) * samples
// exceeds the budget without `force`, InvalidArgument for bad configs.
std::vector<EstimateRow> RunSimulate(const SimulateConfig& config);

// Hits for samples [begin, end) of one size; the building block of
// RunSimulate, exposed for order-independence checks.
std::uint64_t CountHits(std::uint64_t n, const Event& event,
                        std::uint64_t seed, std::uint64_t begin,
                        std::uint64_t end);

std::string EstimatesToCsv(const std::vector<EstimateRow>& rows);
std::string EstimatesToJson(const std::vector<EstimateRow>& rows);
// Reads the CSV written by EstimatesToCsv; throws InvalidArgument.
std::vector<EstimateRow> ParseEstimatesCsv(std::string_view text);

struct ExactReportEntry {
  ExactCount counts;
  std::vector<BigInt> lambda_formula;  // n^n P(lambda = N), N = 0..n
  bool lambda_matches = false;
  // Enumerated vs series T_{n,h} for h = 0..n-1.
  std::vector<BigInt> height_le_enumerated;
  std::vector<BigInt> height_le_series;
  bool height_matches = false;
};

struct ExactConfig {
  std::uint32_t max_n = 0;
  bool allow_large = false;
  unsigned threads = 0;
};

std::vector<ExactReportEntry> RunExact(const ExactConfig& config);
std::string ExactReportToJson(const std::vector<ExactReportEntry>& report);
std::string HeightTableToCsv(const std::vector<HeightCountRow>& rows);

enum class GwKind { kSurvival, kProgeny, kFounders, kForest };

struct GwConfig {
  GwKind kind = GwKind::kSurvival;
  std::uint32_t t = 100;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint32_t founders = 3;
  std::uint32_t max_k = 40;   // progeny: last explicit bin
  std::uint64_t total = 6;    // forest: conditioned total progeny
  unsigned threads = 0;
};

struct SurvivalResult {
  std::uint32_t t = 0;
  std::uint64_t trials = 0;
  std::uint64_t alive = 0;
  double p_hat = 0;
  double std_error = 0;
  double exact = 0;  // 1 - q_t
  double z_score = 0;
};
SurvivalResult SurvivalExperiment(std::uint32_t t, std::uint64_t trials,
                                  std::uint64_t seed, unsigned threads = 0);

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 0;
};
// Pools adjacent cells until each expected count is at least 5.
ChiSquareResult ChiSquare(const std::vector<double>& observed,
                          const std::vector<double>& expected);

struct ProgenyResult {
  std::uint32_t founders = 0;
  std::uint32_t max_k = 0;
  std::uint64_t trials = 0;
  // counts[k - founders] for k in [founders, max_k]; `beyond` is nu > max_k.
  std::vector<std::uint64_t> counts;
  std::uint64_t beyond = 0;
  ChiSquareResult fit;
};
ProgenyResult ProgenyExperiment(std::uint32_t founders, std::uint32_t max_k,
                                std::uint64_t trials, std::uint64_t seed,
                                unsigned threads = 0);

using HeightProfile = std::vector<std::uint32_t>;

// Distribution of the sorted tree-height profile over all mappings of
// [n_vertices] with exactly `cyclic` cyclic vertices (n_vertices <= 8).
std::map<HeightProfile, std::uint64_t> ForestProfileCounts(
    std::uint32_t n_vertices, std::uint32_t cyclic);

struct ForestResult {
  std::uint32_t founders = 0;
  std::uint64_t total = 0;
  std::uint64_t accepted = 0;
  std::uint64_t attempts = 0;
  double acceptance_rate = 0;
  double borel_tanner = 0;
  std::map<HeightProfile, std::uint64_t> observed;
  std::map<HeightProfile, std::uint64_t> exact_counts;
  ChiSquareResult fit;
};
ForestResult ForestExperiment(std::uint32_t founders, std::uint64_t total,
                              std::uint64_t accepted, std::uint64_t seed);

std::string RunGw(const GwConfig& config);

struct ConstantsReport {
  double rho_paper = 0;
  double rho_paper_bracket_form = 0;  // (4 pi^2/3 - 827/144) / (2 pi)
  SeriesResult rho_series;
  double series_sum = 0;              // S
  double series_closed_form = 0;      // 4 pi^2/3 - 1477/144
  double series_tail_bound = 0;
};
ConstantsReport RunConstants(double tol = 1e-12);
std::string ConstantsToJson(const ConstantsReport& report);

struct CandidateDistance {
  std::string name;
  double value = 0;
  double distance_sigma = 0;
  bool excluded = false;  // outside the 95% interval of c
};

struct EventFit {
  std::string event;
  bool complement = false;  // fitted (1 - p_hat) sqrt(n)
  SqrtLawFit fit;
  std::vector<CandidateDistance> candidates;
};

struct FitReport {
  std::vector<EventFit> fits;
  // two-highest vs unique-highest failure, when both are present.
  std::optional<double> consistency_sigma;
  std::optional<bool> consistent;
};

// Groups rows by event and fits each group with at least three sizes.
// Throws FitFailure when no group qualifies.
FitReport RunFit(const std::vector<EstimateRow>& rows);
std::string FitReportToJson(const FitReport& report);

}  // namespace rmap

#endif  // RMAP_EXPERIMENTS_HPP_

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

#include "rmap/experiments.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <chrono>
#include <cmath>
#include "json.hpp"

#include "parallel.hpp"
#include "rmap/error.hpp"

namespace rmap {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct EventName {
  const char* name;
  EventKind kind;
};

constexpr EventName kEventNames[] = {
    {"unique-highest", EventKind::kUniqueHighest},
    {"two-highest", EventKind::kTwoHighest},
    {"k-highest", EventKind::kKHighest},
    {"crown-ok", EventKind::kCrownOk},
    {"margin2", EventKind::kMargin2},
    {"c-branch-unique", EventKind::kBranchUnique},
    {"c-crown-ok", EventKind::kBranchCrownOk},
};

std::uint32_t ParseParameter(std::string_view text, std::string_view label) {
  std::uint32_t value = 0;
  if (text.empty()) throw InvalidArgument("missing parameter in event label");
  for (char ch : text) {
    if (ch < '0' || ch > '9' || value > 100'000'000) {
      throw InvalidArgument("bad parameter in event label '" +
                            std::string(label) + "'");
    }
    value = value * 10 + static_cast<std::uint32_t>(ch - '0');
  }
  return value;
}

}  // namespace

Event Event::FromName(std::string_view name, std::uint32_t k, std::uint32_t c) {
  for (const auto& entry : kEventNames) {
    if (name != entry.name) continue;
    Event event;
    event.kind = entry.kind;
    if (entry.kind == EventKind::kKHighest) {
      if (k < 2) throw InvalidArgument("k-highest needs k >= 2");
      event.k = k;
    }
    if (entry.kind == EventKind::kBranchUnique ||
        entry.kind == EventKind::kBranchCrownOk) {
      event.c = c;
    }
    return event;
  }
  throw InvalidArgument("unknown event '" + std::string(name) + "'");
}

Event Event::FromLabel(std::string_view label) {
  const auto open = label.find('(');
  if (open == std::string_view::npos) return FromName(label);
  if (label.back() != ')') {
    throw InvalidArgument("malformed event label '" + std::string(label) + "'");
  }
  const std::string_view name = label.substr(0, open);
  const std::uint32_t value =
      ParseParameter(label.substr(open + 1, label.size() - open - 2), label);
  if (name == "k-highest") return FromName(name, value, 0);
  if (name == "c-branch-unique" || name == "c-crown-ok") {
    return FromName(name, 2, value);
  }
  throw InvalidArgument("event '" + std::string(name) +
                        "' takes no parameter");
}

std::string Event::Label() const {
  switch (kind) {
    case EventKind::kUniqueHighest: return "unique-highest";
    case EventKind::kTwoHighest: return "two-highest";
    case EventKind::kKHighest: return "k-highest(" + std::to_string(k) + ")";
    case EventKind::kCrownOk: return "crown-ok";
    case EventKind::kMargin2: return "margin2";
    case EventKind::kBranchUnique:
      return "c-branch-unique(" + std::to_string(c) + ")";
    case EventKind::kBranchCrownOk:
      return "c-crown-ok(" + std::to_string(c) + ")";
  }
  return "?";
}

std::uint32_t Event::level() const {
  return kind == EventKind::kBranchUnique || kind == EventKind::kBranchCrownOk
             ? c
             : 0;
}

bool Event::Holds(const ClassificationFlags& flags) const {
  switch (kind) {
    case EventKind::kUniqueHighest:
    case EventKind::kBranchUnique:
      return flags.unique_highest;
    case EventKind::kTwoHighest: return flags.exactly_k_highest(2);
    case EventKind::kKHighest: return flags.exactly_k_highest(k);
    case EventKind::kCrownOk:
    case EventKind::kBranchCrownOk:
      return flags.crown_ok;
    case EventKind::kMargin2: return flags.margin_ge_2;
  }
  return false;
}

bool Event::Typical() const {
  return kind != EventKind::kTwoHighest && kind != EventKind::kKHighest;
}

EstimateRow MakeEstimate(std::uint64_t n, const Event& event,
                         std::uint64_t samples, std::uint64_t hits,
                         std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("samples must be positive");
  if (hits > samples) throw InvalidArgument("hits exceed samples");
  EstimateRow row;
  row.n = n;
  row.event = event.Label();
  row.samples = samples;
  row.hits = hits;
  row.seed = seed;
  const auto s = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / s;
  row.p_hat = p;
  row.std_error = std::sqrt(p * (1 - p) / s);
  if (hits < 30) {
    const double z2 = kZ95 * kZ95;
    const double denom = 1 + z2 / s;
    const double center = (p + z2 / (2 * s)) / denom;
    const double half =
        kZ95 / denom * std::sqrt(p * (1 - p) / s + z2 / (4 * s * s));
    row.ci_lo = hits == 0 ? 0.0 : center - half;
    row.ci_hi = hits == samples ? 1.0 : center + half;
  } else {
    row.ci_lo = p - kZ95 * row.std_error;
    row.ci_hi = p + kZ95 * row.std_error;
  }
  row.ci_lo = std::clamp(row.ci_lo, 0.0, 1.0);
  row.ci_hi = std::clamp(row.ci_hi, 0.0, 1.0);
  row.sqrt_n_scaled = p * std::sqrt(static_cast<double>(n));
  return row;
}

namespace {

// Per-worker scratch for classifying sampled mappings.
struct HitCounter {
  std::uint64_t hits = 0;
  Mapping mapping;
  Decomposition decomposition;
  CrownReport report;
  CrownScratch scratch;

  void Run(std::uint64_t n, const Event& event, std::uint64_t seed,
           std::uint64_t begin, std::uint64_t end) {
    const std::uint32_t level = event.level();
    for (std::uint64_t i = begin; i < end; ++i) {
      Stream stream = Stream::ForSample(seed, n, i);
      SampleUniformInto(n, stream, mapping);
      DecomposeInto(mapping, decomposition);
      BuildCrownReportInto(decomposition, level, report, scratch);
      if (event.Holds(Classify(report))) ++hits;
    }
  }

  HitCounter& operator+=(const HitCounter& other) {
    hits += other.hits;
    return *this;
  }
};

unsigned ResolveThreads(unsigned threads) {
  return threads == 0 ? internal::DefaultThreads() : threads;
}

}  // namespace

std::uint64_t CountHits(std::uint64_t n, const Event& event,
                        std::uint64_t seed, std::uint64_t begin,
                        std::uint64_t end) {
  HitCounter counter;
  counter.Run(n, event, seed, begin, end);
  return counter.hits;
}

std::vector<EstimateRow> RunSimulate(const SimulateConfig& config) {
  if (config.sizes.empty()) throw InvalidArgument("no sizes given");
  if (config.samples == 0) throw InvalidArgument("samples must be positive");
  double vertex_ops = 0;
  for (std::uint64_t n : config.sizes) {
    if (n == 0) throw InvalidArgument("mapping size must be positive");
    if (n > std::numeric_limits<Vertex>::max()) {
      throw InvalidArgument("mapping size exceeds 32-bit vertex range");
    }
    vertex_ops += static_cast<double>(n) * static_cast<double>(config.samples);
  }
  if (vertex_ops > config.vertex_budget && !config.force) {
    throw BudgetExceeded("run needs " + std::to_string(vertex_ops) +
                         " vertex operations, above the budget of " +
                         std::to_string(config.vertex_budget) +
                         "; pass --force to run anyway");
  }
  const unsigned threads = ResolveThreads(config.threads);
  std::vector<EstimateRow> rows;
  for (std::uint64_t n : config.sizes) {
    const auto start = std::chrono::steady_clock::now();
    const HitCounter counted = internal::ParallelReduce<HitCounter>(
        config.samples, threads, [] { return HitCounter{}; },
        [&](HitCounter& acc, std::uint64_t begin, std::uint64_t end) {
          acc.Run(n, config.event, config.seed, begin, end);
        });
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    EstimateRow row = MakeEstimate(n, config.event, config.samples,
                                   counted.hits, config.seed);
    row.wall_time_s = config.record_wall_time ? elapsed.count() : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ExactReportEntry> RunExact(const ExactConfig& config) {
  if (config.max_n == 0) throw InvalidArgument("max-n must be positive");
  if (config.max_n > kEnumerateMaxN && !config.allow_large) {
    throw BudgetExceeded("exhaustive enumeration is limited to n <= " +
                         std::to_string(kEnumerateMaxN) +
                         " without the override flag");
  }
  EnumerateOptions options;
  options.allow_large = config.allow_large;
  options.threads = ResolveThreads(config.threads);
  std::vector<ExactReportEntry> report;
  for (std::uint32_t n = 1; n <= config.max_n; ++n) {
    ExactReportEntry entry;
    entry.counts = EnumerateAll(n, options);
    entry.lambda_formula = LambdaCountsExact(n);
    entry.lambda_matches = true;
    for (std::uint32_t big_n = 0; big_n <= n; ++big_n) {
      if (entry.lambda_formula[big_n] != entry.counts.lambda_hist[big_n]) {
        entry.lambda_matches = false;
      }
    }
    const auto hist = entry.counts.max_height_hist();
    BigInt cumulative = 0;
    entry.height_matches = true;
    for (std::uint32_t h = 0; h < n; ++h) {
      cumulative += hist[h];
      entry.height_le_enumerated.push_back(cumulative);
      entry.height_le_series.push_back(CountHeightLeExact(n, h));
      if (entry.height_le_series.back() != cumulative) {
        entry.height_matches = false;
      }
    }
    report.push_back(std::move(entry));
  }
  return report;
}

SurvivalResult SurvivalExperiment(std::uint32_t t, std::uint64_t trials,
                                  std::uint64_t seed, unsigned threads) {
  if (t == 0) throw InvalidArgument("t must be positive");
  if (trials == 0) throw InvalidArgument("trials must be positive");
  struct Alive {
    std::uint64_t count = 0;
    Alive& operator+=(const Alive& o) {
      count += o.count;
      return *this;
    }
  };
  const Alive alive = internal::ParallelReduce<Alive>(
      trials, ResolveThreads(threads), [] { return Alive{}; },
      [&](Alive& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
          Stream stream = Stream::ForSample(seed, t, i);
          // Same draw order as SimulateGW with one founder.
          std::uint64_t population = 1;
          for (std::uint32_t s = 0; s < t && population > 0; ++s) {
            std::uint64_t children = 0;
            for (std::uint64_t p = 0; p < population; ++p) {
              children += stream.Poisson1();
            }
            population = children;
          }
          if (population > 0) ++acc.count;
        }
      },
      4096);
  SurvivalResult r;
  r.t = t;
  r.trials = trials;
  r.alive = alive.count;
  r.p_hat = static_cast<double>(alive.count) / static_cast<double>(trials);
  r.exact = SurvivalProbExact(t);
  r.std_error =
      std::sqrt(r.exact * (1 - r.exact) / static_cast<double>(trials));
  r.z_score = (r.p_hat - r.exact) / r.std_error;
  return r;
}

ChiSquareResult ChiSquare(const std::vector<double>& observed,
                          const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw InvalidArgument("chi-square needs matching non-empty cells");
  }
  std::vector<double> obs;
  std::vector<double> exp;
  double pool_obs = 0;
  double pool_exp = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    pool_obs += observed[i];
    pool_exp += expected[i];
    if (pool_exp >= 5) {
      obs.push_back(pool_obs);
      exp.push_back(pool_exp);
      pool_obs = pool_exp = 0;
    }
  }
  if (pool_exp > 0 || pool_obs > 0) {
    if (exp.empty()) {
      obs.push_back(pool_obs);
      exp.push_back(pool_exp);
    } else {
      obs.back() += pool_obs;
      exp.back() += pool_exp;
    }
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const double diff = obs[i] - exp[i];
    r.statistic += exp[i] > 0 ? diff * diff / exp[i]
                              : (obs[i] > 0 ? HUGE_VAL : 0.0);
  }
  r.dof = obs.size() > 1 ? obs.size() - 1 : 0;
  if (r.dof == 0) {
    r.p_value = 1;
  } else if (!std::isfinite(r.statistic)) {
    r.p_value = 0;
  } else {
    r.p_value = boost::math::gamma_q(r.dof / 2.0, r.statistic / 2);
  }
  return r;
}

ProgenyResult ProgenyExperiment(std::uint32_t founders, std::uint32_t max_k,
                                std::uint64_t trials, std::uint64_t seed,
                                unsigned threads) {
  if (founders == 0) throw InvalidArgument("need at least one founder");
  if (max_k < founders) throw InvalidArgument("max-k below founders");
  if (trials == 0) throw InvalidArgument("trials must be positive");
  struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t beyond = 0;
    Histogram& operator+=(const Histogram& o) {
      for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
      beyond += o.beyond;
      return *this;
    }
  };
  const std::size_t bins = max_k - founders + 1;
  const Histogram hist = internal::ParallelReduce<Histogram>(
      trials, ResolveThreads(threads),
      [bins] { return Histogram{std::vector<std::uint64_t>(bins, 0), 0}; },
      [&](Histogram& acc, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i) {
          Stream stream = Stream::ForSample(seed, founders, i);
          // Lines with at most max_k particles die by generation max_k.
          const GWTrace trace = SimulateGW(founders, max_k, max_k, stream);
          const auto total = trace.total_progeny();
          if (total) {
            ++acc.counts[*total - founders];
          } else {
            ++acc.beyond;
          }
        }
      },
      4096);
  ProgenyResult r;
  r.founders = founders;
  r.max_k = max_k;
  r.trials = trials;
  r.counts = hist.counts;
  r.beyond = hist.beyond;

  std::vector<double> observed;
  std::vector<double> expected;
  double covered = 0;
  const auto n_trials = static_cast<double>(trials);
  for (std::size_t i = 0; i < bins; ++i) {
    const double p = BorelTannerPmf(founders, founders + i);
    covered += p;
    observed.push_back(static_cast<double>(r.counts[i]));
    expected.push_back(p * n_trials);
  }
  observed.push_back(static_cast<double>(r.beyond));
  expected.push_back(std::max(0.0, 1 - covered) * n_trials);
  r.fit = ChiSquare(observed, expected);
  return r;
}

std::map<HeightProfile, std::uint64_t> ForestProfileCounts(
    std::uint32_t n_vertices, std::uint32_t cyclic) {
  if (n_vertices > kEnumerateMaxN) {
    throw BudgetExceeded("forest profile enumeration is limited to n <= " +
                         std::to_string(kEnumerateMaxN));
  }
  std::map<HeightProfile, std::uint64_t> counts;
  Decomposition d;
  ForEachMapping(n_vertices, [&](const Mapping& m) {
    DecomposeInto(m, d);
    if (d.lambda != cyclic) return;
    HeightProfile profile;
    for (Vertex v = 0; v < n_vertices; ++v) {
      if (d.cyclic[v]) profile.push_back(d.tree_height[v]);
    }
    std::sort(profile.begin(), profile.end(), std::greater<>());
    ++counts[profile];
  });
  return counts;
}

ForestResult ForestExperiment(std::uint32_t founders, std::uint64_t total,
                              std::uint64_t accepted, std::uint64_t seed) {
  if (accepted == 0) throw InvalidArgument("need at least one sample");
  ForestResult r;
  r.founders = founders;
  r.total = total;
  r.accepted = accepted;
  r.exact_counts = ForestProfileCounts(static_cast<std::uint32_t>(total),
                                       founders);
  for (std::uint64_t i = 0; i < accepted; ++i) {
    Stream stream = Stream::ForSample(seed, (total << 20) ^ founders, i);
    ConditionedSample sample =
        SampleConditioned(founders, total, 10'000'000, stream);
    r.attempts += sample.attempts;
    ++r.observed[TreeHeightProfile(sample.trace)];
  }
  r.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(r.attempts);
  r.borel_tanner = BorelTannerPmf(founders, total);

  std::uint64_t exact_total = 0;
  for (const auto& [profile, count] : r.exact_counts) exact_total += count;
  std::map<HeightProfile, std::pair<double, double>> cells;
  for (const auto& [profile, count] : r.exact_counts) {
    cells[profile].second = static_cast<double>(accepted) *
                            static_cast<double>(count) /
                            static_cast<double>(exact_total);
  }
  for (const auto& [profile, count] : r.observed) {
    cells[profile].first = static_cast<double>(count);
  }
  std::vector<double> observed;
  std::vector<double> expected;
  for (const auto& [profile, cell] : cells) {
    observed.push_back(cell.first);
    expected.push_back(cell.second);
  }
  r.fit = ChiSquare(observed, expected);
  return r;
}

namespace {

nlohmann::json ChiSquareJson(const ChiSquareResult& r) {
  return {{"statistic", r.statistic}, {"dof", r.dof}, {"p_value", r.p_value}};
}

std::string ProfileLabel(const HeightProfile& profile) {
  std::string label;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i) label += ',';
    label += std::to_string(profile[i]);
  }
  return label;
}

}  // namespace

std::string RunGw(const GwConfig& config) {
  nlohmann::json out;
  const unsigned threads = ResolveThreads(config.threads);
  switch (config.kind) {
    case GwKind::kSurvival: {
      const SurvivalResult r =
          SurvivalExperiment(config.t, config.trials, config.seed, threads);
      out["mode"] = "survival";
      out["t"] = r.t;
      out["trials"] = r.trials;
      out["alive"] = r.alive;
      out["p_hat"] = r.p_hat;
      out["std_error"] = r.std_error;
      out["exact_survival"] = r.exact;
      out["exact_extinction"] = ExtinctionProbExact(config.t);
      out["t_times_p_hat"] = r.p_hat * r.t;
      out["t_times_exact"] = r.exact * r.t;
      out["z_score"] = r.z_score;
      nlohmann::json sweep = nlohmann::json::array();
      for (std::uint32_t t : {10u, 100u, 1000u, 10000u, 100000u}) {
        sweep.push_back({{"t", t}, {"t_times_survival", t * SurvivalProbExact(t)}});
      }
      out["exact_sweep"] = sweep;
      break;
    }
    case GwKind::kProgeny: {
      const ProgenyResult r = ProgenyExperiment(
          config.founders, config.max_k, config.trials, config.seed, threads);
      out["mode"] = "progeny";
      out["founders"] = r.founders;
      out["trials"] = r.trials;
      out["max_k"] = r.max_k;
      nlohmann::json bins = nlohmann::json::array();
      for (std::size_t i = 0; i < r.counts.size(); ++i) {
        const std::uint64_t k = r.founders + i;
        bins.push_back({{"k", k},
                        {"observed", r.counts[i]},
                        {"expected", BorelTannerPmf(r.founders, k) *
                                         static_cast<double>(r.trials)}});
      }
      out["bins"] = bins;
      out["beyond_max_k"] = r.beyond;
      out["chi_square"] = ChiSquareJson(r.fit);
      break;
    }
    case GwKind::kFounders: {
      const FounderCheck r = FoundersGenerationCheck(
          config.founders, config.trials, config.seed, threads);
      out["mode"] = "founders";
      out["founders"] = r.founders;
      out["trials"] = r.trials;
      out["hits"] = r.hits;
      out["estimate"] = r.estimate;
      out["exact_tail"] = r.exact;
      break;
    }
    case GwKind::kForest: {
      const ForestResult r = ForestExperiment(config.founders, config.total,
                                              config.trials, config.seed);
      out["mode"] = "forest";
      out["founders"] = r.founders;
      out["total"] = r.total;
      out["accepted"] = r.accepted;
      out["attempts"] = r.attempts;
      out["acceptance_rate"] = r.acceptance_rate;
      out["borel_tanner_pmf"] = r.borel_tanner;
      nlohmann::json profiles = nlohmann::json::array();
      for (const auto& [profile, count] : r.exact_counts) {
        const auto it = r.observed.find(profile);
        profiles.push_back(
            {{"heights", ProfileLabel(profile)},
             {"mappings", count},
             {"observed", it == r.observed.end() ? 0 : it->second}});
      }
      out["profiles"] = profiles;
      out["chi_square"] = ChiSquareJson(r.fit);
      break;
    }
  }
  return out.dump(2) + "\n";
}

ConstantsReport RunConstants(double tol) {
  ConstantsReport r;
  r.rho_paper = RhoPaperConstant();
  const double pi = std::acos(-1.0);
  r.rho_paper_bracket_form = (4 * pi * pi / 3 - 827.0 / 144) / (2 * pi);
  r.rho_series = RhoSeriesConstant(tol);
  r.series_sum = r.rho_series.value * 2 * pi;
  r.series_tail_bound = r.rho_series.tail_bound * 2 * pi;
  r.series_closed_form = BracketSeriesClosedForm();
  return r;
}

std::string ConstantsToJson(const ConstantsReport& r) {
  nlohmann::json out;
  out["rho_paper"] = r.rho_paper;
  out["rho_paper_bracket_form"] = r.rho_paper_bracket_form;
  out["rho_series"] = r.rho_series.value;
  out["rho_series_tail_bound"] = r.rho_series.tail_bound;
  out["S"] = r.series_sum;
  out["S_closed_form"] = r.series_closed_form;
  out["tail_bound"] = r.series_tail_bound;
  out["terms_used"] = r.rho_series.terms_used;
  out["bracket_printed"] = "827/144";
  out["bracket_recomputed"] = "1477/144";
  out["note"] =
      "rho_paper uses the printed bracket 4pi^2/3 - 827/144; summing the "
      "series gives 4pi^2/3 - 1477/144, so the two constants differ";
  return out.dump(2) + "\n";
}

FitReport RunFit(const std::vector<EstimateRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const EstimateRow*>> groups;
  for (const auto& row : rows) {
    if (!groups.count(row.event)) order.push_back(row.event);
    groups[row.event].push_back(&row);
  }
  const double candidates[] = {RhoPaperConstant(),
                               RhoSeriesConstant(1e-12).value};
  const char* candidate_names[] = {"rho_printed", "rho_series"};

  FitReport report;
  std::string problems;
  for (const auto& label : order) {
    EventFit ef;
    ef.event = label;
    try {
      ef.complement = Event::FromLabel(label).Typical();
    } catch (const InvalidArgument&) {
      ef.complement = false;
    }
    std::vector<FitRow> fit_rows;
    for (const EstimateRow* row : groups[label]) {
      fit_rows.push_back({static_cast<double>(row->n),
                          ef.complement ? 1 - row->p_hat : row->p_hat,
                          row->std_error});
    }
    try {
      ef.fit = FitSqrtLaw(fit_rows);
    } catch (const FitFailure& e) {
      problems += label + ": " + e.what() + "; ";
      continue;
    }
    for (int i = 0; i < 2; ++i) {
      CandidateDistance cd;
      cd.name = candidate_names[i];
      cd.value = candidates[i];
      cd.distance_sigma = std::abs(ef.fit.c - cd.value) / ef.fit.se_c;
      cd.excluded = !ef.fit.ci_contains(cd.value);
      ef.candidates.push_back(cd);
    }
    report.fits.push_back(std::move(ef));
  }
  if (report.fits.empty()) {
    throw FitFailure("no event has enough rows to fit: " + problems);
  }
  const EventFit* two = nullptr;
  const EventFit* unique = nullptr;
  for (const auto& ef : report.fits) {
    if (ef.event == "two-highest") two = &ef;
    if (ef.event == "unique-highest") unique = &ef;
  }
  if (two && unique) {
    const double se = std::hypot(two->fit.se_c, unique->fit.se_c);
    report.consistency_sigma = std::abs(two->fit.c - unique->fit.c) / se;
    report.consistent = *report.consistency_sigma <= kZ95;
  }
  return report;
}

std::string FitReportToJson(const FitReport& report) {
  nlohmann::json out;
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& ef : report.fits) {
    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& cd : ef.candidates) {
      candidates.push_back({{"name", cd.name},
                            {"value", cd.value},
                            {"distance_sigma", cd.distance_sigma},
                            {"excluded_by_ci95", cd.excluded}});
    }
    fits.push_back({{"event", ef.event},
                    {"response", ef.complement ? "(1 - p_hat) * sqrt(n)"
                                               : "p_hat * sqrt(n)"},
                    {"c", ef.fit.c},
                    {"se_c", ef.fit.se_c},
                    {"ci95", {ef.fit.ci_lo(), ef.fit.ci_hi()}},
                    {"b", ef.fit.b},
                    {"se_b", ef.fit.se_b},
                    {"chi2", ef.fit.chi2},
                    {"dof", ef.fit.dof},
                    {"residuals", ef.fit.residuals},
                    {"candidates", candidates}});
  }
  out["fits"] = fits;
  if (report.consistency_sigma) {
    out["two_vs_unique"] = {{"distance_sigma", *report.consistency_sigma},
                            {"consistent_ci95", *report.consistent}};
  }
  return out.dump(2) + "\n";
}

}  // namespace rmap

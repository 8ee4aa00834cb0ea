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

#include "rmap/rmap.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "rmap/error.hpp"
#include "rmap/experiments.hpp"

struct rmap_mapping {
  rmap::Mapping mapping;
  rmap::Decomposition decomposition;
};

struct rmap_report {
  std::string text;
};

namespace {

thread_local std::string last_error;

rmap_status Fail(rmap_status status, const char* message) {
  last_error = message;
  return status;
}

template <class F>
rmap_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return RMAP_OK;
  } catch (const rmap::Error& e) {
    return Fail(static_cast<rmap_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(RMAP_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return Fail(RMAP_INTERNAL_ERROR, e.what());
  }
}

void Require(bool condition, const char* message) {
  if (!condition) throw rmap::InvalidArgument(message);
}

rmap_mapping* Wrap(rmap::Mapping m) {
  auto* handle = new rmap_mapping{std::move(m), {}};
  rmap::DecomposeInto(handle->mapping, handle->decomposition);
  return handle;
}

rmap_status Emit(std::string text, rmap_report** out) {
  *out = new rmap_report{std::move(text)};
  return RMAP_OK;
}

}  // namespace

extern "C" {

const char* rmap_last_error(void) { return last_error.c_str(); }

const char* rmap_version(void) { return "1.0.0"; }

rmap_status rmap_mapping_create(const uint64_t* image, size_t n,
                                rmap_mapping** out) {
  return Guard([&] {
    Require(out != nullptr, "null output handle");
    Require(image != nullptr || n == 0, "null image array");
    *out = Wrap(rmap::Mapping::FromOneBased({image, n}));
  });
}

rmap_status rmap_mapping_parse(const char* text, rmap_mapping** out) {
  return Guard([&] {
    Require(out != nullptr && text != nullptr, "null argument");
    *out = Wrap(rmap::Mapping::Parse(text));
  });
}

rmap_status rmap_mapping_sample(uint64_t n, uint64_t seed, uint64_t index,
                                rmap_mapping** out) {
  return Guard([&] {
    Require(out != nullptr, "null output handle");
    Require(n > 0 && n <= UINT32_MAX, "mapping size out of range");
    rmap::Stream stream = rmap::Stream::ForSample(seed, n, index);
    *out = Wrap(rmap::SampleUniform(n, stream));
  });
}

void rmap_mapping_destroy(rmap_mapping* mapping) { delete mapping; }

size_t rmap_mapping_size(const rmap_mapping* mapping) {
  return mapping ? mapping->mapping.size() : 0;
}

rmap_status rmap_mapping_image(const rmap_mapping* mapping, uint64_t* out,
                               size_t capacity) {
  return Guard([&] {
    Require(mapping != nullptr && out != nullptr, "null argument");
    const auto image = mapping->mapping.image();
    const size_t count = std::min(capacity, image.size());
    for (size_t i = 0; i < count; ++i) out[i] = uint64_t{image[i]} + 1;
  });
}

rmap_status rmap_mapping_cyclic_count(const rmap_mapping* mapping,
                                      uint64_t* out) {
  return Guard([&] {
    Require(mapping != nullptr && out != nullptr, "null argument");
    *out = mapping->decomposition.lambda;
  });
}

rmap_status rmap_mapping_heights(const rmap_mapping* mapping, uint32_t* out,
                                 size_t capacity) {
  return Guard([&] {
    Require(mapping != nullptr && out != nullptr, "null argument");
    const auto& height = mapping->decomposition.height;
    std::copy_n(height.begin(), std::min(capacity, height.size()), out);
  });
}

rmap_status rmap_mapping_crown(const rmap_mapping* mapping, uint32_t c,
                               rmap_crown_summary* out) {
  return Guard([&] {
    Require(mapping != nullptr && out != nullptr, "null argument");
    const rmap::CrownReport r =
        rmap::BuildCrownReport(mapping->decomposition, c);
    const rmap::ClassificationFlags flags = rmap::Classify(r);
    out->level_c = r.level_c;
    out->branch_count = r.branch_count;
    out->top_height = r.top_height;
    out->second_height = r.second_height;
    out->tie_count = r.tie_count;
    out->top_root = r.has_branches() ? uint64_t{r.top_root} + 1 : 0;
    out->crown_size = r.crown_size();
    out->crown_roots = r.crown_roots;
    out->has_branches = flags.has_branches;
    out->unique_highest = flags.unique_highest;
    out->margin_ge_2 = flags.margin_ge_2;
    out->crown_ok = flags.crown_ok;
  });
}

rmap_status rmap_mapping_crown_vertices(const rmap_mapping* mapping,
                                        uint32_t c, uint64_t* out,
                                        size_t capacity, size_t* count) {
  return Guard([&] {
    Require(mapping != nullptr && count != nullptr, "null argument");
    Require(out != nullptr || capacity == 0, "null output array");
    const rmap::CrownReport r =
        rmap::BuildCrownReport(mapping->decomposition, c);
    *count = r.crown_size();
    const size_t copied = std::min(capacity, r.crown_size());
    for (size_t i = 0; i < copied; ++i) {
      out[i] = uint64_t{r.crown_vertices[i]} + 1;
    }
  });
}

const char* rmap_report_text(const rmap_report* report) {
  return report ? report->text.c_str() : "";
}

size_t rmap_report_length(const rmap_report* report) {
  return report ? report->text.size() : 0;
}

void rmap_report_destroy(rmap_report* report) { delete report; }

void rmap_simulate_options_init(rmap_simulate_options* options) {
  if (!options) return;
  std::memset(options, 0, sizeof *options);
  options->event = "unique-highest";
  options->k = 2;
  options->c = 1;
  options->record_wall_time = 1;
  options->vertex_budget = rmap::kDefaultVertexBudget;
  options->format = RMAP_FORMAT_CSV;
}

rmap_status rmap_run_simulate(const rmap_simulate_options* options,
                              rmap_report** out) {
  return Guard([&] {
    Require(options != nullptr && out != nullptr, "null argument");
    Require(options->sizes != nullptr || options->size_count == 0,
            "null size list");
    Require(options->event != nullptr, "null event name");
    rmap::SimulateConfig config;
    config.sizes.assign(options->sizes, options->sizes + options->size_count);
    config.samples = options->samples;
    config.seed = options->seed;
    config.event =
        rmap::Event::FromName(options->event, options->k, options->c);
    config.threads = options->threads;
    config.force = options->force != 0;
    config.vertex_budget = options->vertex_budget;
    config.record_wall_time = options->record_wall_time != 0;
    const auto rows = rmap::RunSimulate(config);
    Emit(options->format == RMAP_FORMAT_JSON ? rmap::EstimatesToJson(rows)
                                             : rmap::EstimatesToCsv(rows),
         out);
  });
}

void rmap_exact_options_init(rmap_exact_options* options) {
  if (!options) return;
  std::memset(options, 0, sizeof *options);
  options->max_n = 7;
}

rmap_status rmap_run_exact(const rmap_exact_options* options,
                           rmap_report** out) {
  return Guard([&] {
    Require(options != nullptr && out != nullptr, "null argument");
    rmap::ExactConfig config;
    config.max_n = options->max_n;
    config.allow_large = options->allow_large != 0;
    config.threads = options->threads;
    Emit(rmap::ExactReportToJson(rmap::RunExact(config)), out);
  });
}

rmap_status rmap_run_height_table(const uint32_t* ns, size_t n_count,
                                  const uint32_t* hs, size_t h_count,
                                  rmap_report** out) {
  return Guard([&] {
    Require(out != nullptr, "null output handle");
    Require(ns != nullptr && hs != nullptr && n_count > 0 && h_count > 0,
            "empty size or height list");
    const auto rows = rmap::SachkovTable({ns, ns + n_count}, {hs, hs + h_count});
    Emit(rmap::HeightTableToCsv(rows), out);
  });
}

void rmap_gw_options_init(rmap_gw_options* options) {
  if (!options) return;
  std::memset(options, 0, sizeof *options);
  const rmap::GwConfig defaults;
  options->kind = RMAP_GW_SURVIVAL;
  options->t = defaults.t;
  options->trials = 1'000'000;
  options->founders = defaults.founders;
  options->max_k = defaults.max_k;
  options->total = defaults.total;
}

rmap_status rmap_run_gw(const rmap_gw_options* options, rmap_report** out) {
  return Guard([&] {
    Require(options != nullptr && out != nullptr, "null argument");
    rmap::GwConfig config;
    switch (options->kind) {
      case RMAP_GW_SURVIVAL: config.kind = rmap::GwKind::kSurvival; break;
      case RMAP_GW_PROGENY: config.kind = rmap::GwKind::kProgeny; break;
      case RMAP_GW_FOUNDERS: config.kind = rmap::GwKind::kFounders; break;
      case RMAP_GW_FOREST: config.kind = rmap::GwKind::kForest; break;
      default: throw rmap::InvalidArgument("unknown gw experiment");
    }
    config.t = options->t;
    config.trials = options->trials;
    config.seed = options->seed;
    config.founders = options->founders;
    config.max_k = options->max_k;
    config.total = options->total;
    config.threads = options->threads;
    Emit(rmap::RunGw(config), out);
  });
}

rmap_status rmap_run_constants(double tol, rmap_report** out) {
  return Guard([&] {
    Require(out != nullptr, "null output handle");
    Require(tol > 0, "tolerance must be positive");
    Emit(rmap::ConstantsToJson(rmap::RunConstants(tol)), out);
  });
}

rmap_status rmap_run_fit(const char* csv_text, rmap_report** out) {
  return Guard([&] {
    Require(csv_text != nullptr && out != nullptr, "null argument");
    const auto rows = rmap::ParseEstimatesCsv(csv_text);
    Emit(rmap::FitReportToJson(rmap::RunFit(rows)), out);
  });
}

}  // extern "C"

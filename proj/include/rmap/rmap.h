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

#ifndef RMAP_RMAP_H_
#define RMAP_RMAP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(RMAP_BUILDING_LIBRARY)
#define RMAP_API __declspec(dllexport)
#else
#define RMAP_API __declspec(dllimport)
#endif
#else
#define RMAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmap_status {
  RMAP_OK = 0,
  RMAP_INVALID_ARGUMENT = 1,
  RMAP_BUDGET_EXCEEDED = 2,
  RMAP_FIT_FAILURE = 3,
  RMAP_OUT_OF_DOMAIN = 4,
  RMAP_INDETERMINATE = 5,
  RMAP_REJECTION_EXHAUSTED = 6,
  RMAP_IO_ERROR = 7,
  RMAP_INTERNAL_ERROR = 8
} rmap_status;

typedef enum rmap_format { RMAP_FORMAT_CSV = 0, RMAP_FORMAT_JSON = 1 } rmap_format;

typedef enum rmap_gw_kind {
  RMAP_GW_SURVIVAL = 0,
  RMAP_GW_PROGENY = 1,
  RMAP_GW_FOUNDERS = 2,
  RMAP_GW_FOREST = 3
} rmap_gw_kind;

/* Message for the last failing call on this thread; "" after success. */
RMAP_API const char* rmap_last_error(void);
RMAP_API const char* rmap_version(void);

typedef struct rmap_mapping rmap_mapping;

/* image[i] is the 1-based image of vertex i + 1. */
RMAP_API rmap_status rmap_mapping_create(const uint64_t* image, size_t n,
                                         rmap_mapping** out);
/* Whitespace separated 1-based images, e.g. "2 3 1". */
RMAP_API rmap_status rmap_mapping_parse(const char* text, rmap_mapping** out);
/* Sample `index` of the stream family keyed by (seed, n). */
RMAP_API rmap_status rmap_mapping_sample(uint64_t n, uint64_t seed,
                                         uint64_t index, rmap_mapping** out);
RMAP_API void rmap_mapping_destroy(rmap_mapping* mapping);
RMAP_API size_t rmap_mapping_size(const rmap_mapping* mapping);
/* Copies up to `capacity` 1-based images into `out`. */
RMAP_API rmap_status rmap_mapping_image(const rmap_mapping* mapping,
                                        uint64_t* out, size_t capacity);
RMAP_API rmap_status rmap_mapping_cyclic_count(const rmap_mapping* mapping,
                                               uint64_t* out);
/* Height of every vertex (distance to its cycle). */
RMAP_API rmap_status rmap_mapping_heights(const rmap_mapping* mapping,
                                          uint32_t* out, size_t capacity);

typedef struct rmap_crown_summary {
  uint32_t level_c;
  uint32_t branch_count;
  uint32_t top_height;
  uint32_t second_height;
  uint32_t tie_count;
  uint64_t top_root; /* 1-based, 0 when there is no branch */
  uint64_t crown_size;
  uint32_t crown_roots;
  int has_branches;
  int unique_highest;
  int margin_ge_2;
  int crown_ok;
} rmap_crown_summary;

RMAP_API rmap_status rmap_mapping_crown(const rmap_mapping* mapping,
                                        uint32_t c, rmap_crown_summary* out);
/* Writes the 1-based crown vertices in ascending order. `count` receives the
   full crown size even when `capacity` is too small. */
RMAP_API rmap_status rmap_mapping_crown_vertices(const rmap_mapping* mapping,
                                                 uint32_t c, uint64_t* out,
                                                 size_t capacity,
                                                 size_t* count);

/* Text output of a run (CSV or JSON). */
typedef struct rmap_report rmap_report;
RMAP_API const char* rmap_report_text(const rmap_report* report);
RMAP_API size_t rmap_report_length(const rmap_report* report);
RMAP_API void rmap_report_destroy(rmap_report* report);

typedef struct rmap_simulate_options {
  const uint64_t* sizes;
  size_t size_count;
  uint64_t samples;
  uint64_t seed;
  const char* event; /* e.g. "two-highest", "k-highest" */
  uint32_t k;
  uint32_t c;
  unsigned threads; /* 0: all hardware threads */
  int force;
  int record_wall_time;
  double vertex_budget;
  rmap_format format;
} rmap_simulate_options;

RMAP_API void rmap_simulate_options_init(rmap_simulate_options* options);
RMAP_API rmap_status rmap_run_simulate(const rmap_simulate_options* options,
                                       rmap_report** out);

typedef struct rmap_exact_options {
  uint32_t max_n;
  int allow_large;
  unsigned threads;
} rmap_exact_options;

RMAP_API void rmap_exact_options_init(rmap_exact_options* options);
RMAP_API rmap_status rmap_run_exact(const rmap_exact_options* options,
                                    rmap_report** out);
/* CSV of exact bounded-height counts against the saddle-point formula. */
RMAP_API rmap_status rmap_run_height_table(const uint32_t* ns, size_t n_count,
                                           const uint32_t* hs, size_t h_count,
                                           rmap_report** out);

typedef struct rmap_gw_options {
  rmap_gw_kind kind;
  uint32_t t;
  uint64_t trials;
  uint64_t seed;
  uint32_t founders;
  uint32_t max_k;
  uint64_t total;
  unsigned threads;
} rmap_gw_options;

RMAP_API void rmap_gw_options_init(rmap_gw_options* options);
RMAP_API rmap_status rmap_run_gw(const rmap_gw_options* options,
                                 rmap_report** out);

RMAP_API rmap_status rmap_run_constants(double tol, rmap_report** out);
/* Fits rows in the estimate CSV format. */
RMAP_API rmap_status rmap_run_fit(const char* csv_text, rmap_report** out);

#ifdef __cplusplus
}
#endif

#endif /* RMAP_RMAP_H_ */

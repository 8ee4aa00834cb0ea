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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rmap/rmap.h"

namespace {

// Exit codes for scripted callers.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;
constexpr int kExitFit = 4;

int ExitCodeFor(rmap_status status) {
  switch (status) {
    case RMAP_OK: return kExitOk;
    case RMAP_INVALID_ARGUMENT: return kExitInvalid;
    case RMAP_BUDGET_EXCEEDED: return kExitBudget;
    case RMAP_FIT_FAILURE: return kExitFit;
    default: return kExitOther;
  }
}

// Accepts "10000", "1e4" or "4e3".
bool ParseCount(const std::string& text, std::uint64_t& value) {
  const auto e = text.find_first_of("eE");
  const std::string mantissa = text.substr(0, e);
  if (mantissa.empty() ||
      mantissa.find_first_not_of("0123456789") != std::string::npos) {
    return false;
  }
  value = std::strtoull(mantissa.c_str(), nullptr, 10);
  if (e == std::string::npos) return true;
  const std::string exponent = text.substr(e + 1);
  if (exponent.empty() || exponent.size() > 2 ||
      exponent.find_first_not_of("0123456789") != std::string::npos) {
    return false;
  }
  for (int i = std::atoi(exponent.c_str()); i > 0; --i) {
    if (value > UINT64_MAX / 10) return false;
    value *= 10;
  }
  return true;
}

std::string CountValidator(const std::string& text) {
  std::uint64_t ignored = 0;
  return ParseCount(text, ignored) ? "" : "expected a count such as 1000 or 1e4";
}

std::uint64_t ToCount(const std::string& text) {
  std::uint64_t value = 0;
  ParseCount(text, value);
  return value;
}

int Finish(rmap_status status, rmap_report* report, const std::string& out) {
  if (status != RMAP_OK) {
    std::cerr << "rmap: " << rmap_last_error() << "\n";
    return ExitCodeFor(status);
  }
  int code = kExitOk;
  if (out.empty() || out == "-") {
    std::fwrite(rmap_report_text(report), 1, rmap_report_length(report),
                stdout);
  } else {
    std::ofstream file(out, std::ios::binary);
    file.write(rmap_report_text(report),
               static_cast<std::streamsize>(rmap_report_length(report)));
    if (!file) {
      std::cerr << "rmap: cannot write " << out << "\n";
      code = kExitOther;
    }
  }
  rmap_report_destroy(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random mappings: highest trees, crowns and branching processes"};
  app.require_subcommand(1);
  std::string out;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates over uniform mappings");
  std::vector<std::string> sizes;
  std::string samples_text;
  std::uint64_t seed = 0;
  std::string event = "unique-highest";
  std::uint32_t event_c = 1;
  std::uint32_t event_k = 2;
  unsigned threads = 0;
  std::string format = "csv";
  bool force = false;
  bool no_wall_time = false;
  simulate->add_option("--n", sizes, "Mapping sizes, comma separated")
      ->required()
      ->delimiter(',')
      ->check(CLI::Validator(CountValidator, "COUNT"));
  simulate->add_option("--samples", samples_text, "Samples per size")
      ->required()
      ->check(CLI::Validator(CountValidator, "COUNT"));
  simulate->add_option("--seed", seed, "64-bit seed");
  simulate
      ->add_option("--event", event,
                   "unique-highest, two-highest, k-highest, crown-ok, margin2, "
                   "c-branch-unique, c-crown-ok")
      ->capture_default_str();
  simulate->add_option("--c", event_c, "Branch level for c-* events")
      ->capture_default_str();
  simulate->add_option("--k", event_k, "Tie count for k-highest")
      ->capture_default_str();
  simulate->add_option("--threads", threads, "Worker threads (0: all)");
  simulate->add_option("--format", format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  simulate->add_option("--out", out, "Output path (default stdout)");
  simulate->add_flag("--force", force, "Run past the vertex budget");
  simulate->add_flag("--no-wall-time", no_wall_time,
                     "Write 0 in wall_time_s so reruns compare byte for byte");

  // exact
  auto* exact = app.add_subcommand("exact", "Exhaustive enumeration for small n");
  std::uint32_t max_n = 7;
  bool allow_large = false;
  bool height_table = false;
  std::vector<std::uint32_t> table_ns{50, 100, 200, 400};
  std::vector<std::uint32_t> table_hs{1, 2, 3};
  exact->add_option("--max-n", max_n)->capture_default_str();
  exact->add_flag("--allow-large", allow_large, "Lift the n <= 8 guard");
  exact->add_option("--threads", threads, "Worker threads (0: all)");
  exact->add_flag("--sachkov-table", height_table,
                  "Print bounded-height counts against the saddle-point formula");
  exact->add_option("--table-n", table_ns, "Sizes for --sachkov-table")
      ->delimiter(',');
  exact->add_option("--table-h", table_hs, "Heights for --sachkov-table")
      ->delimiter(',');
  exact->add_option("--out", out, "Output path (default stdout)");

  // gw
  auto* gw = app.add_subcommand("gw", "Critical Poisson Galton-Watson checks");
  gw->require_subcommand(1);
  rmap_gw_options gw_options;
  rmap_gw_options_init(&gw_options);
  std::string trials_text = "1e6";
  auto add_gw = [&](const char* name, const char* help, rmap_gw_kind kind) {
    auto* sub = gw->add_subcommand(name, help);
    sub->add_option("--t", gw_options.t, "Generation horizon")
        ->capture_default_str();
    sub->add_option("--trials", trials_text, "Independent trials")
        ->check(CLI::Validator(CountValidator, "COUNT"))
        ->capture_default_str();
    sub->add_option("--seed", gw_options.seed);
    sub->add_option("--founders", gw_options.founders)->capture_default_str();
    sub->add_option("--max-k", gw_options.max_k, "Last explicit progeny bin")
        ->capture_default_str();
    sub->add_option("--total", gw_options.total,
                    "Conditioned total progeny (forest)")
        ->capture_default_str();
    sub->add_option("--threads", gw_options.threads);
    sub->add_option("--out", out, "Output path (default stdout)");
    sub->callback([&gw_options, kind] { gw_options.kind = kind; });
  };
  add_gw("survival", "Survival probability against the exact recursion",
         RMAP_GW_SURVIVAL);
  add_gw("progeny", "Total progeny against the Borel-Tanner law",
         RMAP_GW_PROGENY);
  add_gw("founders", "Poisson founders generation check", RMAP_GW_FOUNDERS);
  add_gw("forest", "Conditioned forests against mapping enumeration",
         RMAP_GW_FOREST);

  // constants
  auto* constants = app.add_subcommand("constants", "Limit constants report");
  double tol = 1e-12;
  constants->add_option("--tol", tol)->capture_default_str();
  constants->add_option("--out", out, "Output path (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit p*sqrt(n) = c + b/sqrt(n)");
  std::string input;
  fit->add_option("--input", input, "Estimate CSV from simulate")
      ->required()
      ->check(CLI::ExistingFile);
  fit->add_option("--out", out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  rmap_report* report = nullptr;
  if (simulate->parsed()) {
    std::vector<std::uint64_t> ns;
    for (const auto& s : sizes) ns.push_back(ToCount(s));
    rmap_simulate_options options;
    rmap_simulate_options_init(&options);
    options.sizes = ns.data();
    options.size_count = ns.size();
    options.samples = ToCount(samples_text);
    options.seed = seed;
    options.event = event.c_str();
    options.k = event_k;
    options.c = event_c;
    options.threads = threads;
    options.force = force;
    options.record_wall_time = !no_wall_time;
    options.format = format == "json" ? RMAP_FORMAT_JSON : RMAP_FORMAT_CSV;
    const rmap_status status = rmap_run_simulate(&options, &report);
    return Finish(status, report, out);
  }
  if (exact->parsed()) {
    if (height_table) {
      const rmap_status status =
          rmap_run_height_table(table_ns.data(), table_ns.size(),
                                table_hs.data(), table_hs.size(), &report);
      return Finish(status, report, out);
    }
    rmap_exact_options options;
    rmap_exact_options_init(&options);
    options.max_n = max_n;
    options.allow_large = allow_large;
    options.threads = threads;
    const rmap_status status = rmap_run_exact(&options, &report);
    return Finish(status, report, out);
  }
  if (gw->parsed()) {
    gw_options.trials = ToCount(trials_text);
    const rmap_status status = rmap_run_gw(&gw_options, &report);
    return Finish(status, report, out);
  }
  if (constants->parsed()) {
    const rmap_status status = rmap_run_constants(tol, &report);
    return Finish(status, report, out);
  }
  if (fit->parsed()) {
    std::ifstream file(input, std::ios::binary);
    std::stringstream buffer;
    buffer << file.rdbuf();
    if (!file) {
      std::cerr << "rmap: cannot read " << input << "\n";
      return kExitInvalid;
    }
    const rmap_status status = rmap_run_fit(buffer.str().c_str(), &report);
    return Finish(status, report, out);
  }
  return kExitInvalid;
}

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

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "json.hpp"
#include "rmap/error.hpp"
#include "rmap/experiments.hpp"

namespace rmap {

namespace {

constexpr const char* kCsvVersion = "# rmap-estimates v1";
constexpr const char* kCsvHeader =
    "n,event,samples,hits,p_hat,stderr,ci_lo,ci_hi,sqrt_n_scaled,seed,"
    "wall_time_s";

std::string FormatReal(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

// Event labels contain commas only inside parentheses, so quote them.
std::string QuoteIfNeeded(const std::string& field) {
  if (field.find_first_of(",\"") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) throw InvalidArgument("unterminated quote in CSV line");
  return fields;
}

std::uint64_t ParseUnsigned(const std::string& text, const char* column) {
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') {
    throw InvalidArgument(std::string("bad integer in column ") + column +
                          ": '" + text + "'");
  }
  return value;
}

double ParseReal(const std::string& text, const char* column) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidArgument(std::string("bad number in column ") + column +
                          ": '" + text + "'");
  }
  return value;
}

std::string ToDecimal(const BigInt& value) { return value.str(); }

template <class T>
nlohmann::json DecimalArray(const std::vector<T>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : values) {
    if constexpr (std::is_same_v<T, BigInt>) {
      out.push_back(ToDecimal(v));
    } else {
      out.push_back(std::to_string(v));
    }
  }
  return out;
}

// Scientific rendering of exp(log_value) without overflowing a double.
std::string FormatFromLog(double log_value) {
  const double log10_value = log_value / std::log(10.0);
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  if (mantissa >= 9.9999999995) {
    mantissa /= 10;
    exponent += 1;
  }
  char buffer[48];
  std::snprintf(buffer, sizeof buffer, "%.10fe%+.0f", mantissa, exponent);
  return buffer;
}

}  // namespace

std::string EstimatesToCsv(const std::vector<EstimateRow>& rows) {
  std::string out = std::string(kCsvVersion) + "\n" + kCsvHeader + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ',' + QuoteIfNeeded(r.event) + ',' +
           std::to_string(r.samples) + ',' + std::to_string(r.hits) + ',' +
           FormatReal(r.p_hat) + ',' + FormatReal(r.std_error) + ',' +
           FormatReal(r.ci_lo) + ',' + FormatReal(r.ci_hi) + ',' +
           FormatReal(r.sqrt_n_scaled) + ',' + std::to_string(r.seed) + ',' +
           FormatReal(r.wall_time_s) + '\n';
  }
  return out;
}

std::string EstimatesToJson(const std::vector<EstimateRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"n", r.n},
                   {"event", r.event},
                   {"samples", r.samples},
                   {"hits", r.hits},
                   {"p_hat", r.p_hat},
                   {"stderr", r.std_error},
                   {"ci_lo", r.ci_lo},
                   {"ci_hi", r.ci_hi},
                   {"sqrt_n_scaled", r.sqrt_n_scaled},
                   {"seed", r.seed},
                   {"wall_time_s", r.wall_time_s}});
  }
  return out.dump(2) + "\n";
}

std::vector<EstimateRow> ParseEstimatesCsv(std::string_view text) {
  std::vector<EstimateRow> rows;
  bool seen_header = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{}
                                         : text.substr(end + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != kCsvHeader) {
        throw InvalidArgument("unexpected CSV header on line " +
                              std::to_string(line_no));
      }
      seen_header = true;
      continue;
    }
    const auto f = SplitCsvLine(line);
    if (f.size() != 11) {
      throw InvalidArgument("line " + std::to_string(line_no) + " has " +
                            std::to_string(f.size()) + " fields, expected 11");
    }
    EstimateRow r;
    r.n = ParseUnsigned(f[0], "n");
    r.event = f[1];
    r.samples = ParseUnsigned(f[2], "samples");
    r.hits = ParseUnsigned(f[3], "hits");
    r.p_hat = ParseReal(f[4], "p_hat");
    r.std_error = ParseReal(f[5], "stderr");
    r.ci_lo = ParseReal(f[6], "ci_lo");
    r.ci_hi = ParseReal(f[7], "ci_hi");
    r.sqrt_n_scaled = ParseReal(f[8], "sqrt_n_scaled");
    r.seed = ParseUnsigned(f[9], "seed");
    r.wall_time_s = ParseReal(f[10], "wall_time_s");
    if (r.samples == 0 || r.hits > r.samples) {
      throw InvalidArgument("inconsistent hits/samples on line " +
                            std::to_string(line_no));
    }
    rows.push_back(std::move(r));
  }
  if (!seen_header) throw InvalidArgument("CSV header not found");
  return rows;
}

std::string ExactReportToJson(const std::vector<ExactReportEntry>& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : report) {
    const ExactCount& c = e.counts;
    nlohmann::json exactly_k = nlohmann::json::object();
    for (std::size_t k = 1; k < c.exactly_k.size(); ++k) {
      if (c.exactly_k[k] != 0) {
        exactly_k[std::to_string(k)] = std::to_string(c.exactly_k[k]);
      }
    }
    nlohmann::json lambda_height = nlohmann::json::array();
    for (const auto& row : c.lambda_height) {
      lambda_height.push_back(DecimalArray(row));
    }
    out.push_back(
        {{"n", c.n},
         {"total", std::to_string(c.total)},
         {"unique_highest", std::to_string(c.unique_highest())},
         {"exactly_k_highest", exactly_k},
         {"crown_ok", std::to_string(c.crown_ok)},
         {"margin_ge_2", std::to_string(c.margin_ge_2)},
         {"lambda_hist", DecimalArray(c.lambda_hist)},
         {"lambda_formula", DecimalArray(e.lambda_formula)},
         {"lambda_matches", e.lambda_matches},
         {"lambda_height", lambda_height},
         {"height_le_enumerated", DecimalArray(e.height_le_enumerated)},
         {"height_le_series", DecimalArray(e.height_le_series)},
         {"height_matches", e.height_matches}});
  }
  return out.dump(2) + "\n";
}

std::string HeightTableToCsv(const std::vector<HeightCountRow>& rows) {
  std::ostringstream out;
  out << "n,h,exact,approx,ratio,log10_abs_ratio_minus_1,sign\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.h << ',' << ToDecimal(r.exact) << ','
        << FormatFromLog(r.approx_log) << ',' << FormatReal(r.ratio) << ','
        << FormatReal(r.log10_abs_deviation) << ',' << r.deviation_sign
        << '\n';
  }
  return out.str();
}

}  // namespace rmap

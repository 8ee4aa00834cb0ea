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

#include "rmap/exact.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <thread>

#include "rmap/error.hpp"
#include "rmap/mapping.hpp"

namespace rmap {

namespace mp = boost::multiprecision;

ExactCount::ExactCount(std::uint32_t size)
    : n(size),
      exactly_k(size + 1, 0),
      lambda_hist(size + 1, 0),
      lambda_height(size + 1, std::vector<std::uint64_t>(size, 0)) {}

std::vector<std::uint64_t> ExactCount::max_height_hist() const {
  std::vector<std::uint64_t> hist(n, 0);
  for (const auto& row : lambda_height) {
    for (std::size_t h = 0; h < row.size(); ++h) hist[h] += row[h];
  }
  return hist;
}

ExactCount& ExactCount::operator+=(const ExactCount& other) {
  if (other.n != n) throw InvalidArgument("merging counts of different n");
  total += other.total;
  crown_ok += other.crown_ok;
  margin_ge_2 += other.margin_ge_2;
  for (std::size_t k = 0; k < exactly_k.size(); ++k) {
    exactly_k[k] += other.exactly_k[k];
    lambda_hist[k] += other.lambda_hist[k];
    for (std::size_t h = 0; h < lambda_height[k].size(); ++h) {
      lambda_height[k][h] += other.lambda_height[k][h];
    }
  }
  return *this;
}

std::uint64_t MappingCount(std::uint32_t n) {
  if (n == 0) throw InvalidArgument("mapping size must be positive");
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (total > std::numeric_limits<std::uint64_t>::max() / n) {
      throw InvalidArgument("n^n does not fit in 64 bits for n = " +
                            std::to_string(n));
    }
    total *= n;
  }
  return total;
}

// Steps a Mapping through [0, n^n) in odometer order without reallocating.
class MappingOdometer {
 public:
  MappingOdometer(std::uint32_t n, std::uint64_t index) {
    std::vector<Vertex> image(n);
    for (auto& digit : image) {
      digit = static_cast<Vertex>(index % n);
      index /= n;
    }
    mapping_ = Mapping(std::move(image));
  }

  const Mapping& mapping() const { return mapping_; }

  void Advance() {
    auto& image = mapping_.image_;
    const auto n = static_cast<Vertex>(image.size());
    for (auto& digit : image) {
      if (++digit < n) return;
      digit = 0;
    }
  }

 private:
  Mapping mapping_;
};

void ForEachMapping(std::uint32_t n,
                    const std::function<void(const Mapping&)>& visit) {
  const std::uint64_t total = MappingCount(n);
  MappingOdometer odometer(n, 0);
  for (std::uint64_t i = 0; i < total; ++i, odometer.Advance()) {
    visit(odometer.mapping());
  }
}

namespace {

ExactCount EnumerateRange(std::uint32_t n, std::uint64_t begin,
                          std::uint64_t end) {
  ExactCount counts(n);
  if (begin >= end) return counts;
  MappingOdometer odometer(n, begin);
  Decomposition d;
  CrownReport report;
  CrownScratch scratch;
  for (std::uint64_t i = begin; i < end; ++i, odometer.Advance()) {
    DecomposeInto(odometer.mapping(), d);
    BuildCrownReportInto(d, 0, report, scratch);
    const ClassificationFlags flags = Classify(report);
    ++counts.total;
    ++counts.exactly_k[flags.tie_count];
    if (flags.crown_ok) ++counts.crown_ok;
    if (flags.margin_ge_2) ++counts.margin_ge_2;
    ++counts.lambda_hist[d.lambda];
    ++counts.lambda_height[d.lambda][report.top_height];
  }
  return counts;
}

}  // namespace

ExactCount EnumerateAll(std::uint32_t n, const EnumerateOptions& options) {
  if (n == 0) throw InvalidArgument("mapping size must be positive");
  if (n > kEnumerateMaxN && !options.allow_large) {
    throw BudgetExceeded("exhaustive enumeration is limited to n <= " +
                         std::to_string(kEnumerateMaxN) +
                         " without the override flag");
  }
  const std::uint64_t total = MappingCount(n);
  const std::uint64_t end = std::min(options.end, total);
  const std::uint64_t begin = std::min(options.begin, end);
  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) return EnumerateRange(n, begin, end);

  std::vector<ExactCount> partial(threads);
  std::vector<std::thread> workers;
  const std::uint64_t span = end - begin;
  for (unsigned w = 0; w < threads; ++w) {
    const std::uint64_t lo = begin + span * w / threads;
    const std::uint64_t hi = begin + span * (w + 1) / threads;
    workers.emplace_back(
        [&partial, n, w, lo, hi] { partial[w] = EnumerateRange(n, lo, hi); });
  }
  for (auto& worker : workers) worker.join();
  ExactCount counts(n);
  for (const auto& p : partial) counts += p;
  return counts;
}

std::vector<BigInt> LambdaCountsExact(std::uint32_t n) {
  if (n == 0) throw InvalidArgument("mapping size must be positive");
  // a_N = (n-1)!/(n-N)! * n^(n-N); counts[N] = N a_N. Every a_N carries the
  // factor n^(n-N), so a_{N+1} = (a_N / n)(n - N) stays exact.
  std::vector<BigInt> counts(n + 1);
  BigInt a = mp::pow(BigInt(n), n - 1);
  for (std::uint32_t big_n = 1; big_n <= n; ++big_n) {
    counts[big_n] = a * big_n;
    if (big_n < n) a = (a / n) * (n - big_n);
  }
  return counts;
}

Rational LambdaPmfExact(std::uint32_t n, std::uint32_t big_n) {
  if (n == 0 || big_n == 0 || big_n > n) return Rational(0);
  // N (n-1)(n-2)...(n-N+1) / n^N
  BigInt numerator = big_n;
  for (std::uint32_t j = 1; j < big_n; ++j) numerator *= (n - j);
  return Rational(numerator, mp::pow(BigInt(n), big_n));
}

bool LambdaInMainRange(std::uint32_t n, std::uint32_t big_n) {
  // n^(1/5) < N  <=>  N^5 > n, decided in exact integers.
  const BigInt fifth = mp::pow(BigInt(big_n), 5);
  if (fifth <= n) return false;
  const double upper = 4.0 * std::sqrt(n * std::log(static_cast<double>(n)));
  return big_n < upper;
}

Rational LambdaTailMass(std::uint32_t n) {
  if (n < 2) throw InvalidArgument("lambda tail mass needs n >= 2");
  BigInt a = mp::pow(BigInt(n), n - 1);
  BigInt tail = 0;
  for (std::uint32_t big_n = 1; big_n <= n; ++big_n) {
    if (!LambdaInMainRange(n, big_n)) tail += a * big_n;
    if (big_n < n) a = (a / n) * (n - big_n);
  }
  return Rational(tail, mp::pow(BigInt(n), n));
}

std::vector<BigInt> CountHeightLeSeries(std::uint32_t max_n,
                                        std::uint32_t h) {
  const std::size_t len = std::size_t{max_n} + 1;
  // Pascal triangle up to row max_n.
  std::vector<std::vector<BigInt>> binom(len);
  for (std::size_t m = 0; m < len; ++m) {
    binom[m].resize(m + 1);
    binom[m][0] = binom[m][m] = 1;
    for (std::size_t k = 1; k < m; ++k) {
      binom[m][k] = binom[m - 1][k - 1] + binom[m - 1][k];
    }
  }

  // Coefficients are kept as m! [x^m], which are integers for every series
  // involved. trees[m]: rooted labelled trees on m vertices of height <= k.
  std::vector<BigInt> trees(len, 0);
  if (len > 1) trees[1] = 1;
  const std::uint32_t passes = max_n == 0 ? 0 : std::min(h, max_n - 1);
  std::vector<BigInt> forest(len);
  for (std::uint32_t pass = 0; pass < passes; ++pass) {
    // forest = exp(trees) via E' = T' E.
    forest[0] = 1;
    for (std::size_t m = 1; m < len; ++m) {
      BigInt acc = 0;
      for (std::size_t k = 1; k <= m; ++k) {
        if (trees[k] != 0) acc += binom[m - 1][k - 1] * trees[k] * forest[m - k];
      }
      forest[m] = std::move(acc);
    }
    // trees = x * forest
    trees[0] = 0;
    for (std::size_t m = 1; m < len; ++m) trees[m] = forest[m - 1] * m;
  }

  // 1 / (1 - trees): cycles of trees.
  std::vector<BigInt> mappings(len);
  mappings[0] = 1;
  for (std::size_t m = 1; m < len; ++m) {
    BigInt acc = 0;
    for (std::size_t k = 1; k <= m; ++k) {
      if (trees[k] != 0) acc += binom[m][k] * trees[k] * mappings[m - k];
    }
    mappings[m] = std::move(acc);
  }
  return mappings;
}

BigInt CountHeightLeExact(std::uint32_t n, std::uint32_t h) {
  if (n == 0) throw InvalidArgument("mapping size must be positive");
  return CountHeightLeSeries(n, h)[n];
}

double ToDouble(const Rational& q) {
  using Float = mp::cpp_bin_float_50;
  const Float value =
      Float(mp::numerator(q)) / Float(mp::denominator(q));
  return value.convert_to<double>();
}

double Log(const BigInt& x) {
  using Float = mp::cpp_bin_float_50;
  return log(Float(x)).convert_to<double>();
}

double RhoRoot(std::uint32_t j, double tol) { return RhoRoot<double>(j, tol); }

double SachkovLogCount(std::uint32_t n, std::uint32_t h) {
  return SachkovLogCount<double>(n, h, 1e-15);
}

double SachkovCount(std::uint32_t n, std::uint32_t h) {
  return std::exp(SachkovLogCount(n, h));
}

double GrushoRhoApprox(double m) {
  const double half_pi = std::acos(-1.0) / 2;
  return (1 + 2 / (m * m) * half_pi * half_pi) / std::exp(1.0);
}

std::vector<HeightCountRow> SachkovTable(const std::vector<std::uint32_t>& ns,
                                         const std::vector<std::uint32_t>& hs) {
  std::vector<HeightCountRow> rows;
  if (ns.empty() || hs.empty()) return rows;
  const std::uint32_t max_n = *std::max_element(ns.begin(), ns.end());
  const HighPrecision tol("1e-480");
  for (std::uint32_t h : hs) {
    const std::vector<BigInt> exact = CountHeightLeSeries(max_n, h);
    for (std::uint32_t n : ns) {
      if (n == 0) throw InvalidArgument("mapping size must be positive");
      HeightCountRow row;
      row.n = n;
      row.h = h;
      row.exact = exact[n];
      const HighPrecision approx_log = SachkovLogCount<HighPrecision>(n, h, tol);
      const HighPrecision deviation =
          mp::expm1(approx_log - mp::log(HighPrecision(row.exact)));
      row.approx_log = approx_log.convert_to<double>();
      row.ratio = (1 + deviation).convert_to<double>();
      row.deviation_sign = deviation > 0 ? 1 : (deviation < 0 ? -1 : 0);
      row.log10_abs_deviation =
          row.deviation_sign == 0
              ? -std::numeric_limits<double>::infinity()
              : mp::log10(mp::abs(deviation)).convert_to<double>();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace rmap

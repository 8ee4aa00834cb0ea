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

#ifndef RMAP_EXACT_HPP_
#define RMAP_EXACT_HPP_

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace rmap {

class Mapping;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
// Enough digits to resolve Sachkov's approximation error up to n ~ 500.
using HighPrecision = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<500>,
    boost::multiprecision::et_off>;

// Exact class counts over all n^n mappings of [n], classified at the tree
// level (c = 0).
struct ExactCount {
  std::uint32_t n = 0;
  std::uint64_t total = 0;
  // exactly_k[k]: mappings with exactly k highest trees, k in [1, n].
  std::vector<std::uint64_t> exactly_k;
  std::uint64_t crown_ok = 0;
  std::uint64_t margin_ge_2 = 0;
  std::vector<std::uint64_t> lambda_hist;                 // [lambda]
  std::vector<std::vector<std::uint64_t>> lambda_height;  // [lambda][height]

  explicit ExactCount(std::uint32_t size = 0);

  std::uint64_t unique_highest() const { return exactly_k.at(1); }
  // Mappings whose maximal vertex height equals h, for h in [0, n-1].
  std::vector<std::uint64_t> max_height_hist() const;
  ExactCount& operator+=(const ExactCount& other);
  friend bool operator==(const ExactCount&, const ExactCount&) = default;
};

struct EnumerateOptions {
  bool allow_large = false;  // lift the n <= 8 guard
  // Half-open odometer index range; end is clamped to n^n.
  std::uint64_t begin = 0;
  std::uint64_t end = std::numeric_limits<std::uint64_t>::max();
  unsigned threads = 1;
};

inline constexpr std::uint32_t kEnumerateMaxN = 8;

// n^n, throwing InvalidArgument if it does not fit in 64 bits.
std::uint64_t MappingCount(std::uint32_t n);

// Calls visit(m) for all n^n mappings in odometer order (vertex 1 is the
// fastest digit). The Mapping reference is reused between calls.
void ForEachMapping(std::uint32_t n,
                    const std::function<void(const Mapping&)>& visit);

// Walks every mapping in odometer order (vertex 1 is the fastest digit).
// Throws BudgetExceeded for n > 8 unless allow_large is set.
ExactCount EnumerateAll(std::uint32_t n, const EnumerateOptions& options = {});

// P(lambda = N) = N (n-1)! / (n^N (n-N)!); zero outside [1, n].
Rational LambdaPmfExact(std::uint32_t n, std::uint32_t big_n);
// counts[N] = n^n P(lambda = N), an integer; index 0 is zero.
std::vector<BigInt> LambdaCountsExact(std::uint32_t n);
// Mass of lambda outside the open range (n^(1/5), 4 sqrt(n ln n)).
Rational LambdaTailMass(std::uint32_t n);
bool LambdaInMainRange(std::uint32_t n, std::uint32_t big_n);

// T_{m,h} for m = 0..max_n: mappings with every vertex at height <= h.
std::vector<BigInt> CountHeightLeSeries(std::uint32_t max_n, std::uint32_t h);
BigInt CountHeightLeExact(std::uint32_t n, std::uint32_t h);

double ToDouble(const Rational& q);
double Log(const BigInt& x);

// t_0(x) = x, t_{k+1}(x) = x exp(t_k(x)); returns t_j(x) and, if requested,
// its derivative.
template <class Real>
Real NestedExp(std::uint32_t j, const Real& x, Real* derivative = nullptr) {
  using std::exp;
  Real value = x;
  Real slope = 1;
  for (std::uint32_t k = 0; k < j; ++k) {
    const Real e = exp(value);
    slope = e * (1 + x * slope);
    value = x * e;
    if (value > 64) break;  // already far above 1; avoid overflow
  }
  if (derivative) *derivative = slope;
  return value;
}

// rho_j: the positive root of t_j(x) = 1. t_j is increasing with t_j(0) = 0
// and t_j(1) >= 1, so bisection on [0, 1] always brackets it; Newton steps
// then polish until |t_j(rho) - 1| <= tol.
template <class Real>
Real RhoRoot(std::uint32_t j, const Real& tol) {
  using std::abs;
  Real lo = 0;
  Real hi = 1;
  const Real coarse = tol > Real(1e-12) ? tol : Real(1e-12);
  while (hi - lo > coarse) {
    const Real mid = (lo + hi) / 2;
    if (NestedExp(j, mid) < 1) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Real x = (lo + hi) / 2;
  for (int iter = 0; iter < 64; ++iter) {
    Real slope;
    const Real residual = NestedExp(j, x, &slope) - 1;
    if (abs(residual) <= tol) break;
    Real next = x - residual / slope;
    if (next < lo || next > hi) next = (lo + hi) / 2;
    if (residual < 0) {
      lo = x;
    } else {
      hi = x;
    }
    x = next;
  }
  return x;
}

double RhoRoot(std::uint32_t j, double tol = 1e-12);

// log of n! rho_h^-n (1 + r_1 + r_1 r_2 + ... + r_1...r_h)^-1 with
// r_k = t_{h-k}(rho_h), the leading singular term of T_{n,h}.
template <class Real>
Real SachkovLogCount(std::uint32_t n, std::uint32_t h, const Real& tol) {
  using std::log;
  const Real rho = RhoRoot<Real>(h, tol);
  Real bracket = 1;
  Real product = 1;
  for (std::uint32_t k = 1; k <= h; ++k) {
    product *= NestedExp(h - k, rho);
    bracket += product;
  }
  Real log_factorial = 0;
  for (std::uint32_t k = 2; k <= n; ++k) log_factorial += log(Real(k));
  return log_factorial - Real(n) * log(rho) - log(bracket);
}

double SachkovLogCount(std::uint32_t n, std::uint32_t h);
// exp of the above; +inf once it leaves the double range.
double SachkovCount(std::uint32_t n, std::uint32_t h);

// (1/e)(1 + (2/m^2)(pi/2)^2)
double GrushoRhoApprox(double m);

struct HeightCountRow {
  std::uint32_t n = 0;
  std::uint32_t h = 0;
  BigInt exact;
  double approx_log = 0;  // natural log of the Sachkov value
  double ratio = 0;       // approx / exact
  // log10 |approx/exact - 1|, resolved in HighPrecision; -inf if exact.
  double log10_abs_deviation = 0;
  int deviation_sign = 0;
};

// Exact T_{n,h} against Sachkov's approximation on an (n, h) grid.
std::vector<HeightCountRow> SachkovTable(const std::vector<std::uint32_t>& ns,
                                         const std::vector<std::uint32_t>& hs);

}  // namespace rmap

#endif  // RMAP_EXACT_HPP_

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

#ifndef RMAP_ASYMPTOTICS_HPP_
#define RMAP_ASYMPTOTICS_HPP_

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace rmap {

// Printed limit constant of P(exactly two highest trees) * sqrt(n):
// 2 pi / 3 - 827 / (288 pi).
double RhoPaperConstant();

struct SeriesResult {
  double value = 0;
  std::uint64_t terms_used = 0;
  // Rigorous bound on |value - true sum| from the truncated remainder.
  double tail_bound = 0;
};

// sum_{j >= first} 1/j^2 with `terms` explicit terms. The remainder after
// m = first + terms is enclosed by 1/m < R < 1/(m - 1/2); the midpoint is
// added and half the enclosure width reported as tail_bound.
SeriesResult InverseSquareTail(std::uint64_t first, std::uint64_t terms);

// S = sum_{k >= 0} [1/(k+2)^2 + 3/(k+3)^2 + 3/(k+4)^2 + 1/(k+5)^2] using
// `terms` values of k.
SeriesResult BracketSeries(std::uint64_t terms);
// The same constant evaluated through zeta(2): 4 pi^2 / 3 - 1477 / 144.
double BracketSeriesClosedForm();
// Crude bound on the remainder of S after K terms: 8 / (K + 1).
double BracketSeriesCrudeTail(std::uint64_t terms);

// S / (2 pi), with as many terms as needed for tail_bound <= tol.
SeriesResult RhoSeriesConstant(double tol = 1e-12);

// z = N / sqrt(n) must lie in (n^-1/4, 4 sqrt(ln n)); otherwise OutOfDomain.
bool InAsymptoticRange(std::uint64_t n, std::uint64_t big_n);
// z e^{-z^2/2} / sqrt(n) ~ P(lambda = N)
double LambdaPmfAsym(std::uint64_t n, std::uint64_t big_n);
// z e^{-z^2/2} / (n sqrt(2 pi)) ~ P(nu_N = n + N)
double TotalProgenyAsym(std::uint64_t n, std::uint64_t big_n);

struct AlphaInputs {
  double theta = 0;
  std::uint64_t t = 1;
  std::uint64_t n = 1;
};

struct AlphaReport {
  double u = 0;                 // t sqrt(|theta| / n)
  std::complex<double> beta;    // sqrt(-2 i theta / n), Re > 0
  std::complex<double> alpha;   // beta (1 + e^{-t beta}) / (1 - e^{-t beta})
  double modulus_bound = 0;     // 3 (u + 1) / t
  double intermediate_bound = 0;  // u (1 + e^{-u}) / (t (1 - e^{-u}))
  bool re_alpha_positive = false;
  bool modulus_ok = false;      // |alpha| <= 3 (u + 1) / t
  bool scalar_ok = false;       // 1 <= u / (1 - e^{-u}) <= 3 (u + 1)
  // |alpha| <= intermediate_bound. Reported, not required: for large u the
  // modulus tends to sqrt(2) u / t while this bound tends to u / t.
  bool intermediate_ok = false;

  bool all_pass() const { return re_alpha_positive && modulus_ok && scalar_ok; }
};

// Throws InvalidArgument for theta = 0 (beta vanishes) or t, n = 0.
AlphaReport AlphaBoundsCheck(const AlphaInputs& in);

// x / (1 - e^{-x}), continuous at 0.
double ScaledExpRatio(double x);

struct FitRow {
  double n = 0;
  double p_hat = 0;
  double std_error = 0;
};

enum class FitModel { kWithCorrection, kConstantOnly };

struct SqrtLawFit {
  double c = 0;
  double b = 0;
  double se_c = 0;
  double se_b = 0;
  double cov_cb = 0;
  double chi2 = 0;
  std::size_t dof = 0;
  std::vector<double> residuals;  // standardized

  double ci_lo() const { return c - 1.959963984540054 * se_c; }
  double ci_hi() const { return c + 1.959963984540054 * se_c; }
  bool ci_contains(double value) const {
    return value >= ci_lo() && value <= ci_hi();
  }
};

// Weighted least squares of y = p_hat sqrt(n) on c + b n^{-1/2}, with weights
// 1 / (std_error sqrt(n))^2. Throws FitFailure for fewer than three distinct n
// (one for kConstantOnly) or a non-positive std_error.
SqrtLawFit FitSqrtLaw(std::span<const FitRow> rows,
                      FitModel model = FitModel::kWithCorrection);

}  // namespace rmap

#endif  // RMAP_ASYMPTOTICS_HPP_

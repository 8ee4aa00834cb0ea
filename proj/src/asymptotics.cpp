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

#include "rmap/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "rmap/error.hpp"

namespace rmap {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

// e^z - 1 without cancellation for small |z|.
std::complex<double> ComplexExpm1(std::complex<double> z) {
  const double a = z.real();
  const double b = z.imag();
  const double half_sin = std::sin(b / 2);
  return {std::expm1(a) * std::cos(b) - 2 * half_sin * half_sin,
          std::exp(a) * std::sin(b)};
}

constexpr std::uint64_t kOffsets[] = {2, 3, 4, 5};
constexpr double kWeights[] = {1, 3, 3, 1};

}  // namespace

double RhoPaperConstant() { return 2 * kPi / 3 - 827 / (288 * kPi); }

SeriesResult InverseSquareTail(std::uint64_t first, std::uint64_t terms) {
  if (first == 0) throw InvalidArgument("inverse-square series starts at 1");
  CompensatedSum sum;
  // Smallest terms first.
  for (std::uint64_t i = terms; i > 0; --i) {
    const auto j = static_cast<double>(first + i - 1);
    sum.Add(1 / (j * j));
  }
  const auto m = static_cast<double>(first + terms);
  const double lower = 1 / m;
  const double upper = 1 / (m - 0.5);
  SeriesResult result;
  result.terms_used = terms;
  result.value = sum.value() + (lower + upper) / 2;
  result.tail_bound = (upper - lower) / 2;
  return result;
}

SeriesResult BracketSeries(std::uint64_t terms) {
  SeriesResult total;
  total.terms_used = terms;
  for (int i = 0; i < 4; ++i) {
    const SeriesResult part = InverseSquareTail(kOffsets[i], terms);
    total.value += kWeights[i] * part.value;
    total.tail_bound += kWeights[i] * part.tail_bound;
  }
  return total;
}

double BracketSeriesClosedForm() { return 4 * kPi * kPi / 3 - 1477.0 / 144; }

double BracketSeriesCrudeTail(std::uint64_t terms) {
  return 8.0 / static_cast<double>(terms + 1);
}

SeriesResult RhoSeriesConstant(double tol) {
  if (!(tol > 0)) throw InvalidArgument("tolerance must be positive");
  // Each remainder enclosure has half-width ~ 1/(4 m^2); eight of them.
  auto terms = static_cast<std::uint64_t>(std::ceil(std::sqrt(4 / tol)));
  SeriesResult s = BracketSeries(terms);
  while (s.tail_bound / (2 * kPi) > tol) {
    terms *= 2;
    s = BracketSeries(terms);
  }
  s.value /= 2 * kPi;
  s.tail_bound /= 2 * kPi;
  return s;
}

bool InAsymptoticRange(std::uint64_t n, std::uint64_t big_n) {
  if (n < 2 || big_n == 0) return false;
  const double nn = static_cast<double>(n);
  const double z = static_cast<double>(big_n) / std::sqrt(nn);
  return z > std::pow(nn, -0.25) && z < 4 * std::sqrt(std::log(nn));
}

namespace {

double CheckedZ(std::uint64_t n, std::uint64_t big_n) {
  if (!InAsymptoticRange(n, big_n)) {
    throw OutOfDomain("N = " + std::to_string(big_n) + " is outside the range " +
                      "(n^-1/4, 4 sqrt(ln n)) of z = N/sqrt(n) for n = " +
                      std::to_string(n));
  }
  return static_cast<double>(big_n) / std::sqrt(static_cast<double>(n));
}

}  // namespace

double LambdaPmfAsym(std::uint64_t n, std::uint64_t big_n) {
  const double z = CheckedZ(n, big_n);
  return z * std::exp(-z * z / 2) / std::sqrt(static_cast<double>(n));
}

double TotalProgenyAsym(std::uint64_t n, std::uint64_t big_n) {
  const double z = CheckedZ(n, big_n);
  return z * std::exp(-z * z / 2) /
         (static_cast<double>(n) * std::sqrt(2 * kPi));
}

double ScaledExpRatio(double x) {
  if (x == 0) return 1;
  return x / -std::expm1(-x);
}

AlphaReport AlphaBoundsCheck(const AlphaInputs& in) {
  if (in.theta == 0) throw InvalidArgument("theta = 0 makes beta vanish");
  if (in.t == 0 || in.n == 0) throw InvalidArgument("t and n must be positive");
  const auto t = static_cast<double>(in.t);
  const auto n = static_cast<double>(in.n);
  AlphaReport r;
  r.u = t * std::sqrt(std::abs(in.theta) / n);
  // std::sqrt is the principal branch: Re >= 0, and > 0 off the negative axis.
  r.beta = std::sqrt(std::complex<double>(0, -2 * in.theta / n));
  const std::complex<double> decay = std::exp(-t * r.beta);
  r.alpha = r.beta * (1.0 + decay) / -ComplexExpm1(-t * r.beta);
  r.modulus_bound = 3 * (r.u + 1) / t;
  r.intermediate_bound =
      r.u == 0 ? 2 / t
               : r.u * (1 + std::exp(-r.u)) / (t * -std::expm1(-r.u));
  const double modulus = std::abs(r.alpha);
  const double ratio = ScaledExpRatio(r.u);
  r.re_alpha_positive = r.alpha.real() > 0;
  r.modulus_ok = modulus <= r.modulus_bound;
  r.scalar_ok = ratio >= 1 && ratio <= 3 * (r.u + 1);
  r.intermediate_ok = modulus <= r.intermediate_bound;
  return r;
}

SqrtLawFit FitSqrtLaw(std::span<const FitRow> rows, FitModel model) {
  std::set<double> distinct;
  for (const auto& row : rows) {
    if (!(row.n > 0)) throw FitFailure("row with non-positive n");
    if (!(row.std_error > 0)) {
      throw FitFailure("row at n = " + std::to_string(row.n) +
                       " has non-positive std_error");
    }
    distinct.insert(row.n);
  }
  const std::size_t needed = model == FitModel::kWithCorrection ? 3 : 1;
  if (distinct.size() < needed) {
    throw FitFailure("need at least " + std::to_string(needed) +
                     " distinct values of n, got " +
                     std::to_string(distinct.size()));
  }

  // Normal equations in the basis (1, x) with x = n^{-1/2}.
  double s_w = 0, s_x = 0, s_xx = 0, s_y = 0, s_xy = 0;
  for (const auto& row : rows) {
    const double root = std::sqrt(row.n);
    const double y = row.p_hat * root;
    const double sigma = row.std_error * root;
    const double w = 1 / (sigma * sigma);
    const double x = 1 / root;
    s_w += w;
    s_x += w * x;
    s_xx += w * x * x;
    s_y += w * y;
    s_xy += w * x * y;
  }

  SqrtLawFit fit;
  if (model == FitModel::kConstantOnly) {
    fit.c = s_y / s_w;
    fit.se_c = std::sqrt(1 / s_w);
    fit.dof = rows.size() - 1;
  } else {
    const double det = s_w * s_xx - s_x * s_x;
    if (!(det > 1e-300 * s_w * s_xx)) {
      throw FitFailure("singular design: n values do not separate the terms");
    }
    fit.c = (s_xx * s_y - s_x * s_xy) / det;
    fit.b = (s_w * s_xy - s_x * s_y) / det;
    fit.se_c = std::sqrt(s_xx / det);
    fit.se_b = std::sqrt(s_w / det);
    fit.cov_cb = -s_x / det;
    fit.dof = rows.size() - 2;
  }
  for (const auto& row : rows) {
    const double root = std::sqrt(row.n);
    const double predicted = fit.c + fit.b / root;
    const double r = (row.p_hat * root - predicted) / (row.std_error * root);
    fit.residuals.push_back(r);
    fit.chi2 += r * r;
  }
  return fit;
}

}  // namespace rmap

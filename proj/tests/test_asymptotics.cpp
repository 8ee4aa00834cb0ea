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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "rmap/asymptotics.hpp"
#include "rmap/error.hpp"
#include "rmap/exact.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// zeta(2) minus its first `skip` terms.
double ZetaTwoFrom(std::uint64_t first) {
  double head = 0;
  for (std::uint64_t j = 1; j < first; ++j) head += 1.0 / double(j * j);
  return kPi * kPi / 6 - head;
}

}  // namespace

TEST_CASE("rho_paper_constant") {
  const double rho = rmap::RhoPaperConstant();
  CHECK(std::fabs(rho - 1.1803596) < 5e-7);
  CHECK(std::fabs(rho - (4 * kPi * kPi / 3 - 827.0 / 144) / (2 * kPi)) < 1e-12);
  CHECK(rho > 0);
  CHECK(rho < 2);
}

TEST_CASE("rho_series_constant") {
  const auto rho = rmap::RhoSeriesConstant(1e-12);
  CHECK(rho.tail_bound <= 1e-12);
  CHECK(std::fabs(rho.value - 0.4619517) < 1e-7);
  CHECK(std::fabs(rho.value * 2 * kPi - (4 * kPi * kPi / 3 - 1477.0 / 144)) <
        1e-11);
  CHECK(std::fabs(rho.value - rmap::RhoPaperConstant()) > 0.5);
  CHECK(rmap::BracketSeriesClosedForm() ==
        doctest::Approx(4 * kPi * kPi / 3 - 1477.0 / 144).epsilon(1e-15));

  SUBCASE("tail bound is honest under doubling") {
    for (std::uint64_t terms : {10ULL, 1000ULL, 100000ULL}) {
      const auto coarse = rmap::BracketSeries(terms);
      const auto fine = rmap::BracketSeries(2 * terms);
      CHECK(coarse.tail_bound >= 0);
      CHECK(std::fabs(coarse.value - fine.value) <=
            coarse.tail_bound + fine.tail_bound + 1e-15);
      CHECK(std::fabs(coarse.value - rmap::BracketSeriesClosedForm()) <=
            coarse.tail_bound + 1e-14);
    }
  }
  SUBCASE("plain partial sums stay within 8 / K") {
    for (std::uint64_t k_terms : {1ULL, 10ULL, 1000ULL}) {
      double partial = 0;
      for (std::uint64_t k = 0; k < k_terms; ++k) {
        const double kk = double(k);
        partial += 1 / ((kk + 2) * (kk + 2)) + 3 / ((kk + 3) * (kk + 3)) +
                   3 / ((kk + 4) * (kk + 4)) + 1 / ((kk + 5) * (kk + 5));
      }
      const double remainder = rmap::BracketSeriesClosedForm() - partial;
      CHECK(remainder >= 0);
      CHECK(remainder <= 8.0 / k_terms);
      CHECK(remainder <= rmap::BracketSeriesCrudeTail(k_terms));
    }
  }
  SUBCASE("each sub-series is a shifted zeta(2)") {
    for (std::uint64_t first : {2ULL, 3ULL, 4ULL, 5ULL}) {
      const auto tail = rmap::InverseSquareTail(first, 5000);
      CHECK(std::fabs(tail.value - ZetaTwoFrom(first)) <= tail.tail_bound + 1e-14);
    }
    CHECK_THROWS_AS(rmap::InverseSquareTail(0, 10), rmap::InvalidArgument);
  }
}

TEST_CASE("lambda_pmf_asym") {
  CHECK(rmap::LambdaPmfAsym(10'000, 100) ==
        doctest::Approx(std::exp(-0.5) / 100).epsilon(1e-12));
  CHECK(rmap::LambdaPmfAsym(10'000, 100) == doctest::Approx(0.0060653).epsilon(1e-4));
  // z e^{-z^2/2} peaks at z = 1
  for (std::uint64_t big_n = 60; big_n <= 140; big_n += 10) {
    CHECK(rmap::LambdaPmfAsym(10'000, big_n) <= rmap::LambdaPmfAsym(10'000, 100));
  }
  CHECK_THROWS_AS(rmap::LambdaPmfAsym(10'000, 5), rmap::OutOfDomain);
  CHECK_THROWS_AS(rmap::LambdaPmfAsym(10'000, 2000), rmap::OutOfDomain);
  CHECK_FALSE(rmap::InAsymptoticRange(10'000, 10));
  CHECK(rmap::InAsymptoticRange(10'000, 11));
  SUBCASE("within 5% of the exact law on z in [0.5, 3] at n = 10^4") {
    for (std::uint64_t big_n = 50; big_n <= 300; ++big_n) {
      const double exact = rmap::ToDouble(
          rmap::LambdaPmfExact(10'000, static_cast<std::uint32_t>(big_n)));
      CAPTURE(big_n);
      CHECK(std::fabs(rmap::LambdaPmfAsym(10'000, big_n) / exact - 1) <= 0.05);
    }
  }
}

TEST_CASE("total_progeny_asym") {
  for (std::uint64_t n : {100ULL, 10'000ULL, 1'000'000ULL}) {
    for (double z : {0.5, 1.0, 2.0}) {
      const auto big_n = static_cast<std::uint64_t>(z * std::sqrt(double(n)));
      const double lhs = rmap::TotalProgenyAsym(n, big_n) * n * std::sqrt(2 * kPi);
      const double rhs = rmap::LambdaPmfAsym(n, big_n) * std::sqrt(double(n));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
  // fixed z: scales as 1/n
  CHECK(rmap::TotalProgenyAsym(10'000, 100) / rmap::TotalProgenyAsym(40'000, 200) ==
        doctest::Approx(4).epsilon(1e-12));
  const double smoke = rmap::TotalProgenyAsym(100, 10);
  CHECK(std::isfinite(smoke));
  CHECK(smoke > 0);
  CHECK_THROWS_AS(rmap::TotalProgenyAsym(100, 1), rmap::OutOfDomain);
}

TEST_CASE("alpha_bounds_check") {
  SUBCASE("log-spaced grid") {
    int points = 0;
    for (std::uint64_t t : {100ULL, 1000ULL}) {
      for (int i = 0; i <= 60; ++i) {
        const double magnitude = std::pow(10.0, -4 + 6.0 * i / 60);
        for (double sign : {-1.0, 1.0}) {
          const auto r = rmap::AlphaBoundsCheck({sign * magnitude, t, 1'000'000});
          CAPTURE(sign * magnitude);
          CAPTURE(t);
          CHECK(r.beta.real() > 0);
          CHECK(r.re_alpha_positive);
          CHECK(r.modulus_ok);
          CHECK(r.scalar_ok);
          CHECK(r.all_pass());
          ++points;
        }
      }
    }
    CHECK(points == 244);
  }
  SUBCASE("direct evaluation") {
    const double theta = 3.0;
    const std::uint64_t t = 100;
    const std::uint64_t n = 1'000'000;
    const auto beta = std::sqrt(std::complex<double>(0, -2 * theta / n));
    const auto e = std::exp(-double(t) * beta);
    const auto alpha = beta * (1.0 + e) / (1.0 - e);
    const auto r = rmap::AlphaBoundsCheck({theta, t, n});
    CHECK(std::abs(r.alpha - alpha) < 1e-12 * std::abs(alpha));
    CHECK(r.u == doctest::Approx(t * std::sqrt(theta / n)));
  }
  SUBCASE("large u: |alpha| approaches |beta|") {
    const auto r = rmap::AlphaBoundsCheck({100.0, 1000, 1'000'000});
    CHECK(r.u == doctest::Approx(10));
    CHECK(std::abs(r.alpha) == doctest::Approx(std::abs(r.beta)).epsilon(1e-4));
    CHECK(std::abs(r.alpha) < r.modulus_bound);
  }
  SUBCASE("scalar inequality") {
    CHECK(rmap::ScaledExpRatio(0) == 1);
    CHECK(rmap::ScaledExpRatio(1e-9) == doctest::Approx(1).epsilon(1e-8));
    for (double x = 1e-6; x < 100; x *= 1.7) {
      const double v = rmap::ScaledExpRatio(x);
      CHECK(v >= 1);
      CHECK(v <= 3 * (x + 1));
    }
  }
  CHECK_THROWS_AS(rmap::AlphaBoundsCheck({0.0, 10, 10}), rmap::InvalidArgument);
}

TEST_CASE("fit_sqrt_law") {
  SUBCASE("recovers c from noisy synthetic rows") {
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> noise(0, 1);
    std::vector<rmap::FitRow> rows;
    for (double n : {1e2, 3e2, 1e3, 3e3, 1e4, 3e4}) {
      const double se = 1e-3;
      const double p = (0.5 + 3 / std::sqrt(n)) / std::sqrt(n);
      rows.push_back({n, p + se * noise(rng), se});
    }
    const auto fit = rmap::FitSqrtLaw(rows);
    CHECK(std::fabs(fit.c - 0.5) <= 2 * fit.se_c);
    CHECK(fit.dof == rows.size() - 2);
    CHECK(fit.residuals.size() == rows.size());
  }
  SUBCASE("flat data gives the weighted mean") {
    const std::vector<rmap::FitRow> rows = {
        {100, 0.07 / 10, 0.001}, {400, 0.07 / 20, 0.002}, {900, 0.07 / 30, 0.0005}};
    const auto fit = rmap::FitSqrtLaw(rows);
    CHECK(fit.c == doctest::Approx(0.07).epsilon(1e-9));
    CHECK(std::fabs(fit.b) < 1e-9);
    const auto mean = rmap::FitSqrtLaw(rows, rmap::FitModel::kConstantOnly);
    CHECK(mean.c == doctest::Approx(0.07).epsilon(1e-9));
  }
  SUBCASE("weighted mean for the constant model") {
    const std::vector<rmap::FitRow> rows = {{100, 0.01, 0.001}, {400, 0.006, 0.001}};
    // y = 0.1, 0.12; sigma = 0.01, 0.02
    const double expected = (0.1 / 1e-4 + 0.12 / 4e-4) / (1 / 1e-4 + 1 / 4e-4);
    CHECK(rmap::FitSqrtLaw(rows, rmap::FitModel::kConstantOnly).c ==
          doctest::Approx(expected));
  }
  SUBCASE("rejects degenerate designs") {
    const std::vector<rmap::FitRow> same = {{100, 0.1, 0.01}, {100, 0.1, 0.01}, {100, 0.1, 0.01}};
    CHECK_THROWS_AS(rmap::FitSqrtLaw(same), rmap::FitFailure);
    const std::vector<rmap::FitRow> zero = {{100, 0.1, 0}, {200, 0.1, 0.01}, {300, 0.1, 0.01}};
    CHECK_THROWS_AS(rmap::FitSqrtLaw(zero), rmap::FitFailure);
  }
}

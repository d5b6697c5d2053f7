/* Copyright 2026 The pfrlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "pfrlab/errors.hpp"
#include "pfrlab/rd_solver.hpp"

using namespace pfrlab;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// Reference values from an independent convex-program solve and the closed
// binary-Hamming formulas (tests/oracles/frozen_values.py).
constexpr double kBscRate = 0.500084041835472;
constexpr double kBscSlope = 3.0163018123291008;
constexpr double kBern02Rate = 0.2529325012980811;
constexpr double kTernaryRate = 0.2609640438734499;

const FinitePmf kUniform2 = FinitePmf::uniform(2);
const DistortionMatrix kHamming2 = DistortionMatrix::hamming(2);

}  // namespace

TEST_CASE("uniform binary source under Hamming distortion") {
  const auto sol = solve_at_distortion(kUniform2, kHamming2, 0.11);
  CHECK(std::abs(sol.rate - kBscRate) <= 1e-6);
  CHECK(std::abs(sol.slope_lambda - kBscSlope) <= 1e-4);
  CHECK(std::abs(sol.distortion - 0.11) <= 1e-9);
  CHECK(sol.kernel(0, 0) == doctest::Approx(0.89).epsilon(1e-6));
  CHECK(sol.output_marginal[0] == doctest::Approx(0.5));
}

TEST_CASE("skewed binary source") {
  const FinitePmf src({0.8, 0.2});
  const auto sol = solve_at_distortion(src, kHamming2, 0.1);
  CHECK(std::abs(sol.rate - kBern02Rate) <= 1e-6);
  CHECK(std::abs(sol.rate - (h2(0.2) - h2(0.1))) <= 1e-6);
  CHECK(std::abs(sol.slope_lambda - std::log2(9.0)) <= 1e-4);
}

TEST_CASE("ternary source matches the convex-program reference") {
  const FinitePmf src({0.5, 0.3, 0.2});
  const DistortionMatrix d({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto sol = solve_at_distortion(src, d, 0.4);
  CHECK(std::abs(sol.rate - kTernaryRate) <= 1e-6);
}

TEST_CASE("parametric curve is monotone and matches 1 - h(D)") {
  double prev_d = 1.0, prev_r = -1.0;
  int sampled = 0;
  for (double s = 0.25; s <= 12.0; s += 0.25) {
    const auto sol = ba_fixed_slope(kUniform2, kHamming2, s);
    CHECK(sol.distortion <= prev_d + 1e-12);
    CHECK(sol.rate >= prev_r - 1e-12);
    prev_d = sol.distortion;
    prev_r = sol.rate;
    if (sol.distortion > 1e-3 && sol.distortion < 0.5) {
      CHECK(std::abs(sol.rate - (1.0 - h2(sol.distortion))) <= 1e-4);
      ++sampled;
    }
  }
  CHECK(sampled >= 10);
}

TEST_CASE("slope zero and endpoints") {
  const FinitePmf src({0.7, 0.3});
  const auto z = ba_fixed_slope(src, kHamming2, 0.0);
  CHECK(z.rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(z.output_marginal[0] == 1.0);
  CHECK(z.distortion == doctest::Approx(0.3));
  CHECK(zero_rate_distortion(src, kHamming2) == doctest::Approx(0.3));
  CHECK(min_achievable_distortion(src, kHamming2) == 0.0);

  const auto above = solve_at_distortion(src, kHamming2, 0.45);
  CHECK(above.rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(above.slope_lambda == 0.0);
  CHECK_THROWS_AS(solve_at_distortion(src, kHamming2, 0.0), TargetOutOfRange);
  CHECK_THROWS_AS(solve_at_distortion(src, kHamming2, -1.0), TargetOutOfRange);
}

TEST_CASE("zero distortion matrix collapses to a single point") {
  const DistortionMatrix zero({{0, 0}, {0, 0}});
  const auto sol = solve_at_distortion(kUniform2, zero, 0.0);
  CHECK(sol.rate == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sol.distortion == 0.0);
}

TEST_CASE("iteration budget is enforced") {
  BaOptions opts;
  opts.max_iter = 1;
  opts.tol = 1e-14;
  const FinitePmf src({0.5, 0.3, 0.2});
  const DistortionMatrix d({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  try {
    (void)ba_fixed_slope(src, d, 2.0, opts);
    FAIL("expected NotConverged");
  } catch (const NotConverged& e) {
    CHECK(e.last_iterate().iterations == 1);
  }
}

TEST_CASE("tilted information identities on the solution support") {
  const auto sol = solve_at_distortion(kUniform2, kHamming2, 0.11);
  for (SymbolId x = 0; x < 2; ++x) {
    const double j = tilted_information(sol, kHamming2, x);
    CHECK(j == doctest::Approx(kBscRate).epsilon(1e-6));
    for (SymbolId y = 0; y < 2; ++y) {
      const double delta = kHamming2(x, y);
      const double jd = tilted_information(sol, kHamming2, x, delta);
      CHECK(std::abs(jd - (j - sol.slope_lambda * (delta - sol.distortion))) <= 1e-9);
      const double iota = std::log2(sol.kernel(x, y) / sol.output_marginal[y]);
      CHECK(std::abs(jd - iota) <= 1e-6);
    }
  }
}

TEST_CASE("expected tilted information equals the rate") {
  const FinitePmf src({0.5, 0.3, 0.2});
  const DistortionMatrix d({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  const auto sol = solve_at_distortion(src, d, 0.4);
  double e = 0.0;
  for (SymbolId x = 0; x < 3; ++x) e += src[x] * tilted_information(sol, d, x);
  CHECK(std::abs(e - sol.rate) <= 1e-8);
}

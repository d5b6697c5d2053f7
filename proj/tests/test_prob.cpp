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
#include "pfrlab/prob.hpp"

using namespace pfrlab;

// Values below were computed offline with an independent reference
// implementation (tests/oracles/frozen_values.py).
constexpr double kEntropy82 = 0.7219280948873623;
constexpr double kKl82Uniform = 0.27807190511263774;
constexpr double kIotaBsc011 = 0.8318772411916731;

TEST_CASE("pmf validation") {
  CHECK_NOTHROW(FinitePmf({0.25, 0.75}));
  CHECK_THROWS_AS(FinitePmf({0.5, 0.4}), InvalidDistribution);
  CHECK_THROWS_AS(FinitePmf({1.2, -0.2}), InvalidDistribution);
  CHECK_THROWS_AS(FinitePmf(std::vector<double>{}), InvalidDistribution);
  CHECK_THROWS_AS(FinitePmf({NAN, 1.0}), InvalidDistribution);
  CHECK_NOTHROW(FinitePmf({0.5, 0.5 + 5e-13}));
  CHECK_THROWS_AS(FinitePmf::normalized({0.0, 0.0}), InvalidDistribution);
  const auto n = FinitePmf::normalized({1.0, 3.0});
  CHECK(n[1] == doctest::Approx(0.75));
  const auto pm = FinitePmf::point_mass(4, 2);
  CHECK(pm[2] == 1.0);
  CHECK(pm[0] == 0.0);
}

TEST_CASE("kernel and distortion validation") {
  CHECK_THROWS_AS(Kernel({{0.5, 0.5}, {0.3}}), InvalidDistribution);
  CHECK_THROWS_AS(Kernel({{0.5, 0.6}}), InvalidDistribution);
  const Kernel k(2, 2, {0.9, 0.1, 0.2, 0.8});
  CHECK(k(1, 0) == doctest::Approx(0.2));
  CHECK(k.row_pmf(0)[1] == doctest::Approx(0.1));
  CHECK_THROWS(DistortionMatrix({{0.0, -1.0}}));
  const auto h = DistortionMatrix::hamming(3);
  CHECK(h(0, 0) == 0.0);
  CHECK(h(2, 1) == 1.0);
}

TEST_CASE("entropy and divergence match the oracle") {
  CHECK(entropy(FinitePmf({0.8, 0.2})) == doctest::Approx(kEntropy82).epsilon(1e-14));
  CHECK(entropy(FinitePmf::point_mass(5, 3)) == 0.0);
  CHECK(entropy(FinitePmf::uniform(8)) == doctest::Approx(3.0));
  CHECK(kl_divergence(FinitePmf({0.8, 0.2}), FinitePmf::uniform(2)) ==
        doctest::Approx(kKl82Uniform).epsilon(1e-14));
  CHECK(kl_divergence(FinitePmf({0.3, 0.7}), FinitePmf({0.3, 0.7})) == 0.0);
  CHECK_THROWS_AS(kl_divergence(FinitePmf({0.5, 0.5}), FinitePmf({1.0, 0.0})),
                  AbsoluteContinuityViolated);
}

TEST_CASE("information density of a symmetric channel") {
  const FinitePmf px = FinitePmf::uniform(2);
  const Kernel bsc({{0.89, 0.11}, {0.11, 0.89}});
  CHECK(information_density(bsc, px, 0, 0) == doctest::Approx(kIotaBsc011).epsilon(1e-13));
  CHECK(information_density(bsc, px, 0, 1) == doctest::Approx(std::log2(0.22)));
  const double mi = mutual_information(px, bsc);
  CHECK(mi == doctest::Approx(1.0 - entropy(FinitePmf({0.89, 0.11}))));

  const Kernel dead({{1.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(information_density(dead, px, 0, 1), UnsupportedOutput);
}

TEST_CASE("mutual information is E[iota] and bounded by H(X)") {
  const FinitePmf px({0.5, 0.3, 0.2});
  const Kernel k({{0.7, 0.2, 0.1}, {0.1, 0.8, 0.1}, {0.25, 0.25, 0.5}});
  double e = 0.0;
  for (SymbolId x = 0; x < 3; ++x) {
    for (SymbolId y = 0; y < 3; ++y) e += px[x] * k(x, y) * information_density(k, px, x, y);
  }
  CHECK(mutual_information(px, k) == doctest::Approx(e).epsilon(1e-13));
  CHECK(mutual_information(px, k) <= entropy(px));
  CHECK(mutual_information(px, k) >= 0.0);
  const auto py = output_marginal(px, k);
  CHECK(py[0] == doctest::Approx(0.5 * 0.7 + 0.3 * 0.1 + 0.2 * 0.25));
}

TEST_CASE("sampling follows the pmf") {
  const FinitePmf p({0.1, 0.0, 0.6, 0.3});
  Rng rng(Seed::from_hex(std::string(64, '7')));
  std::vector<double> freq(4, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) freq[sample_pmf(p, rng)] += 1.0 / n;
  CHECK(freq[1] == 0.0);
  CHECK(total_variation(freq, p.probs()) < 0.005);
}

TEST_CASE("total variation") {
  const std::vector<double> a{1.0, 0.0};
  const std::vector<double> b{0.0, 1.0};
  CHECK(total_variation(a, b) == 1.0);
  CHECK(total_variation(a, a) == 0.0);
}

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
#include <sstream>

#include "gw_models.hpp"
#include "pfrlab/errors.hpp"
#include "pfrlab/gray_wyner.hpp"

using namespace pfrlab;
using namespace pfrlab::testing;

namespace {
const Seed kSeed = Seed::from_hex(std::string(64, '9'));
}

TEST_CASE("model validation and derived quantities") {
  CHECK_THROWS(GwModel(2, 2, FinitePmf({0.5, 0.5}), Kernel(1, 1, {1.0}), Kernel(1, 1, {1.0}),
                       Kernel(1, 1, {1.0})));
  const auto m = common_bit_model();
  CHECK(m.p_u()[0] == doctest::Approx(0.5));
  CHECK(m.mi_u_x() == doctest::Approx(1.0));
  CHECK(m.cmi_y_x_given_u(1) == doctest::Approx(0.0).epsilon(1e-12));
  const auto law = m.conditional_law(1, 1);
  CHECK(law.size() == 8);
  CHECK(law[(1 * 2 + 1) * 2 + 1] == doctest::Approx(1.0));
  const auto g = generic_model();
  CHECK(g.n_y1() == 3);
  double total = 0.0;
  for (double p : g.conditional_law(0, 1)) total += p;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("dominance parameters") {
  CHECK(gw_dominance_params(common_bit_model(), 0, 0, 0, 0, 0).p0 == doctest::Approx(1.0 / 3));
  CHECK(gw_dominance_params(common_bit_model(), 1, 1, 1, 1, 1).p1 == doctest::Approx(0.5));
  CHECK(gw_dominance_params(independent_u_model(), 0, 1, 1, 1, 1).p0 == doctest::Approx(0.5));
  CHECK_THROWS_AS(gw_dominance_params(common_bit_model(), 0, 1, 0, 0, 0), UnsupportedPoint);
  CHECK_THROWS_AS(gw_dominance_params(common_bit_model(), 0, 0, 1, 1, 1), UnsupportedPoint);
}

TEST_CASE("singleton model") {
  const auto m = singleton_model();
  const auto r = gw_encode(m, 0, 0, kSeed);
  CHECK(r.k0 == 1);
  CHECK(r.k1 == 1);
  CHECK(r.k2 == 1);
  CHECK(gw_decode(m, 1, 1, 1, kSeed) == GwReconstruction{0, 0, 0});
}

TEST_CASE("independent common part needs no index") {
  const auto m = independent_u_model();
  const auto recs = run_gw_trials(m, 2000, kSeed);
  for (const auto& r : recs) {
    CHECK(r.k0 == 1);
    CHECK(r.k1 == 1);
    CHECK(r.k2 == 1);
  }
}

TEST_CASE("identity re-sorting leaves the stream unchanged") {
  const FinitePmf law({0.3, 0.7});
  const std::vector<double> zero{0.0, 0.0};
  CodebookStream raw(kSeed, "r", law);
  ResortedStream rs(CodebookStream(kSeed, "r", law), zero);
  for (int i = 0; i < 2000; ++i) {
    const auto a = raw.next();
    const auto b = rs.next();
    CHECK(a.index == b.index);
    CHECK(a.mark == b.mark);
    CHECK(a.time == b.time);
  }
}

TEST_CASE("re-sorted times increase and marks follow the tilted law") {
  const FinitePmf law({0.5, 0.5});
  const std::vector<double> iota{1.0, -1.0};
  ResortedStream rs(CodebookStream(kSeed, "r", law), iota);
  CHECK(rs.mark_law()[0] == doctest::Approx(0.8));
  double prev = 0.0;
  std::vector<double> freq(2, 0.0);
  const int n = 100000;
  for (int i = 1; i <= n; ++i) {
    const auto p = rs.next();
    REQUIRE(p.index == std::uint64_t(i));
    if (i <= 1000) CHECK(p.time > prev);
    REQUIRE(p.time >= prev);
    prev = p.time;
    freq[p.mark] += 1.0 / n;
  }
  CHECK(total_variation(freq, rs.mark_law().probs()) < 0.02);
  // Rate of the re-sorted process is sum_y P(y) 2^{iota(y)} = 1.25.
  CHECK(prev / n == doctest::Approx(1.0 / 1.25).epsilon(0.02));
}

TEST_CASE("round trips and decoder separation") {
  const auto m = generic_model();
  for (std::uint64_t t = 0; t < 10000; ++t) {
    const Seed s = derive_subseed(kSeed, t, "codebook");
    const SymbolId x1 = t % 2, x2 = (t / 2) % 2;
    const auto enc = gw_encode(m, x1, x2, s);
    const auto dec = gw_decode(m, enc.k0, enc.k1, enc.k2, s);
    REQUIRE(dec == GwReconstruction{enc.u, enc.y1, enc.y2});
    CHECK(gw_decode_common(m, enc.k0, s) == enc.u);
    if (t < 300) {
      const auto d1 = gw_decode_private(m, 1, enc.k0, enc.k1, s);
      for (std::uint64_t k2 = 1; k2 <= 5; ++k2) {
        CHECK(gw_decode(m, enc.k0, enc.k1, k2, s).y1 == d1.second);
      }
    }
  }
}

TEST_CASE("trials are deterministic across thread counts") {
  const auto m = generic_model();
  std::ostringstream a, b;
  write_gw_csv(a, run_gw_trials(m, 3000, kSeed, 1));
  write_gw_csv(b, run_gw_trials(m, 3000, kSeed, 4));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("trial,x1,x2,u,y1,y2,k0,k1,k2,len0,len1,len2\n", 0) == 0);
}

TEST_CASE("joint conditional law of the generic model") {
  const auto m = generic_model();
  const auto recs = run_gw_trials(m, 40000, kSeed);
  for (SymbolId x1 = 0; x1 < 2; ++x1) {
    for (SymbolId x2 = 0; x2 < 2; ++x2) {
      const auto law = m.conditional_law(x1, x2);
      std::vector<double> emp(law.size(), 0.0);
      double n = 0.0;
      for (const auto& r : recs) {
        if (r.x1 != x1 || r.x2 != x2) continue;
        emp[(r.u * m.n_y1() + r.y1) * m.n_y2() + r.y2] += 1.0;
        n += 1.0;
      }
      if (n < 10000) continue;
      for (double& e : emp) e /= n;
      CHECK(total_variation(emp, law) < 0.025);
    }
  }
}

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

#include "pfrlab/errors.hpp"
#include "pfrlab/redundancy_lab.hpp"

using namespace pfrlab;

namespace {

const Seed kSeed = Seed::from_hex(std::string(64, '5'));
const FinitePmf kSource = FinitePmf::uniform(2);
const DistortionMatrix kHamming = DistortionMatrix::hamming(2);
const RdSolution kSol = solve_at_distortion(kSource, kHamming, 0.11);

constexpr EtaKind kEtas[] = {EtaKind::Prr, EtaKind::Psr, EtaKind::Psdr};
constexpr CodeKind kCodes[] = {CodeKind::Plain, CodeKind::Delta};

}  // namespace

TEST_CASE("names") {
  CHECK(to_string(EtaKind::Psdr) == "PSDR");
  CHECK(to_string(CodeKind::Delta) == "delta");
}

TEST_CASE("trial records are internally consistent") {
  const auto recs = run_trials(kSol, kSource, kHamming, 2000, kSeed);
  REQUIRE(recs.size() == 2000);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    CHECK(r.trial == i);
    CHECK(r.k >= 1);
    CHECK(r.dist == kHamming(r.x, r.y));
    CHECK(r.len_plain == unsigned(std::floor(std::log2(double(r.k)))));
    CHECK(r.prr_plain == doctest::Approx(std::log2(double(r.k)) - kSol.rate));
    CHECK(r.psdr_delta == doctest::Approx(r.len_delta - r.j_xd));
    CHECK(r.redundancy(EtaKind::Psr, CodeKind::Plain) == r.psr_plain);
    CHECK(r.redundancy(EtaKind::Psdr, CodeKind::Delta) == r.psdr_delta);
    CHECK(std::abs(r.j_xd - r.iota) <= 1e-6);
  }
}

TEST_CASE("records do not depend on the thread count") {
  const auto a = run_trials(kSol, kSource, kHamming, 3000, kSeed, {1});
  const auto b = run_trials(kSol, kSource, kHamming, 3000, kSeed, {3});
  std::ostringstream sa, sb;
  write_trials_csv(sa, a);
  write_trials_csv(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str().rfind(
            "trial,x,y,k,len_plain,len_delta,dist,iota,j_x,j_xd,prr_plain,psr_plain,"
            "psdr_plain,prr_delta,psr_delta,psdr_delta\n",
            0) == 0);
}

TEST_CASE("tail estimate basics") {
  const auto recs = run_trials(kSol, kSource, kHamming, 5000, kSeed);
  for (EtaKind e : kEtas) {
    for (CodeKind c : kCodes) {
      double prev = 1.0;
      for (double g = -5.0; g <= 12.0; g += 1.0) {
        const auto t = estimate_tail(recs, e, c, g);
        CHECK(t.p_hat <= prev);
        CHECK(t.n == 5000);
        CHECK(t.std_err == doctest::Approx(std::sqrt(t.p_hat * (1 - t.p_hat) / 5000)));
        prev = t.p_hat;
      }
    }
  }
  const auto one = run_trials(kSol, kSource, kHamming, 1, kSeed);
  const auto t = estimate_tail(one, EtaKind::Prr, CodeKind::Plain, 0.0);
  CHECK((t.p_hat == 0.0 || t.p_hat == 1.0));
  CHECK(t.std_err == 0.0);
}

TEST_CASE("bound applicability") {
  CHECK(applicable_bounds(EtaKind::Prr, CodeKind::Plain).size() == 2);
  CHECK(applicable_bounds(EtaKind::Psdr, CodeKind::Plain).size() == 4);
  CHECK(applicable_bounds(EtaKind::Psr, CodeKind::Delta).size() == 1);
  CHECK(applicable_bounds(EtaKind::Psdr, CodeKind::Delta).size() == 2);
  CHECK_THROWS_AS(bound_value(kSol, kSource, kHamming, BoundKind::PsdrSimple, EtaKind::Prr, 1.0),
                  UnsupportedEta);
  CHECK_THROWS_AS(
      bound_value(kSol, kSource, kHamming, BoundKind::PsdrPrefixFree, EtaKind::Psr, 1.0),
      UnsupportedEta);
}

TEST_CASE("bound values agree with closed forms for the symmetric channel") {
  // iota is log2(1.78) w.p. 0.89 and log2(0.22) w.p. 0.11.
  const double e2iota = 0.89 * 1.78 + 0.11 * 0.22;
  for (double g : {-2.0, 0.0, 1.5, 4.0}) {
    const double general = std::exp2(-g + 1) * std::exp2(-kSol.rate) * (e2iota + 1.0);
    CHECK(bound_value(kSol, kSource, kHamming, BoundKind::General, EtaKind::Prr, g) ==
          doctest::Approx(general).epsilon(1e-6));
    CHECK(bound_value(kSol, kSource, kHamming, BoundKind::PsdrSimple, EtaKind::Psdr, g) ==
          doctest::Approx(std::exp2(-g + 2)));
    // With full support E[2^{-iota}] = 1.
    CHECK(bound_value(kSol, kSource, kHamming, BoundKind::PsdrCommonRandomness, EtaKind::Psdr,
                      g) == doctest::Approx(std::exp2(-g + 2)).epsilon(1e-6));
  }
}

TEST_CASE("bound_rhs is the smallest applicable bound and clipped bounds are at most 1") {
  for (EtaKind e : kEtas) {
    for (CodeKind c : kCodes) {
      for (double g = -2.0; g <= 10.0; g += 0.5) {
        const double rhs = bound_rhs(kSol, kSource, kHamming, e, c, g);
        for (BoundKind b : applicable_bounds(e, c)) {
          const double v = bound_value(kSol, kSource, kHamming, b, e, g);
          CHECK(rhs <= v);
          if (b == BoundKind::Clipped || b == BoundKind::PrefixFree) CHECK(v <= 1.0 + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sweep rows respect their bounds") {
  const auto recs = run_trials(kSol, kSource, kHamming, 20000, kSeed);
  std::vector<double> grid;
  for (int g = -2; g <= 10; ++g) grid.push_back(g);
  const auto rows = tail_sweep(recs, kSol, kSource, kHamming, grid);
  CHECK(rows.size() == 3 * 2 * grid.size());
  for (const auto& r : rows) CHECK(r.tail.p_hat - 3 * r.tail.std_err <= r.bound);
  std::ostringstream out;
  write_tails_csv(out, rows);
  CHECK(out.str().rfind("eta_kind,code_kind,gamma,p_hat,std_err,bound_rhs\n", 0) == 0);
}

TEST_CASE("summary statistics") {
  const auto recs = run_trials(kSol, kSource, kHamming, 20000, kSeed);
  const auto s = summary_stats(recs, kSol);
  CHECK(s.n == 20000);
  CHECK(s.rate == kSol.rate);
  CHECK(s.target_plain == doctest::Approx(kSol.rate + 2.01));
  CHECK(s.target_delta == doctest::Approx(6.321589615182329).epsilon(1e-9));
  CHECK(std::abs(s.mean_dist - 0.11) <= 4 * s.se_dist);
  CHECK(s.mean_j_x == doctest::Approx(kSol.rate));
  CHECK(s.mean_log2_k + 3 * s.se_log2_k <= kSol.rate + 1.0);
  CHECK(s.entropy_k <= s.entropy_k_bound + 0.05);
  CHECK_THROWS(summary_stats(std::span<const TrialRecord>(), kSol));
}

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
#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "pfrlab/errors.hpp"
#include "pfrlab/poisson_codebook.hpp"
#include "pfrlab/prob.hpp"

namespace pfrlab {

/// Outcome of one Poisson functional representation selection.
struct PfrResult {
  std::uint64_t k = 0;         ///< selected index K
  SymbolId y = 0;              ///< selected mark
  double score = 0.0;          ///< T_K / f(y)
  std::uint64_t examined = 0;  ///< points drawn before the stopping rule fired
};

/// Density ratio f = target / proposal on a finite alphabet.
///
/// Validates absolute continuity once so the selection loop only does a
/// table lookup per point.
class DensityRatio {
 public:
  DensityRatio(std::span<const double> target, std::span<const double> proposal);

  std::size_t size() const { return f_.size(); }
  double operator()(SymbolId y) const { return f_[y]; }
  double max() const { return f_max_; }

 private:
  std::vector<double> f_;
  double f_max_ = 0.0;
};

struct PfrOptions {
  /// Stop once T_i >= horizon_factor * best * f_max. Values above 1 only
  /// examine extra points; the selection is identical.
  double horizon_factor = 1.0;
};

/// K = argmin_i T_i / f(mark_i) over the stream, certified exact.
///
/// After point i, no later point can score below T_i / f_max, so the loop
/// stops as soon as that exceeds the best score. Marks with f = 0 consume an
/// index but are never selected; ties go to the smaller index.
template <MarkedPointSource Stream>
PfrResult pfr_select(const DensityRatio& f, Stream& stream, const PfrOptions& opts = {}) {
  if (stream.mark_law().size() != f.size()) {
    throw InvalidDistribution("pfr_select: mark alphabet does not match the density ratio");
  }
  const double stop_scale = opts.horizon_factor * f.max();
  PfrResult best{0, 0, std::numeric_limits<double>::infinity(), 0};
  for (;;) {
    const MarkedPoint p = stream.next();
    ++best.examined;
    const double fy = f(p.mark);
    if (fy > 0.0) {
      const double score = p.time / fy;
      if (score < best.score) {
        best.k = p.index;
        best.y = p.mark;
        best.score = score;
      }
    }
    if (p.time >= best.score * stop_scale) return best;
  }
}

/// Convenience overload: builds the ratio against the stream's mark law.
PfrResult pfr_select(const FinitePmf& target, const FinitePmf& proposal,
                     CodebookStream& stream, const PfrOptions& opts = {});

/// Success probability of the exact geometric law of K given the selected
/// mark y: ( sum_{y'} proposal(y') max{f(y), f(y')} )^{-1}.
double geometric_parameter_exact(const FinitePmf& target, const FinitePmf& proposal,
                                 SymbolId y);

/// Success probability (f(y) + 1)^{-1} of the geometric law that
/// stochastically dominates K given y.
double dominance_parameter(const FinitePmf& target, const FinitePmf& proposal, SymbolId y);

/// sum_x px(x) D(k(.|x) || q) + 1, the bound on E[log2 K].
double expected_log_k_bound(const FinitePmf& px, const Kernel& k, const FinitePmf& q);

/// n independent selections, trial t drawing its codebook from
/// derive_subseed(seed, t, role). Results are ordered by trial.
std::vector<PfrResult> run_pfr_trials(const FinitePmf& target, const FinitePmf& proposal,
                                      std::uint64_t n, const Seed& seed,
                                      std::string_view role = "pfr", unsigned threads = 1,
                                      const PfrOptions& opts = {});

/// P(G = k) for G ~ Geom(p) on {1, 2, ...}.
double geometric_pmf(double p, std::uint64_t k);

/// P(G > k) = (1 - p)^k.
double geometric_survival(double p, std::uint64_t k);

}  // namespace pfrlab

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
#include "pfrlab/pfr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfrlab/parallel.hpp"

namespace pfrlab {
namespace {

void check_support(const FinitePmf& target, const FinitePmf& proposal, SymbolId y) {
  if (target.size() != proposal.size()) {
    throw InvalidDistribution("target and proposal alphabets differ");
  }
  if (y >= target.size()) throw std::out_of_range("symbol outside the alphabet");
  if (!(target[y] > 0.0)) {
    throw std::invalid_argument("symbol " + std::to_string(y) + " has zero target mass");
  }
}

}  // namespace

DensityRatio::DensityRatio(std::span<const double> target, std::span<const double> proposal)
    : f_(target.size(), 0.0) {
  if (target.size() != proposal.size()) {
    throw InvalidDistribution("target and proposal alphabets differ");
  }
  for (SymbolId y = 0; y < target.size(); ++y) {
    if (target[y] == 0.0) continue;
    if (proposal[y] == 0.0) {
      throw AbsoluteContinuityViolated("target(" + std::to_string(y) +
                                       ") > 0 but proposal is 0 there");
    }
    f_[y] = target[y] / proposal[y];
    f_max_ = std::max(f_max_, f_[y]);
  }
  if (!(f_max_ > 0.0)) throw DegenerateTarget("target has no positive entry");
}

PfrResult pfr_select(const FinitePmf& target, const FinitePmf& proposal,
                     CodebookStream& stream, const PfrOptions& opts) {
  if (stream.mark_law().size() != proposal.size()) {
    throw InvalidDistribution("stream mark law does not match the proposal alphabet");
  }
  return pfr_select(DensityRatio(target.probs(), proposal.probs()), stream, opts);
}

double geometric_parameter_exact(const FinitePmf& target, const FinitePmf& proposal,
                                 SymbolId y) {
  check_support(target, proposal, y);
  const DensityRatio f(target.probs(), proposal.probs());
  double mean = 0.0;
  for (SymbolId v = 0; v < proposal.size(); ++v) mean += proposal[v] * std::max(f(y), f(v));
  return 1.0 / mean;
}

double dominance_parameter(const FinitePmf& target, const FinitePmf& proposal, SymbolId y) {
  check_support(target, proposal, y);
  const DensityRatio f(target.probs(), proposal.probs());
  return 1.0 / (f(y) + 1.0);
}

double expected_log_k_bound(const FinitePmf& px, const Kernel& k, const FinitePmf& q) {
  if (px.size() != k.rows() || q.size() != k.cols()) {
    throw InvalidDistribution("expected_log_k_bound: shape mismatch");
  }
  double acc = 0.0;
  for (SymbolId x = 0; x < k.rows(); ++x) {
    if (px[x] > 0.0) acc += px[x] * kl_divergence(k.row(x), q.probs());
  }
  return acc + 1.0;
}

std::vector<PfrResult> run_pfr_trials(const FinitePmf& target, const FinitePmf& proposal,
                                      std::uint64_t n, const Seed& seed, std::string_view role,
                                      unsigned threads, const PfrOptions& opts) {
  const DensityRatio f(target.probs(), proposal.probs());
  std::vector<PfrResult> out(n);
  parallel_for(n, threads, [&](std::uint64_t t) {
    CodebookStream stream(derive_subseed(seed, t, role), "y", proposal);
    out[t] = pfr_select(f, stream, opts);
  });
  return out;
}

double geometric_pmf(double p, std::uint64_t k) {
  if (k == 0) return 0.0;
  return p * std::pow(1.0 - p, static_cast<double>(k - 1));
}

double geometric_survival(double p, std::uint64_t k) {
  return std::pow(1.0 - p, static_cast<double>(k));
}

}  // namespace pfrlab

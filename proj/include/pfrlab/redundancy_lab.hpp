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
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "pfrlab/prob.hpp"
#include "pfrlab/rd_solver.hpp"
#include "pfrlab/rng.hpp"

namespace pfrlab {

/// Which "amount of information" the redundancy is measured against:
/// Prr uses R(D), Psr the tilted information j(x, D), Psdr the
/// distortion-shifted j(x, D, d(x, y)).
enum class EtaKind { Prr, Psr, Psdr };

/// Plain: floor(log2 K) bits, not prefix-free. Delta: Elias delta codeword.
enum class CodeKind { Plain, Delta };

/// Right-hand sides of the tail bounds P(length - eta >= gamma) <= rhs.
enum class BoundKind {
  General,               ///< 2^{-g+1} E[2^{-eta}(2^{iota}+1)]
  Clipped,               ///< E[min{2^{-eta-g+1}(2^{iota}+1), 1}]
  PrefixFree,            ///< E[min{2^{-eta-g+2}([eta+g]_+ +1)^2 (2^{iota}+1), 1}]
  PsdrSimple,            ///< 2^{-g+2}
  PsdrCommonRandomness,  ///< 2^{-g+1}(1 + E[2^{-iota}])
  PsdrPrefixFree,        ///< 2^{-g+3} E[([iota+g]_+ +1)^2]
};

std::string_view to_string(EtaKind k);
std::string_view to_string(CodeKind k);
std::string_view to_string(BoundKind k);

/// Per-trial quantities. Lengths in bits, information quantities in bits.
struct TrialRecord {
  std::uint64_t trial = 0;
  SymbolId x = 0;
  SymbolId y = 0;
  std::uint64_t k = 0;
  unsigned len_plain = 0;
  unsigned len_delta = 0;
  double dist = 0.0;
  double iota = 0.0;
  double j_x = 0.0;
  double j_xd = 0.0;
  double prr_plain = 0.0;  ///< log2 k - R(D)
  double psr_plain = 0.0;  ///< log2 k - j(x, D)
  double psdr_plain = 0.0; ///< log2 k - j(x, D, d(x, y))
  double prr_delta = 0.0;  ///< len_delta - R(D)
  double psr_delta = 0.0;
  double psdr_delta = 0.0;

  double redundancy(EtaKind eta, CodeKind code) const;
};

struct TailEstimate {
  double gamma = 0.0;
  double p_hat = 0.0;
  double std_err = 0.0;  ///< sqrt(p_hat (1 - p_hat) / n)
  std::uint64_t n = 0;
};

struct TrialOptions {
  unsigned threads = 1;
};

/// Draws x ~ source, then selects Y with target sol.kernel[x] and proposal
/// sol.output_marginal from a codebook stream seeded per trial. Records come
/// back ordered by trial index whatever the thread count.
std::vector<TrialRecord> run_trials(const RdSolution& sol, const FinitePmf& source,
                                    const DistortionMatrix& d, std::uint64_t n,
                                    const Seed& seed, const TrialOptions& opts = {});

/// Empirical P(length - eta >= gamma) with its binomial standard error.
TailEstimate estimate_tail(std::span<const TrialRecord> records, EtaKind eta,
                           CodeKind code, double gamma);

/// Bounds that hold for the given redundancy (all of them are upper bounds).
std::vector<BoundKind> applicable_bounds(EtaKind eta, CodeKind code);

/// Exact evaluation of one bound by summation over the model's support.
/// Throws UnsupportedEta when a Psdr-only bound is asked for another eta.
double bound_value(const RdSolution& sol, const FinitePmf& source, const DistortionMatrix& d,
                   BoundKind bound, EtaKind eta, double gamma);

/// Tightest applicable bound for (eta, code) at gamma.
double bound_rhs(const RdSolution& sol, const FinitePmf& source, const DistortionMatrix& d,
                 EtaKind eta, CodeKind code, double gamma);

struct Summary {
  std::uint64_t n = 0;
  double mean_dist = 0.0, se_dist = 0.0;
  double mean_len_plain = 0.0, se_len_plain = 0.0;
  double mean_len_delta = 0.0, se_len_delta = 0.0;
  double mean_log2_k = 0.0, se_log2_k = 0.0;
  double mean_j_x = 0.0, se_j_x = 0.0;
  double mean_j_xd = 0.0, se_j_xd = 0.0;
  double entropy_k = 0.0;        ///< plug-in entropy of the empirical law of K
  double rate = 0.0;             ///< R(D) of the solution
  double target_plain = 0.0;     ///< R(D) + 2.01
  double target_delta = 0.0;     ///< R(D) + log2(R(D) + 3.01) + 4.01
  double entropy_k_bound = 0.0;  ///< E[log2 K] + log2(E[log2 K] + 1) + 1
};

Summary summary_stats(std::span<const TrialRecord> records, const RdSolution& sol);

/// Header: trial,x,y,k,len_plain,len_delta,dist,iota,j_x,j_xd,prr_plain,...
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

struct TailRow {
  EtaKind eta;
  CodeKind code;
  TailEstimate tail;
  double bound = 0.0;
};

/// Every (eta, code, gamma) combination for the grid, bound = bound_rhs.
std::vector<TailRow> tail_sweep(std::span<const TrialRecord> records, const RdSolution& sol,
                                const FinitePmf& source, const DistortionMatrix& d,
                                std::span<const double> gamma_grid);

/// Header: eta_kind,code_kind,gamma,p_hat,std_err,bound_rhs
void write_tails_csv(std::ostream& out, std::span<const TailRow> rows);

}  // namespace pfrlab

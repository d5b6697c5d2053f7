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
#include <queue>
#include <span>
#include <vector>

#include "pfrlab/pfr.hpp"
#include "pfrlab/poisson_codebook.hpp"
#include "pfrlab/prob.hpp"
#include "pfrlab/rng.hpp"

namespace pfrlab {

/// Source pair, common-part kernel and the two private reconstruction
/// kernels of a Gray-Wyner code, plus the marginals derived from them.
///
/// Index conventions: the joint source is over x1 * |X2| + x2; u_kernel rows
/// are indexed the same way; y1_kernel rows by x1 * |U| + u; y2_kernel rows
/// by x2 * |U| + u.
class GwModel {
 public:
  GwModel(std::size_t n_x1, std::size_t n_x2, FinitePmf joint_source, Kernel u_kernel,
          Kernel y1_kernel, Kernel y2_kernel);

  std::size_t n_x1() const { return n_x1_; }
  std::size_t n_x2() const { return n_x2_; }
  std::size_t n_u() const { return u_kernel_.cols(); }
  std::size_t n_y1() const { return y1_kernel_.cols(); }
  std::size_t n_y2() const { return y2_kernel_.cols(); }

  const FinitePmf& joint_source() const { return joint_; }
  double p_x(SymbolId x1, SymbolId x2) const { return joint_[x1 * n_x2_ + x2]; }
  std::span<const double> u_given_x(SymbolId x1, SymbolId x2) const {
    return u_kernel_.row(x1 * n_x2_ + x2);
  }
  /// Y_i given (x_i, u), i in {1, 2}.
  std::span<const double> y_given_xu(int i, SymbolId x, SymbolId u) const;
  /// Y_i given u alone; all zeros when P_U(u) = 0.
  std::span<const double> y_given_u(int i, SymbolId u) const;

  const FinitePmf& p_u() const { return p_u_; }
  const FinitePmf& p_y(int i) const { return i == 1 ? p_y1_ : p_y2_; }

  /// iota_{U;Y_i}(u; y) for every y; -inf where P(y | u) = 0.
  std::vector<double> iota_u_y(int i, SymbolId u) const;

  double mi_u_x() const;          ///< I(U; X1, X2)
  double cmi_y_x_given_u(int i) const;  ///< I(Y_i; X_i | U)

  /// P(u, y1, y2 | x1, x2), flattened as (u * |Y1| + y1) * |Y2| + y2.
  std::vector<double> conditional_law(SymbolId x1, SymbolId x2) const;

 private:
  std::size_t n_x1_;
  std::size_t n_x2_;
  FinitePmf joint_;
  Kernel u_kernel_;
  Kernel y1_kernel_;
  Kernel y2_kernel_;
  FinitePmf p_u_;
  std::vector<double> y1_given_u_;  // |U| x |Y1|
  std::vector<double> y2_given_u_;  // |U| x |Y2|
  FinitePmf p_y1_;
  FinitePmf p_y2_;
};

/// A marked Poisson process with times rescaled by 2^{-iota(mark)} and
/// re-indexed in ascending rescaled time.
///
/// Points are buffered in a min-heap keyed on rescaled time. With
/// r = max_y 2^{iota(y)}, a buffered point with rescaled time tau is final once
/// the raw frontier reaches tau * r, since any later raw point rescales to at
/// least frontier / r. Marks with iota = -inf never appear.
class ResortedStream {
 public:
  ResortedStream(CodebookStream base, std::span<const double> iota_row);

  MarkedPoint next();
  const FinitePmf& mark_law() const { return mark_law_; }

 private:
  struct Pending {
    double time;
    std::uint64_t raw_index;
    SymbolId mark;
    bool operator>(const Pending& o) const {
      return time != o.time ? time > o.time : raw_index > o.raw_index;
    }
  };

  CodebookStream base_;
  std::vector<double> scale_;  // 2^{-iota}, +inf for excluded marks
  double release_factor_ = 1.0;
  FinitePmf mark_law_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> heap_;
  double frontier_ = 0.0;
  std::uint64_t cursor_ = 0;
};

ResortedStream resorted_stream(CodebookStream base, std::span<const double> iota_row);

struct GwResult {
  std::uint64_t k0 = 0, k1 = 0, k2 = 0;
  SymbolId u = 0, y1 = 0, y2 = 0;
};

struct GwReconstruction {
  SymbolId u = 0, y1 = 0, y2 = 0;
  friend bool operator==(const GwReconstruction&, const GwReconstruction&) = default;
};

GwResult gw_encode(const GwModel& model, SymbolId x1, SymbolId x2, const Seed& seed);

/// Common description only: U is the mark of point k0 of the "u" stream.
SymbolId gw_decode_common(const GwModel& model, std::uint64_t k0, const Seed& seed);

/// Decoder i in {1, 2}: sees (k0, k_i) and returns (u, y_i).
std::pair<SymbolId, SymbolId> gw_decode_private(const GwModel& model, int i, std::uint64_t k0,
                                                std::uint64_t ki, const Seed& seed);

GwReconstruction gw_decode(const GwModel& model, std::uint64_t k0, std::uint64_t k1,
                           std::uint64_t k2, const Seed& seed);

struct GwDominance {
  double p0 = 0.0, p1 = 0.0, p2 = 0.0;
};

/// Success probabilities of the geometric laws dominating K0, K1, K2 at the
/// given tuple. Throws UnsupportedPoint if a needed probability is zero.
GwDominance gw_dominance_params(const GwModel& model, SymbolId x1, SymbolId x2, SymbolId u,
                                SymbolId y1, SymbolId y2);

struct GwTrialRecord {
  std::uint64_t trial = 0;
  SymbolId x1 = 0, x2 = 0, u = 0, y1 = 0, y2 = 0;
  std::uint64_t k0 = 0, k1 = 0, k2 = 0;
  unsigned len0 = 0, len1 = 0, len2 = 0;  ///< plain-binary bit counts
};

/// Draws (x1, x2) from the joint source and encodes with a per-trial seed.
/// When `verify` is set each trial is also decoded and a mismatch throws.
std::vector<GwTrialRecord> run_gw_trials(const GwModel& model, std::uint64_t n,
                                         const Seed& seed, unsigned threads = 1,
                                         bool verify = true);

/// Header: trial,x1,x2,u,y1,y2,k0,k1,k2,len0,len1,len2
void write_gw_csv(std::ostream& out, std::span<const GwTrialRecord> records);

/// Thrown by run_gw_trials when a decoder disagrees with the encoder.
class RoundTripMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace pfrlab

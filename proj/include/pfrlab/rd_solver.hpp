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
#include <optional>

#include "pfrlab/errors.hpp"
#include "pfrlab/prob.hpp"

namespace pfrlab {

/// One point on the rate-distortion curve together with the kernel that
/// attains it.
struct RdSolution {
  double slope_lambda = 0.0;  ///< -R'(D), bits per distortion unit
  Kernel kernel;              ///< optimal P_{Y|X}
  FinitePmf output_marginal;  ///< law of Y*; entries below 1e-12 pruned to 0
  double rate = 0.0;          ///< R(D) in bits
  double distortion = 0.0;    ///< E[d(X, Y)]
  std::int64_t iterations = 0;
};

/// Blahut-Arimoto did not reach the requested gap within max_iter.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, RdSolution last)
      : Error(what), last_(std::move(last)) {}
  const RdSolution& last_iterate() const { return last_; }

 private:
  RdSolution last_;
};

struct BaOptions {
  double tol = 1e-10;  ///< stop once max_y log2 c(y) <= tol (bounds the R gap), bits
  std::int64_t max_iter = 100000;
};

/// Output marginals below this are treated as outside the support.
inline constexpr double kSupportFloor = 1e-12;

/// Parametric RD point for Lagrange slope s (bits per distortion unit).
///
/// Alternates q(y|x) ∝ r(y) 2^{-s d(x,y)} and r = P_X q until
/// max_y log2 c(y), an upper bound on the rate gap, drops below tol. s = 0 returns
/// the zero-rate solution concentrated on argmin_y E[d(X, y)].
RdSolution ba_fixed_slope(const FinitePmf& source, const DistortionMatrix& d, double s,
                          const BaOptions& opts = {});

/// D at which the rate first reaches zero: min_y E[d(X, y)].
double zero_rate_distortion(const FinitePmf& source, const DistortionMatrix& d);

/// E[min_y d(X, y)]; not attainable at any finite slope.
double min_achievable_distortion(const FinitePmf& source, const DistortionMatrix& d);

/// Bisection over the slope until |E[d] - target_D| <= tol_D.
///
/// target_D at or above the zero-rate distortion returns the s = 0 solution;
/// target_D at or below the minimum achievable distortion throws
/// TargetOutOfRange.
RdSolution solve_at_distortion(const FinitePmf& source, const DistortionMatrix& d,
                               double target_D, double tol_D = 1e-9,
                               const BaOptions& opts = {});

/// -log2 E[2^{-lambda (d(x, Y*) - delta)}], Y* ~ sol.output_marginal.
/// With delta = sol.distortion this is the d-tilted information in x.
double tilted_information(const RdSolution& sol, const DistortionMatrix& d, SymbolId x,
                          double delta);

inline double tilted_information(const RdSolution& sol, const DistortionMatrix& d,
                                 SymbolId x) {
  return tilted_information(sol, d, x, sol.distortion);
}

}  // namespace pfrlab

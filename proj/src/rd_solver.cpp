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
#include "pfrlab/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace pfrlab {
namespace {

void check_shapes(const FinitePmf& source, const DistortionMatrix& d) {
  if (source.size() != d.rows()) {
    throw InvalidDistribution("distortion matrix has " + std::to_string(d.rows()) +
                              " rows but the source has " + std::to_string(source.size()) +
                              " symbols");
  }
}

// Tilted weights 2^{-s (d(x,y) - min_y d(x,y))}; the per-row shift cancels in
// every normalised quantity and keeps large slopes from underflowing.
std::vector<double> tilted_weights(const DistortionMatrix& d, double s) {
  std::vector<double> w(d.rows() * d.cols());
  for (SymbolId x = 0; x < d.rows(); ++x) {
    auto row = d.row(x);
    const double dmin = *std::min_element(row.begin(), row.end());
    for (SymbolId y = 0; y < d.cols(); ++y) {
      w[x * d.cols() + y] = std::exp2(-s * (row[y] - dmin));
    }
  }
  return w;
}

// Assembles the solution for a given reproduction law r: kernel from r, then
// output marginal, rate and distortion from that kernel.
RdSolution assemble(const FinitePmf& source, const DistortionMatrix& d, double s,
                    std::vector<double> r, std::int64_t iterations) {
  for (double& v : r) {
    if (v < kSupportFloor) v = 0.0;
  }
  const FinitePmf law = FinitePmf::normalized(std::move(r));
  const auto w = tilted_weights(d, s);
  const std::size_t nx = d.rows();
  const std::size_t ny = d.cols();
  std::vector<double> q(nx * ny);
  for (SymbolId x = 0; x < nx; ++x) {
    double z = 0.0;
    for (SymbolId y = 0; y < ny; ++y) z += law[y] * w[x * ny + y];
    for (SymbolId y = 0; y < ny; ++y) q[x * ny + y] = law[y] * w[x * ny + y] / z;
    // Renormalise the row so it passes the 1e-12 pmf invariant exactly.
    double total = 0.0;
    for (SymbolId y = 0; y < ny; ++y) total += q[x * ny + y];
    for (SymbolId y = 0; y < ny; ++y) q[x * ny + y] /= total;
  }
  Kernel kernel(nx, ny, std::move(q));
  FinitePmf marginal = output_marginal(source, kernel);
  double distortion = 0.0;
  for (SymbolId x = 0; x < nx; ++x) {
    for (SymbolId y = 0; y < ny; ++y) distortion += source[x] * kernel(x, y) * d(x, y);
  }
  const double rate = std::max(0.0, mutual_information(source, kernel));
  return RdSolution{s, std::move(kernel), std::move(marginal), rate, distortion, iterations};
}

RdSolution zero_rate_solution(const FinitePmf& source, const DistortionMatrix& d) {
  SymbolId best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (SymbolId y = 0; y < d.cols(); ++y) {
    double e = 0.0;
    for (SymbolId x = 0; x < d.rows(); ++x) e += source[x] * d(x, y);
    if (e < best_d) {
      best_d = e;
      best = y;
    }
  }
  std::vector<double> r(d.cols(), 0.0);
  r[best] = 1.0;
  return assemble(source, d, 0.0, std::move(r), 0);
}

// Mixes two kernels so the expected distortion lands on target. Used when the
// bisection interval collapses on a straight segment of the curve.
RdSolution mix_solutions(const FinitePmf& source, const DistortionMatrix& d,
                         const RdSolution& lo, const RdSolution& hi, double target) {
  const double span = lo.distortion - hi.distortion;
  const double a = span > 0.0 ? std::clamp((target - hi.distortion) / span, 0.0, 1.0) : 0.0;
  const std::size_t nx = d.rows();
  const std::size_t ny = d.cols();
  std::vector<double> q(nx * ny);
  for (SymbolId x = 0; x < nx; ++x) {
    double total = 0.0;
    for (SymbolId y = 0; y < ny; ++y) {
      q[x * ny + y] = a * lo.kernel(x, y) + (1.0 - a) * hi.kernel(x, y);
      total += q[x * ny + y];
    }
    for (SymbolId y = 0; y < ny; ++y) q[x * ny + y] /= total;
  }
  Kernel kernel(nx, ny, std::move(q));
  FinitePmf marginal = output_marginal(source, kernel);
  double distortion = 0.0;
  for (SymbolId x = 0; x < nx; ++x) {
    for (SymbolId y = 0; y < ny; ++y) distortion += source[x] * kernel(x, y) * d(x, y);
  }
  const double rate = std::max(0.0, mutual_information(source, kernel));
  return RdSolution{0.5 * (lo.slope_lambda + hi.slope_lambda), std::move(kernel),
                    std::move(marginal), rate, distortion,
                    lo.iterations + hi.iterations};
}

}  // namespace

RdSolution ba_fixed_slope(const FinitePmf& source, const DistortionMatrix& d, double s,
                          const BaOptions& opts) {
  check_shapes(source, d);
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("slope must be >= 0");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (s == 0.0) return zero_rate_solution(source, d);

  const std::size_t nx = d.rows();
  const std::size_t ny = d.cols();
  const auto w = tilted_weights(d, s);
  std::vector<double> r(ny, 1.0 / static_cast<double>(ny));
  std::vector<double> c(ny);
  std::vector<double> z(nx);

  for (std::int64_t it = 1; it <= opts.max_iter; ++it) {
    for (SymbolId x = 0; x < nx; ++x) {
      double acc = 0.0;
      for (SymbolId y = 0; y < ny; ++y) acc += r[y] * w[x * ny + y];
      z[x] = acc;
    }
    std::fill(c.begin(), c.end(), 0.0);
    for (SymbolId x = 0; x < nx; ++x) {
      if (source[x] == 0.0) continue;
      const double scale = source[x] / z[x];
      for (SymbolId y = 0; y < ny; ++y) c[y] += scale * w[x * ny + y];
    }
    // max_y log2 c(y) bounds R_upper - R_lower at this iterate.
    double gap = -std::numeric_limits<double>::infinity();
    for (SymbolId y = 0; y < ny; ++y) gap = std::max(gap, std::log2(c[y]));
    for (SymbolId y = 0; y < ny; ++y) r[y] *= c[y];
    if (gap <= opts.tol) return assemble(source, d, s, std::move(r), it);
  }
  throw NotConverged("Blahut-Arimoto did not converge within " +
                         std::to_string(opts.max_iter) + " iterations at slope " +
                         std::to_string(s),
                     assemble(source, d, s, std::move(r), opts.max_iter));
}

double zero_rate_distortion(const FinitePmf& source, const DistortionMatrix& d) {
  check_shapes(source, d);
  double best = std::numeric_limits<double>::infinity();
  for (SymbolId y = 0; y < d.cols(); ++y) {
    double e = 0.0;
    for (SymbolId x = 0; x < d.rows(); ++x) e += source[x] * d(x, y);
    best = std::min(best, e);
  }
  return best;
}

double min_achievable_distortion(const FinitePmf& source, const DistortionMatrix& d) {
  check_shapes(source, d);
  double e = 0.0;
  for (SymbolId x = 0; x < d.rows(); ++x) {
    auto row = d.row(x);
    e += source[x] * *std::min_element(row.begin(), row.end());
  }
  return e;
}

RdSolution solve_at_distortion(const FinitePmf& source, const DistortionMatrix& d,
                               double target_D, double tol_D, const BaOptions& opts) {
  if (!(tol_D > 0.0)) throw std::invalid_argument("tol_D must be > 0");
  const double d_max = zero_rate_distortion(source, d);
  if (target_D >= d_max) return zero_rate_solution(source, d);
  const double d_min = min_achievable_distortion(source, d);
  if (target_D <= d_min) {
    throw TargetOutOfRange("target distortion " + std::to_string(target_D) +
                           " is not above the minimum achievable " + std::to_string(d_min));
  }

  RdSolution lo = zero_rate_solution(source, d);  // D(lo) > target
  double s_hi = 1.0;
  RdSolution hi = ba_fixed_slope(source, d, s_hi, opts);
  while (hi.distortion > target_D) {
    lo = std::move(hi);
    s_hi *= 2.0;
    if (s_hi > 0x1.0p30) {
      throw TargetOutOfRange("no finite slope reaches distortion " + std::to_string(target_D));
    }
    hi = ba_fixed_slope(source, d, s_hi, opts);
  }
  if (target_D - hi.distortion <= tol_D) return hi;

  for (int step = 0; step < 200; ++step) {
    const double s_mid = 0.5 * (lo.slope_lambda + hi.slope_lambda);
    if (s_mid <= lo.slope_lambda || s_mid >= hi.slope_lambda) break;
    RdSolution mid = ba_fixed_slope(source, d, s_mid, opts);
    if (std::abs(mid.distortion - target_D) <= tol_D) return mid;
    if (mid.distortion > target_D) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }
  return mix_solutions(source, d, lo, hi, target_D);
}

double tilted_information(const RdSolution& sol, const DistortionMatrix& d, SymbolId x,
                          double delta) {
  const auto& r = sol.output_marginal;
  const double lambda = sol.slope_lambda;
  auto row = d.row(x);
  double shift = std::numeric_limits<double>::infinity();
  for (SymbolId y = 0; y < r.size(); ++y) {
    if (r[y] > 0.0) shift = std::min(shift, row[y]);
  }
  double acc = 0.0;
  for (SymbolId y = 0; y < r.size(); ++y) {
    if (r[y] > 0.0) acc += r[y] * std::exp2(-lambda * (row[y] - shift));
  }
  return -std::log2(acc) + lambda * (shift - delta);
}

}  // namespace pfrlab

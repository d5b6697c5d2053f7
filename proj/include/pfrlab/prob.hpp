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

#include <cstddef>
#include <span>
#include <vector>

#include "pfrlab/rng.hpp"

namespace pfrlab {

using SymbolId = std::size_t;

/// Probability mass function on {0, ..., size()-1}.
///
/// Construction validates: nonempty, entries finite and >= 0, total within
/// 1e-12 of one. All information measures are in bits.
class FinitePmf {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit FinitePmf(std::vector<double> probs);

  /// Point mass at `at` on an alphabet of `size` symbols.
  static FinitePmf point_mass(std::size_t size, SymbolId at);
  static FinitePmf uniform(std::size_t size);

  /// Divides by the total; throws if any entry is negative or the total is 0.
  static FinitePmf normalized(std::vector<double> weights);

  std::size_t size() const { return probs_.size(); }
  double operator[](SymbolId i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Row-stochastic matrix: row x is the conditional law of the output given x.
class Kernel {
 public:
  explicit Kernel(std::vector<std::vector<double>> rows);
  Kernel(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(SymbolId x, SymbolId y) const { return data_[x * cols_ + y]; }
  std::span<const double> row(SymbolId x) const {
    return {data_.data() + x * cols_, cols_};
  }
  FinitePmf row_pmf(SymbolId x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Nonnegative finite distortion d(x, y).
class DistortionMatrix {
 public:
  explicit DistortionMatrix(std::vector<std::vector<double>> d);

  static DistortionMatrix hamming(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(SymbolId x, SymbolId y) const { return data_[x * cols_ + y]; }
  std::span<const double> row(SymbolId x) const {
    return {data_.data() + x * cols_, cols_};
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double entropy(const FinitePmf& p);

/// D(p || q) in bits. Throws AbsoluteContinuityViolated if p(i) > 0 = q(i).
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const FinitePmf& p, const FinitePmf& q);

/// Law of the output when the input is drawn from px.
FinitePmf output_marginal(const FinitePmf& px, const Kernel& k);

/// iota(x; y) = log2( k(x, y) / P_Y(y) ), P_Y the output marginal of (px, k).
double information_density(const Kernel& k, const FinitePmf& px, SymbolId x, SymbolId y);

double mutual_information(const FinitePmf& px, const Kernel& k);

/// Inverse-CDF draw; consumes one uniform.
SymbolId sample_pmf(std::span<const double> p, Rng& rng);
inline SymbolId sample_pmf(const FinitePmf& p, Rng& rng) { return sample_pmf(p.probs(), rng); }

/// Total variation distance 0.5 * sum |p_i - q_i| between equal-length vectors.
double total_variation(std::span<const double> p, std::span<const double> q);

}  // namespace pfrlab

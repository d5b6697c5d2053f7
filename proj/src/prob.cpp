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
#include "pfrlab/prob.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pfrlab/errors.hpp"

namespace pfrlab {
namespace {

void validate_probs(std::span<const double> p, const char* what) {
  if (p.empty()) throw InvalidDistribution(std::string(what) + ": empty");
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidDistribution(std::string(what) + ": entry " + std::to_string(v) +
                                " is not a probability");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > FinitePmf::kSumTolerance) {
    throw InvalidDistribution(std::string(what) + ": entries sum to " +
                              std::to_string(total) + ", not 1");
  }
}

}  // namespace

FinitePmf::FinitePmf(std::vector<double> probs) : probs_(std::move(probs)) {
  validate_probs(probs_, "pmf");
}

FinitePmf FinitePmf::point_mass(std::size_t size, SymbolId at) {
  std::vector<double> p(size, 0.0);
  p.at(at) = 1.0;
  return FinitePmf(std::move(p));
}

FinitePmf FinitePmf::uniform(std::size_t size) {
  return FinitePmf(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

FinitePmf FinitePmf::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidDistribution("negative or non-finite weight");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidDistribution("weights sum to zero");
  for (double& w : weights) w /= total;
  // One renormalisation pass keeps the total within rounding of 1.
  total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return FinitePmf(std::move(weights));
}

Kernel::Kernel(std::vector<std::vector<double>> rows) {
  if (rows.empty()) throw InvalidDistribution("kernel: no rows");
  rows_ = rows.size();
  cols_ = rows.front().size();
  data_.reserve(rows_ * cols_);
  for (std::size_t x = 0; x < rows_; ++x) {
    if (rows[x].size() != cols_) throw InvalidDistribution("kernel: ragged rows");
    validate_probs(rows[x], ("kernel row " + std::to_string(x)).c_str());
    data_.insert(data_.end(), rows[x].begin(), rows[x].end());
  }
}

Kernel::Kernel(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows_ == 0 || data_.size() != rows_ * cols_) {
    throw InvalidDistribution("kernel: shape does not match data");
  }
  for (std::size_t x = 0; x < rows_; ++x) {
    validate_probs(row(x), ("kernel row " + std::to_string(x)).c_str());
  }
}

FinitePmf Kernel::row_pmf(SymbolId x) const {
  auto r = row(x);
  return FinitePmf(std::vector<double>(r.begin(), r.end()));
}

DistortionMatrix::DistortionMatrix(std::vector<std::vector<double>> d) {
  if (d.empty() || d.front().empty()) throw InvalidDistribution("distortion: empty matrix");
  rows_ = d.size();
  cols_ = d.front().size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : d) {
    if (row.size() != cols_) throw InvalidDistribution("distortion: ragged rows");
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidDistribution("distortion: entries must be finite and nonnegative");
      }
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

DistortionMatrix DistortionMatrix::hamming(std::size_t n) {
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  return DistortionMatrix(std::move(d));
}

double entropy(const FinitePmf& p) {
  double h = 0.0;
  for (double v : p.probs()) {
    if (v > 0.0) h -= v * std::log2(v);
  }
  return h;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidDistribution("kl_divergence: alphabet mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw AbsoluteContinuityViolated("kl_divergence: p(" + std::to_string(i) +
                                       ") > 0 but q(" + std::to_string(i) + ") = 0");
    }
    d += p[i] * std::log2(p[i] / q[i]);
  }
  return d;
}

double kl_divergence(const FinitePmf& p, const FinitePmf& q) {
  return kl_divergence(p.probs(), q.probs());
}

FinitePmf output_marginal(const FinitePmf& px, const Kernel& k) {
  if (px.size() != k.rows()) throw InvalidDistribution("output_marginal: shape mismatch");
  std::vector<double> py(k.cols(), 0.0);
  for (SymbolId x = 0; x < k.rows(); ++x) {
    for (SymbolId y = 0; y < k.cols(); ++y) py[y] += px[x] * k(x, y);
  }
  return FinitePmf::normalized(std::move(py));
}

double information_density(const Kernel& k, const FinitePmf& px, SymbolId x, SymbolId y) {
  const FinitePmf py = output_marginal(px, k);
  if (py[y] == 0.0) {
    throw UnsupportedOutput("information_density: P_Y(" + std::to_string(y) + ") = 0");
  }
  return std::log2(k(x, y) / py[y]);
}

double mutual_information(const FinitePmf& px, const Kernel& k) {
  const FinitePmf py = output_marginal(px, k);
  double i = 0.0;
  for (SymbolId x = 0; x < k.rows(); ++x) {
    if (px[x] > 0.0) i += px[x] * kl_divergence(k.row(x), py.probs());
  }
  return i;
}

SymbolId sample_pmf(std::span<const double> p, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  SymbolId last_positive = 0;
  for (SymbolId i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    acc += p[i];
    last_positive = i;
    if (u < acc) return i;
  }
  // u landed in the rounding gap above the cumulative total.
  return last_positive;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidDistribution("total_variation: length mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace pfrlab

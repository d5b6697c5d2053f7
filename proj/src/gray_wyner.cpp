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
#include "pfrlab/gray_wyner.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "pfrlab/bitcodes.hpp"
#include "pfrlab/parallel.hpp"

namespace pfrlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Guards the release test against rounding in max_y 2^{iota(y)}.
constexpr double kReleaseSlack = 1.0 + 1e-12;

std::vector<double> mix_rows(std::size_t n_rows, std::size_t n_cols, auto weight, auto row) {
  std::vector<double> out(n_cols, 0.0);
  for (std::size_t r = 0; r < n_rows; ++r) {
    const double w = weight(r);
    if (w == 0.0) continue;
    auto vals = row(r);
    for (std::size_t c = 0; c < n_cols; ++c) out[c] += w * vals[c];
  }
  return out;
}

FinitePmf scaled_law(const FinitePmf& base, std::span<const double> iota_row) {
  if (iota_row.size() != base.size()) {
    throw InvalidDistribution("iota table does not match the base mark alphabet");
  }
  std::vector<double> w(base.size(), 0.0);
  for (SymbolId y = 0; y < base.size(); ++y) {
    if (iota_row[y] == -kInf) continue;
    if (!std::isfinite(iota_row[y])) throw InvalidDistribution("iota table entry is not finite");
    w[y] = base[y] * std::exp2(iota_row[y]);
  }
  return FinitePmf::normalized(std::move(w));
}

}  // namespace

GwModel::GwModel(std::size_t n_x1, std::size_t n_x2, FinitePmf joint_source, Kernel u_kernel,
                 Kernel y1_kernel, Kernel y2_kernel)
    : n_x1_(n_x1),
      n_x2_(n_x2),
      joint_(std::move(joint_source)),
      u_kernel_(std::move(u_kernel)),
      y1_kernel_(std::move(y1_kernel)),
      y2_kernel_(std::move(y2_kernel)),
      p_u_(FinitePmf::point_mass(1, 0)),
      p_y1_(FinitePmf::point_mass(1, 0)),
      p_y2_(FinitePmf::point_mass(1, 0)) {
  const std::size_t nu = u_kernel_.cols();
  if (joint_.size() != n_x1_ * n_x2_) {
    throw InvalidDistribution("joint source must have |X1|*|X2| = " +
                              std::to_string(n_x1_ * n_x2_) + " entries");
  }
  if (u_kernel_.rows() != n_x1_ * n_x2_) {
    throw InvalidDistribution("u_kernel must have one row per (x1, x2)");
  }
  if (y1_kernel_.rows() != n_x1_ * nu) {
    throw InvalidDistribution("y1_kernel must have one row per (x1, u)");
  }
  if (y2_kernel_.rows() != n_x2_ * nu) {
    throw InvalidDistribution("y2_kernel must have one row per (x2, u)");
  }

  p_u_ = FinitePmf::normalized(mix_rows(
      n_x1_ * n_x2_, nu, [&](std::size_t r) { return joint_[r]; },
      [&](std::size_t r) { return u_kernel_.row(r); }));

  // P(x_i, u) for each decoder, then P(y_i | u) = sum_x P(x_i, u) P(y_i | x_i, u) / P(u).
  auto conditional = [&](int i) {
    const std::size_t nx = i == 1 ? n_x1_ : n_x2_;
    const Kernel& ky = i == 1 ? y1_kernel_ : y2_kernel_;
    std::vector<double> pxu(nx * nu, 0.0);
    for (SymbolId a = 0; a < n_x1_; ++a) {
      for (SymbolId b = 0; b < n_x2_; ++b) {
        const double px = p_x(a, b);
        if (px == 0.0) continue;
        const SymbolId xi = i == 1 ? a : b;
        for (SymbolId u = 0; u < nu; ++u) pxu[xi * nu + u] += px * u_kernel_(a * n_x2_ + b, u);
      }
    }
    std::vector<double> out(nu * ky.cols(), 0.0);
    for (SymbolId u = 0; u < nu; ++u) {
      if (p_u_[u] == 0.0) continue;
      double total = 0.0;
      for (SymbolId x = 0; x < nx; ++x) {
        const double w = pxu[x * nu + u];
        if (w == 0.0) continue;
        for (SymbolId y = 0; y < ky.cols(); ++y) out[u * ky.cols() + y] += w * ky(x * nu + u, y);
        total += w;
      }
      for (SymbolId y = 0; y < ky.cols(); ++y) out[u * ky.cols() + y] /= total;
    }
    return out;
  };
  y1_given_u_ = conditional(1);
  y2_given_u_ = conditional(2);

  p_y1_ = FinitePmf::normalized(mix_rows(
      nu, n_y1(), [&](std::size_t u) { return p_u_[u]; },
      [&](std::size_t u) { return y_given_u(1, u); }));
  p_y2_ = FinitePmf::normalized(mix_rows(
      nu, n_y2(), [&](std::size_t u) { return p_u_[u]; },
      [&](std::size_t u) { return y_given_u(2, u); }));
}

std::span<const double> GwModel::y_given_xu(int i, SymbolId x, SymbolId u) const {
  return i == 1 ? y1_kernel_.row(x * n_u() + u) : y2_kernel_.row(x * n_u() + u);
}

std::span<const double> GwModel::y_given_u(int i, SymbolId u) const {
  if (i == 1) return {y1_given_u_.data() + u * n_y1(), n_y1()};
  return {y2_given_u_.data() + u * n_y2(), n_y2()};
}

std::vector<double> GwModel::iota_u_y(int i, SymbolId u) const {
  const auto cond = y_given_u(i, u);
  const auto& marg = p_y(i);
  std::vector<double> out(cond.size(), -kInf);
  for (SymbolId y = 0; y < cond.size(); ++y) {
    if (cond[y] > 0.0) out[y] = std::log2(cond[y] / marg[y]);
  }
  return out;
}

double GwModel::mi_u_x() const {
  double acc = 0.0;
  for (SymbolId r = 0; r < joint_.size(); ++r) {
    if (joint_[r] > 0.0) acc += joint_[r] * kl_divergence(u_kernel_.row(r), p_u_.probs());
  }
  return acc;
}

double GwModel::cmi_y_x_given_u(int i) const {
  double acc = 0.0;
  for (SymbolId a = 0; a < n_x1_; ++a) {
    for (SymbolId b = 0; b < n_x2_; ++b) {
      const double px = p_x(a, b);
      if (px == 0.0) continue;
      const SymbolId xi = i == 1 ? a : b;
      for (SymbolId u = 0; u < n_u(); ++u) {
        const double pu = px * u_kernel_(a * n_x2_ + b, u);
        if (pu == 0.0) continue;
        acc += pu * kl_divergence(y_given_xu(i, xi, u), y_given_u(i, u));
      }
    }
  }
  return acc;
}

std::vector<double> GwModel::conditional_law(SymbolId x1, SymbolId x2) const {
  std::vector<double> out(n_u() * n_y1() * n_y2(), 0.0);
  const auto pu = u_given_x(x1, x2);
  for (SymbolId u = 0; u < n_u(); ++u) {
    if (pu[u] == 0.0) continue;
    const auto a = y_given_xu(1, x1, u);
    const auto b = y_given_xu(2, x2, u);
    for (SymbolId y1 = 0; y1 < n_y1(); ++y1) {
      for (SymbolId y2 = 0; y2 < n_y2(); ++y2) {
        out[(u * n_y1() + y1) * n_y2() + y2] = pu[u] * a[y1] * b[y2];
      }
    }
  }
  return out;
}

ResortedStream::ResortedStream(CodebookStream base, std::span<const double> iota_row)
    : base_(std::move(base)),
      scale_(iota_row.size(), kInf),
      mark_law_(scaled_law(base_.mark_law(), iota_row)) {
  double r = 0.0;
  for (SymbolId y = 0; y < iota_row.size(); ++y) {
    if (iota_row[y] == -kInf || base_.mark_law()[y] == 0.0) continue;
    scale_[y] = std::exp2(-iota_row[y]);
    r = std::max(r, std::exp2(iota_row[y]));
  }
  release_factor_ = r * kReleaseSlack;
}

MarkedPoint ResortedStream::next() {
  for (;;) {
    if (!heap_.empty() && heap_.top().time * release_factor_ <= frontier_) {
      const Pending p = heap_.top();
      heap_.pop();
      return MarkedPoint{++cursor_, p.mark, p.time};
    }
    const MarkedPoint raw = base_.next();
    frontier_ = raw.time;
    const double s = scale_[raw.mark];
    if (s != kInf) heap_.push({raw.time * s, raw.index, raw.mark});
  }
}

ResortedStream resorted_stream(CodebookStream base, std::span<const double> iota_row) {
  return ResortedStream(std::move(base), iota_row);
}

namespace {

CodebookStream common_stream(const GwModel& model, const Seed& seed) {
  return arrival_stream(seed, "u", model.p_u());
}

ResortedStream private_stream(const GwModel& model, int i, SymbolId u, const Seed& seed) {
  const auto iota = model.iota_u_y(i, u);
  return ResortedStream(arrival_stream(seed, i == 1 ? "y1" : "y2", model.p_y(i)), iota);
}

template <MarkedPointSource Stream>
SymbolId mark_at(Stream& stream, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("descriptions are positive integers");
  MarkedPoint p;
  do {
    p = stream.next();
  } while (p.index < k);
  return p.mark;
}

}  // namespace

GwResult gw_encode(const GwModel& model, SymbolId x1, SymbolId x2, const Seed& seed) {
  if (x1 >= model.n_x1() || x2 >= model.n_x2()) throw std::out_of_range("source symbol");
  GwResult out;
  CodebookStream u_stream = common_stream(model, seed);
  const PfrResult common = pfr_select(DensityRatio(model.u_given_x(x1, x2), model.p_u().probs()),
                                      u_stream);
  out.k0 = common.k;
  out.u = common.y;

  for (int i : {1, 2}) {
    ResortedStream stream = private_stream(model, i, out.u, seed);
    const SymbolId xi = i == 1 ? x1 : x2;
    const PfrResult sel =
        pfr_select(DensityRatio(model.y_given_xu(i, xi, out.u), model.y_given_u(i, out.u)), stream);
    if (i == 1) {
      out.k1 = sel.k;
      out.y1 = sel.y;
    } else {
      out.k2 = sel.k;
      out.y2 = sel.y;
    }
  }
  return out;
}

SymbolId gw_decode_common(const GwModel& model, std::uint64_t k0, const Seed& seed) {
  CodebookStream stream = common_stream(model, seed);
  return mark_at(stream, k0);
}

std::pair<SymbolId, SymbolId> gw_decode_private(const GwModel& model, int i, std::uint64_t k0,
                                                std::uint64_t ki, const Seed& seed) {
  const SymbolId u = gw_decode_common(model, k0, seed);
  ResortedStream stream = private_stream(model, i, u, seed);
  return {u, mark_at(stream, ki)};
}

GwReconstruction gw_decode(const GwModel& model, std::uint64_t k0, std::uint64_t k1,
                           std::uint64_t k2, const Seed& seed) {
  const auto [u, y1] = gw_decode_private(model, 1, k0, k1, seed);
  const auto [u2, y2] = gw_decode_private(model, 2, k0, k2, seed);
  (void)u2;
  return {u, y1, y2};
}

GwDominance gw_dominance_params(const GwModel& model, SymbolId x1, SymbolId x2, SymbolId u,
                                SymbolId y1, SymbolId y2) {
  if (model.p_x(x1, x2) == 0.0) throw UnsupportedPoint("P(x1, x2) = 0");
  const double pu_x = model.u_given_x(x1, x2)[u];
  if (pu_x == 0.0) throw UnsupportedPoint("P(u | x1, x2) = 0");
  GwDominance out;
  out.p0 = 1.0 / (pu_x / model.p_u()[u] + 1.0);
  for (int i : {1, 2}) {
    const SymbolId xi = i == 1 ? x1 : x2;
    const SymbolId yi = i == 1 ? y1 : y2;
    const double num = model.y_given_xu(i, xi, u)[yi];
    if (num == 0.0) throw UnsupportedPoint("P(y_i | x_i, u) = 0");
    const double p = 1.0 / (num / model.y_given_u(i, u)[yi] + 1.0);
    (i == 1 ? out.p1 : out.p2) = p;
  }
  return out;
}

std::vector<GwTrialRecord> run_gw_trials(const GwModel& model, std::uint64_t n,
                                         const Seed& seed, unsigned threads, bool verify) {
  std::vector<GwTrialRecord> records(n);
  parallel_for(n, threads, [&](std::uint64_t t) {
    Rng rng(derive_subseed(seed, t, "source"));
    const SymbolId pair = sample_pmf(model.joint_source(), rng);
    const SymbolId x1 = pair / model.n_x2();
    const SymbolId x2 = pair % model.n_x2();
    const Seed codebook = derive_subseed(seed, t, "codebook");
    const GwResult enc = gw_encode(model, x1, x2, codebook);
    if (verify) {
      const GwReconstruction dec = gw_decode(model, enc.k0, enc.k1, enc.k2, codebook);
      if (!(dec == GwReconstruction{enc.u, enc.y1, enc.y2})) {
        throw RoundTripMismatch("Gray-Wyner round trip failed on trial " + std::to_string(t));
      }
    }
    records[t] = GwTrialRecord{t,      x1,     x2,     enc.u,
                               enc.y1, enc.y2, enc.k0, enc.k1,
                               enc.k2, plain_length(enc.k0), plain_length(enc.k1),
                               plain_length(enc.k2)};
  });
  return records;
}

void write_gw_csv(std::ostream& out, std::span<const GwTrialRecord> records) {
  out << "trial,x1,x2,u,y1,y2,k0,k1,k2,len0,len1,len2\n";
  for (const auto& r : records) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{},{},{}\n", r.trial, r.x1, r.x2, r.u, r.y1, r.y2,
               r.k0, r.k1, r.k2, r.len0, r.len1, r.len2);
  }
}

}  // namespace pfrlab

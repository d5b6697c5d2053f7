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
#include "pfrlab/redundancy_lab.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "pfrlab/bitcodes.hpp"
#include "pfrlab/parallel.hpp"
#include "pfrlab/pfr.hpp"
#include "pfrlab/poisson_codebook.hpp"

namespace pfrlab {
namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

template <class Fn>
MeanSe mean_se(std::span<const TrialRecord> records, Fn value) {
  const double n = static_cast<double>(records.size());
  double sum = 0.0;
  for (const auto& r : records) sum += value(r);
  const double mean = sum / n;
  double ss = 0.0;
  for (const auto& r : records) {
    const double dv = value(r) - mean;
    ss += dv * dv;
  }
  const double var = records.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

// One support point of P_X P_{Y|X} with everything the bounds need.
struct SupportPoint {
  double mass;
  double iota;
  double eta;
};

std::vector<SupportPoint> support_points(const RdSolution& sol, const FinitePmf& source,
                                         const DistortionMatrix& d, EtaKind eta) {
  std::vector<SupportPoint> pts;
  for (SymbolId x = 0; x < source.size(); ++x) {
    if (source[x] == 0.0) continue;
    const double j_x = tilted_information(sol, d, x);
    for (SymbolId y = 0; y < sol.kernel.cols(); ++y) {
      const double q = sol.kernel(x, y);
      if (q == 0.0) continue;
      const double iota = std::log2(q / sol.output_marginal[y]);
      double e = 0.0;
      switch (eta) {
        case EtaKind::Prr: e = sol.rate; break;
        case EtaKind::Psr: e = j_x; break;
        case EtaKind::Psdr: e = tilted_information(sol, d, x, d(x, y)); break;
      }
      pts.push_back({source[x] * q, iota, e});
    }
  }
  return pts;
}

bool psdr_only(BoundKind b) {
  return b == BoundKind::PsdrSimple || b == BoundKind::PsdrCommonRandomness ||
         b == BoundKind::PsdrPrefixFree;
}

}  // namespace

std::string_view to_string(EtaKind k) {
  switch (k) {
    case EtaKind::Prr: return "PRR";
    case EtaKind::Psr: return "PSR";
    case EtaKind::Psdr: return "PSDR";
  }
  return "?";
}

std::string_view to_string(CodeKind k) { return k == CodeKind::Plain ? "plain" : "delta"; }

std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::General: return "general";
    case BoundKind::Clipped: return "clipped";
    case BoundKind::PrefixFree: return "prefix_free";
    case BoundKind::PsdrSimple: return "psdr_simple";
    case BoundKind::PsdrCommonRandomness: return "psdr_common_randomness";
    case BoundKind::PsdrPrefixFree: return "psdr_prefix_free";
  }
  return "?";
}

double TrialRecord::redundancy(EtaKind eta, CodeKind code) const {
  if (code == CodeKind::Plain) {
    switch (eta) {
      case EtaKind::Prr: return prr_plain;
      case EtaKind::Psr: return psr_plain;
      case EtaKind::Psdr: return psdr_plain;
    }
  }
  switch (eta) {
    case EtaKind::Prr: return prr_delta;
    case EtaKind::Psr: return psr_delta;
    case EtaKind::Psdr: return psdr_delta;
  }
  return 0.0;
}

std::vector<TrialRecord> run_trials(const RdSolution& sol, const FinitePmf& source,
                                    const DistortionMatrix& d, std::uint64_t n,
                                    const Seed& seed, const TrialOptions& opts) {
  if (n == 0) throw std::invalid_argument("run_trials needs at least one trial");
  if (source.size() != sol.kernel.rows() || d.rows() != source.size() ||
      d.cols() != sol.kernel.cols()) {
    throw InvalidDistribution("run_trials: solution, source and distortion shapes differ");
  }

  // Per-x tables shared read-only by every worker.
  const std::size_t nx = source.size();
  const std::size_t ny = sol.kernel.cols();
  std::vector<DensityRatio> ratios;
  std::vector<double> j_x(nx);
  std::vector<double> iota(nx * ny, 0.0);
  std::vector<double> j_xd(nx * ny, 0.0);
  ratios.reserve(nx);
  for (SymbolId x = 0; x < nx; ++x) {
    ratios.emplace_back(sol.kernel.row(x), sol.output_marginal.probs());
    j_x[x] = tilted_information(sol, d, x);
    for (SymbolId y = 0; y < ny; ++y) {
      if (sol.kernel(x, y) > 0.0) iota[x * ny + y] = std::log2(sol.kernel(x, y) / sol.output_marginal[y]);
      j_xd[x * ny + y] = tilted_information(sol, d, x, d(x, y));
    }
  }

  std::vector<TrialRecord> records(n);
  parallel_for(n, opts.threads, [&](std::uint64_t t) {
    Rng source_rng(derive_subseed(seed, t, "source"));
    const SymbolId x = sample_pmf(source, source_rng);
    CodebookStream stream(derive_subseed(seed, t, "codebook"), "y", sol.output_marginal);
    const PfrResult sel = pfr_select(ratios[x], stream);

    TrialRecord& r = records[t];
    r.trial = t;
    r.x = x;
    r.y = sel.y;
    r.k = sel.k;
    r.len_plain = plain_length(sel.k);
    r.len_delta = delta_length(sel.k);
    r.dist = d(x, sel.y);
    r.iota = iota[x * ny + sel.y];
    r.j_x = j_x[x];
    r.j_xd = j_xd[x * ny + sel.y];
    const double log_k = std::log2(static_cast<double>(sel.k));
    r.prr_plain = log_k - sol.rate;
    r.psr_plain = log_k - r.j_x;
    r.psdr_plain = log_k - r.j_xd;
    r.prr_delta = r.len_delta - sol.rate;
    r.psr_delta = r.len_delta - r.j_x;
    r.psdr_delta = r.len_delta - r.j_xd;
  });
  return records;
}

TailEstimate estimate_tail(std::span<const TrialRecord> records, EtaKind eta, CodeKind code,
                           double gamma) {
  if (records.empty()) throw std::invalid_argument("estimate_tail needs records");
  std::uint64_t hits = 0;
  for (const auto& r : records) {
    if (r.redundancy(eta, code) >= gamma) ++hits;
  }
  const double n = static_cast<double>(records.size());
  const double p = static_cast<double>(hits) / n;
  return {gamma, p, std::sqrt(p * (1.0 - p) / n), records.size()};
}

std::vector<BoundKind> applicable_bounds(EtaKind eta, CodeKind code) {
  std::vector<BoundKind> out;
  if (code == CodeKind::Plain) {
    out = {BoundKind::General, BoundKind::Clipped};
    if (eta == EtaKind::Psdr) {
      out.push_back(BoundKind::PsdrSimple);
      out.push_back(BoundKind::PsdrCommonRandomness);
    }
  } else {
    out = {BoundKind::PrefixFree};
    if (eta == EtaKind::Psdr) out.push_back(BoundKind::PsdrPrefixFree);
  }
  return out;
}

double bound_value(const RdSolution& sol, const FinitePmf& source, const DistortionMatrix& d,
                   BoundKind bound, EtaKind eta, double gamma) {
  if (psdr_only(bound) && eta != EtaKind::Psdr) {
    throw UnsupportedEta(std::string(to_string(bound)) + " applies to PSDR only, not " +
                         std::string(to_string(eta)));
  }
  if (!std::isfinite(sol.slope_lambda) || !std::isfinite(sol.rate)) {
    throw UnsupportedEta("solution lacks a finite slope or rate");
  }
  if (bound == BoundKind::PsdrSimple) return std::exp2(-gamma + 2.0);

  const auto pts = support_points(sol, source, d, eta);
  double acc = 0.0;
  for (const auto& p : pts) {
    double term = 0.0;
    switch (bound) {
      case BoundKind::General:
        term = std::exp2(-p.eta + p.iota) + std::exp2(-p.eta);
        break;
      case BoundKind::Clipped:
        term = std::min(std::exp2(-p.eta - gamma + 1.0 + p.iota) + std::exp2(-p.eta - gamma + 1.0),
                        1.0);
        break;
      case BoundKind::PrefixFree: {
        const double lift = std::max(p.eta + gamma, 0.0) + 1.0;
        const double scale = std::exp2(-p.eta - gamma + 2.0) * lift * lift;
        term = std::min(scale * (std::exp2(p.iota) + 1.0), 1.0);
        break;
      }
      case BoundKind::PsdrCommonRandomness:
        term = std::exp2(-p.iota);
        break;
      case BoundKind::PsdrPrefixFree: {
        const double lift = std::max(p.iota + gamma, 0.0) + 1.0;
        term = lift * lift;
        break;
      }
      case BoundKind::PsdrSimple:
        break;
    }
    acc += p.mass * term;
  }
  switch (bound) {
    case BoundKind::General: return std::exp2(-gamma + 1.0) * acc;
    case BoundKind::PsdrCommonRandomness: return std::exp2(-gamma + 1.0) * (1.0 + acc);
    case BoundKind::PsdrPrefixFree: return std::exp2(-gamma + 3.0) * acc;
    default: return acc;
  }
}

double bound_rhs(const RdSolution& sol, const FinitePmf& source, const DistortionMatrix& d,
                 EtaKind eta, CodeKind code, double gamma) {
  double best = std::numeric_limits<double>::infinity();
  for (BoundKind b : applicable_bounds(eta, code)) {
    best = std::min(best, bound_value(sol, source, d, b, eta, gamma));
  }
  return best;
}

Summary summary_stats(std::span<const TrialRecord> records, const RdSolution& sol) {
  if (records.empty()) throw std::invalid_argument("summary_stats needs records");
  Summary s;
  s.n = records.size();
  auto set = [](double& mean, double& se, MeanSe v) {
    mean = v.mean;
    se = v.se;
  };
  set(s.mean_dist, s.se_dist, mean_se(records, [](const TrialRecord& r) { return r.dist; }));
  set(s.mean_len_plain, s.se_len_plain,
      mean_se(records, [](const TrialRecord& r) { return double(r.len_plain); }));
  set(s.mean_len_delta, s.se_len_delta,
      mean_se(records, [](const TrialRecord& r) { return double(r.len_delta); }));
  set(s.mean_log2_k, s.se_log2_k,
      mean_se(records, [](const TrialRecord& r) { return std::log2(double(r.k)); }));
  set(s.mean_j_x, s.se_j_x, mean_se(records, [](const TrialRecord& r) { return r.j_x; }));
  set(s.mean_j_xd, s.se_j_xd, mean_se(records, [](const TrialRecord& r) { return r.j_xd; }));

  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto& r : records) ++counts[r.k];
  const double n = static_cast<double>(records.size());
  for (const auto& [k, c] : counts) {
    const double p = static_cast<double>(c) / n;
    s.entropy_k -= p * std::log2(p);
  }

  s.rate = sol.rate;
  s.target_plain = sol.rate + 2.01;
  s.target_delta = sol.rate + std::log2(sol.rate + 3.01) + 4.01;
  s.entropy_k_bound = s.mean_log2_k + std::log2(s.mean_log2_k + 1.0) + 1.0;
  return s;
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
  out << "trial,x,y,k,len_plain,len_delta,dist,iota,j_x,j_xd,prr_plain,psr_plain,psdr_plain,"
         "prr_delta,psr_delta,psdr_delta\n";
  for (const auto& r : records) {
    fmt::print(out, "{},{},{},{},{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n",
               r.trial, r.x, r.y, r.k, r.len_plain, r.len_delta, r.dist, r.iota, r.j_x, r.j_xd,
               r.prr_plain, r.psr_plain, r.psdr_plain, r.prr_delta, r.psr_delta, r.psdr_delta);
  }
}

std::vector<TailRow> tail_sweep(std::span<const TrialRecord> records, const RdSolution& sol,
                                const FinitePmf& source, const DistortionMatrix& d,
                                std::span<const double> gamma_grid) {
  std::vector<TailRow> rows;
  for (EtaKind eta : {EtaKind::Prr, EtaKind::Psr, EtaKind::Psdr}) {
    for (CodeKind code : {CodeKind::Plain, CodeKind::Delta}) {
      for (double g : gamma_grid) {
        rows.push_back({eta, code, estimate_tail(records, eta, code, g),
                        bound_rhs(sol, source, d, eta, code, g)});
      }
    }
  }
  return rows;
}

void write_tails_csv(std::ostream& out, std::span<const TailRow> rows) {
  out << "eta_kind,code_kind,gamma,p_hat,std_err,bound_rhs\n";
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{:.9g},{:.9g},{:.9g},{:.9g}\n", to_string(r.eta), to_string(r.code),
               r.tail.gamma, r.tail.p_hat, r.tail.std_err, r.bound);
  }
}

}  // namespace pfrlab

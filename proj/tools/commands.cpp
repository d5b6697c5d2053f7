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
#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "pfrlab/gray_wyner.hpp"
#include "pfrlab/pfr.hpp"
#include "pfrlab/rd_solver.hpp"
#include "pfrlab/redundancy_lab.hpp"

namespace pfrlab::cli {
namespace {

// Slack on the plug-in H(K) inequality.
constexpr double kEntropySlack = 0.05;
constexpr double kSigmas = 3.0;

std::ofstream open_output(const RunOptions& opts, const char* name) {
  std::filesystem::create_directories(opts.out_dir);
  std::ofstream out(opts.out_dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (opts.out_dir / name).string());
  return out;
}

const FinitePmf& need_source(const ExperimentConfig& cfg) {
  if (!cfg.source) throw ConfigError("source", "missing");
  return *cfg.source;
}

const DistortionMatrix& need_distortion(const ExperimentConfig& cfg) {
  if (!cfg.distortion) throw ConfigError("distortion", "missing");
  if (cfg.source && cfg.distortion->rows() != cfg.source->size()) {
    throw ConfigError("distortion", "needs one row per source symbol");
  }
  return *cfg.distortion;
}

double need_target(const ExperimentConfig& cfg) {
  if (!cfg.target_D) throw ConfigError("target_D", "missing");
  return *cfg.target_D;
}

RdSolution solve(const ExperimentConfig& cfg) {
  try {
    return solve_at_distortion(need_source(cfg), need_distortion(cfg), need_target(cfg));
  } catch (const TargetOutOfRange& e) {
    throw ConfigError("target_D", e.what());
  }
}

// Smallest positive excess d(x, y) - min_y d(x, y); sets the slope scale.
double distortion_scale(const DistortionMatrix& d) {
  double g = std::numeric_limits<double>::infinity();
  for (SymbolId x = 0; x < d.rows(); ++x) {
    auto row = d.row(x);
    const double m = *std::min_element(row.begin(), row.end());
    for (double v : row) {
      if (v > m) g = std::min(g, v - m);
    }
  }
  return g;
}

struct CheckRow {
  std::string pair;
  std::string check;
  std::string y;
  double statistic;
  double bound;
  bool pass;
};

double geometric_tv(const std::map<std::uint64_t, std::uint64_t>& counts, std::uint64_t n,
                    double p) {
  double tv = 0.0;
  double covered = 0.0;
  std::uint64_t kmax = counts.empty() ? 0 : counts.rbegin()->first;
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    const auto it = counts.find(k);
    const double emp = it == counts.end() ? 0.0 : double(it->second) / double(n);
    const double g = geometric_pmf(p, k);
    tv += std::abs(emp - g);
    covered += g;
  }
  return 0.5 * (tv + std::max(0.0, 1.0 - covered));
}

std::vector<CheckRow> pfr_checks(const std::string& name, const FinitePmf& target,
                                 const FinitePmf& proposal, std::uint64_t n, const Seed& seed,
                                 unsigned threads) {
  const auto results = run_pfr_trials(target, proposal, n, seed, "pfr/" + name, threads);
  const std::size_t m = target.size();
  std::vector<CheckRow> rows;

  std::vector<double> freq(m, 0.0);
  std::vector<std::map<std::uint64_t, std::uint64_t>> k_by_y(m);
  std::vector<std::uint64_t> n_by_y(m, 0);
  double sum_log = 0.0;
  double sum_log2 = 0.0;
  for (const auto& r : results) {
    freq[r.y] += 1.0 / double(n);
    ++k_by_y[r.y][r.k];
    ++n_by_y[r.y];
    const double l = std::log2(double(r.k));
    sum_log += l;
    sum_log2 += l * l;
  }
  const double tv = total_variation(freq, target.probs());
  const double tv_bound = kSigmas * std::sqrt(double(m) / double(n));
  rows.push_back({name, "marginal_tv", "", tv, tv_bound, tv <= tv_bound});

  for (SymbolId y = 0; y < m; ++y) {
    if (n_by_y[y] == 0) continue;
    const std::string ys = std::to_string(y);
    if (n_by_y[y] >= 20000) {
      const double ctv =
          geometric_tv(k_by_y[y], n_by_y[y], geometric_parameter_exact(target, proposal, y));
      rows.push_back({name, "conditional_geometric_tv", ys, ctv, 0.02, ctv <= 0.02});
    }
    const double p_dom = dominance_parameter(target, proposal, y);
    double worst = -1.0;
    std::uint64_t above = n_by_y[y];
    for (std::uint64_t k = 1; k <= 50; ++k) {
      const auto it = k_by_y[y].find(k);
      if (it != k_by_y[y].end()) above -= it->second;
      const double s = double(above) / double(n_by_y[y]);
      const double se = std::sqrt(s * (1.0 - s) / double(n_by_y[y]));
      worst = std::max(worst, s - kSigmas * se - geometric_survival(p_dom, k));
    }
    rows.push_back({name, "dominance_excess", ys, worst, 0.0, worst <= 0.0});
  }

  const double mean = sum_log / double(n);
  const double var = n > 1 ? (sum_log2 - double(n) * mean * mean) / double(n - 1) : 0.0;
  const double upper = mean + kSigmas * std::sqrt(std::max(var, 0.0) / double(n));
  const double bound = kl_divergence(target, proposal) + 1.0;
  rows.push_back({name, "log_length", "", upper, bound, upper <= bound});
  return rows;
}

unsigned default_threads() {
  if (const char* env = std::getenv("PFRLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

}  // namespace

int cmd_rd_curve(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const FinitePmf& source = need_source(cfg);
  const DistortionMatrix& d = need_distortion(cfg);

  std::vector<double> slopes = cfg.slopes;
  const double scale = distortion_scale(d);
  const bool flat = zero_rate_distortion(source, d) <= min_achievable_distortion(source, d);
  if (flat || !std::isfinite(scale)) {
    slopes = {0.0};
  } else if (slopes.empty()) {
    const double s_max = 16.0 / scale;
    for (int i = 0; i <= 32; ++i) slopes.push_back(s_max * i / 32.0);
  }
  std::sort(slopes.begin(), slopes.end());

  auto out = open_output(opts, "rd_curve.csv");
  out << "s,D,R,lambda_star\n";
  for (double s : slopes) {
    const RdSolution sol = ba_fixed_slope(source, d, s);
    fmt::print(out, "{:.9g},{:.9g},{:.9g},{:.9g}\n", s, sol.distortion, sol.rate,
               sol.slope_lambda);
  }
  fmt::print(log, "rd-curve: {} points written to {}\n", slopes.size(),
             (opts.out_dir / "rd_curve.csv").string());
  return kExitOk;
}

int cmd_verify_pfr(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  std::vector<CheckRow> rows;
  if (cfg.pfr) {
    rows = pfr_checks("0", FinitePmf(cfg.pfr->target), FinitePmf(cfg.pfr->proposal), cfg.trials,
                      cfg.seed, opts.threads);
  } else {
    const RdSolution sol = solve(cfg);
    for (SymbolId x = 0; x < sol.kernel.rows(); ++x) {
      auto part = pfr_checks(std::to_string(x), sol.kernel.row_pmf(x), sol.output_marginal,
                             cfg.trials, cfg.seed, opts.threads);
      rows.insert(rows.end(), part.begin(), part.end());
    }
  }
  auto out = open_output(opts, "pfr_checks.csv");
  out << "pair,check,y,statistic,bound,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{:.9g},{:.9g},{}\n", r.pair, r.check, r.y, r.statistic, r.bound,
               r.pass ? 1 : 0);
    all = all && r.pass;
  }
  fmt::print(log, "verify-pfr: {} checks, {}\n", rows.size(), all ? "all passed" : "FAILURES");
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_redundancy_sweep(const ExperimentConfig& cfg, const RunOptions& opts,
                         std::ostream& log) {
  if (cfg.gamma_grid.empty()) throw ConfigError("gamma_grid", "must be nonempty for this mode");
  const FinitePmf& source = need_source(cfg);
  const DistortionMatrix& d = need_distortion(cfg);
  const RdSolution sol = solve(cfg);
  const auto records = run_trials(sol, source, d, cfg.trials, cfg.seed, {opts.threads});
  const auto tails = tail_sweep(records, sol, source, d, cfg.gamma_grid);
  const Summary s = summary_stats(records, sol);

  {
    auto out = open_output(opts, "trials.csv");
    write_trials_csv(out, records);
  }
  {
    auto out = open_output(opts, "tails.csv");
    write_tails_csv(out, tails);
  }

  bool all = true;
  for (const auto& t : tails) all = all && (t.tail.p_hat - kSigmas * t.tail.std_err <= t.bound);

  bool identities = true;
  for (const auto& r : records) {
    const double shifted = r.j_x - sol.slope_lambda * (r.dist - sol.distortion);
    identities = identities && std::abs(r.j_xd - shifted) <= 1e-9 &&
                 std::abs(r.j_xd - r.iota) <= 1e-6;
  }

  struct Line {
    const char* name;
    double value;
    double bound;
    bool pass;
  };
  const double plain_upper = s.mean_len_plain + kSigmas * s.se_len_plain;
  const double delta_upper = s.mean_len_delta + kSigmas * s.se_len_delta;
  const std::vector<Line> lines = {
      {"rate", s.rate, s.rate, true},
      {"slope_lambda", sol.slope_lambda, sol.slope_lambda, true},
      {"mean_dist", s.mean_dist, sol.distortion + kSigmas * s.se_dist,
       s.mean_dist <= sol.distortion + kSigmas * s.se_dist},
      {"mean_log2_k", s.mean_log2_k, s.rate + 1.0,
       s.mean_log2_k + kSigmas * s.se_log2_k <= s.rate + 1.0},
      {"mean_len_plain", plain_upper, s.target_plain, plain_upper <= s.target_plain},
      {"mean_len_delta", delta_upper, s.target_delta, delta_upper <= s.target_delta},
      {"entropy_k", s.entropy_k, s.entropy_k_bound + kEntropySlack,
       s.entropy_k <= s.entropy_k_bound + kEntropySlack},
      {"tilted_identities", identities ? 0.0 : 1.0, 0.0, identities},
      {"tails", all ? 0.0 : 1.0, 0.0, all},
  };
  auto out = open_output(opts, "summary.csv");
  out << "quantity,value,bound,pass\n";
  bool ok = true;
  for (const auto& l : lines) {
    fmt::print(out, "{},{:.9g},{:.9g},{}\n", l.name, l.value, l.bound, l.pass ? 1 : 0);
    ok = ok && l.pass;
  }
  fmt::print(log, "redundancy-sweep: {} trials, {} tail rows, {}\n", records.size(), tails.size(),
             ok ? "all checks passed" : "FAILURES");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_gray_wyner(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  if (!cfg.gray_wyner) throw ConfigError("gray_wyner", "missing model block");
  const GwModel& model = *cfg.gray_wyner;
  const auto records = run_gw_trials(model, cfg.trials, cfg.seed, opts.threads, true);
  {
    auto out = open_output(opts, "gray_wyner.csv");
    write_gw_csv(out, records);
  }
  const double n = double(records.size());
  auto upper = [&](auto field) {
    double sum = 0.0, sum2 = 0.0;
    for (const auto& r : records) {
      const double l = std::log2(double(field(r)));
      sum += l;
      sum2 += l * l;
    }
    const double mean = sum / n;
    const double var = records.size() > 1 ? (sum2 - n * mean * mean) / (n - 1.0) : 0.0;
    return std::pair{mean, mean + kSigmas * std::sqrt(std::max(var, 0.0) / n)};
  };
  const auto k0 = upper([](const GwTrialRecord& r) { return r.k0; });
  const auto k1 = upper([](const GwTrialRecord& r) { return r.k1; });
  const auto k2 = upper([](const GwTrialRecord& r) { return r.k2; });
  const double b0 = model.mi_u_x() + 1.0;
  const double b1 = model.cmi_y_x_given_u(1) + 1.0;
  const double b2 = model.cmi_y_x_given_u(2) + 1.0;

  auto out = open_output(opts, "gw_summary.csv");
  out << "quantity,mean,upper,bound,pass\n";
  bool ok = true;
  for (auto [name, v, b] : {std::tuple{"log2_k0", k0, b0}, std::tuple{"log2_k1", k1, b1},
                            std::tuple{"log2_k2", k2, b2}}) {
    const bool pass = v.second <= b;
    ok = ok && pass;
    fmt::print(out, "{},{:.9g},{:.9g},{:.9g},{}\n", name, v.first, v.second, b, pass ? 1 : 0);
    fmt::print(log, "gray-wyner: E[{}] = {:.6f} (+3SE {:.6f}) <= {:.6f} {}\n", name, v.first,
               v.second, b, pass ? "ok" : "FAIL");
  }
  return ok ? kExitOk : kExitCheckFailed;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-shot lossy compression via the Poisson functional representation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> trials;
  std::optional<std::string> seed_hex;
  app.add_option("--config", config_path, "JSON experiment config")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (default: PFRLAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--trials", trials, "override the config's trial count")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed_hex, "override the config's seed (64 hex characters)");

  auto* rd = app.add_subcommand("rd-curve", "sweep slopes and write the R(D) curve");
  auto* vp = app.add_subcommand("verify-pfr", "check the selection laws empirically");
  auto* rs = app.add_subcommand("redundancy-sweep", "pointwise redundancy tails vs bounds");
  auto* gw = app.add_subcommand("gray-wyner", "one-shot lossy Gray-Wyner round trips");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::string mode = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig cfg = load_config(config_path);
    if (cfg.mode && *cfg.mode != mode) {
      throw ConfigError("mode", "config is for '" + *cfg.mode + "' but '" + mode + "' was run");
    }
    if (trials) cfg.trials = *trials;
    if (seed_hex) {
      try {
        cfg.seed = Seed::from_hex(*seed_hex);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("--seed", e.what());
      }
    }
    RunOptions opts{out_dir, threads.value_or(default_threads())};
    if (rd->parsed()) return cmd_rd_curve(cfg, opts, out);
    if (vp->parsed()) return cmd_verify_pfr(cfg, opts, out);
    if (rs->parsed()) return cmd_redundancy_sweep(cfg, opts, out);
    if (gw->parsed()) return cmd_gray_wyner(cfg, opts, out);
    return kExitUsage;
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const InvalidDistribution& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const NotConverged& e) {
    fmt::print(err, "solver error: {}\n", e.what());
    return kExitNotConverged;
  } catch (const RoundTripMismatch& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kExitRoundTrip;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }
}

}  // namespace pfrlab::cli

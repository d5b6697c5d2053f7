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
#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "pfrlab/errors.hpp"

namespace pfrlab::cli {
namespace {

using nlohmann::json;

double parse_real(const json& v, const std::string& field) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw ConfigError(field, "expected a decimal string or number");
  const std::string s = v.get<std::string>();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(field, "'" + s + "' is not a decimal number");
  }
  return out;
}

std::vector<double> parse_vector(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(parse_real(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::vector<double>> parse_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field, "expected a nonempty array of rows");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(parse_vector(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

FinitePmf parse_pmf(const json& v, const std::string& field) {
  try {
    return FinitePmf(parse_vector(v, field));
  } catch (const InvalidDistribution& e) {
    throw ConfigError(field, e.what());
  }
}

Kernel parse_kernel(const json& v, const std::string& field) {
  try {
    return Kernel(parse_matrix(v, field));
  } catch (const InvalidDistribution& e) {
    throw ConfigError(field, e.what());
  }
}

std::size_t parse_count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw ConfigError(field, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

GwModel parse_gray_wyner(const json& g) {
  if (!g.is_object()) throw ConfigError("gray_wyner", "expected an object");
  for (const char* key : {"n_x1", "n_x2", "joint_source", "u_kernel", "y1_kernel", "y2_kernel"}) {
    if (!g.contains(key)) throw ConfigError(std::string("gray_wyner.") + key, "missing");
  }
  const std::size_t n1 = parse_count(g["n_x1"], "gray_wyner.n_x1");
  const std::size_t n2 = parse_count(g["n_x2"], "gray_wyner.n_x2");
  try {
    return GwModel(n1, n2, parse_pmf(g["joint_source"], "gray_wyner.joint_source"),
                   parse_kernel(g["u_kernel"], "gray_wyner.u_kernel"),
                   parse_kernel(g["y1_kernel"], "gray_wyner.y1_kernel"),
                   parse_kernel(g["y2_kernel"], "gray_wyner.y2_kernel"));
  } catch (const InvalidDistribution& e) {
    throw ConfigError("gray_wyner", e.what());
  }
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<root>", "config must be a JSON object");
  ExperimentConfig cfg;
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ConfigError("mode", "expected a string");
    cfg.mode = doc["mode"].get<std::string>();
    static constexpr std::string_view kModes[] = {"rd-curve", "verify-pfr", "redundancy-sweep",
                                                  "gray-wyner"};
    if (std::find(std::begin(kModes), std::end(kModes), *cfg.mode) == std::end(kModes)) {
      throw ConfigError("mode", "unknown mode '" + *cfg.mode + "'");
    }
  }
  if (doc.contains("source")) cfg.source = parse_pmf(doc["source"], "source");
  if (doc.contains("distortion")) {
    try {
      cfg.distortion = DistortionMatrix(parse_matrix(doc["distortion"], "distortion"));
    } catch (const InvalidDistribution& e) {
      throw ConfigError("distortion", e.what());
    }
    if (cfg.source && cfg.distortion->rows() != cfg.source->size()) {
      throw ConfigError("distortion", "needs one row per source symbol");
    }
  }
  if (doc.contains("target_D")) cfg.target_D = parse_real(doc["target_D"], "target_D");
  if (doc.contains("trials")) cfg.trials = parse_count(doc["trials"], "trials");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_string()) throw ConfigError("seed", "expected a 64-character hex string");
    try {
      cfg.seed = Seed::from_hex(doc["seed"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError("seed", e.what());
    }
  }
  if (doc.contains("gamma_grid")) cfg.gamma_grid = parse_vector(doc["gamma_grid"], "gamma_grid");
  if (doc.contains("slopes")) {
    cfg.slopes = parse_vector(doc["slopes"], "slopes");
    for (double s : cfg.slopes) {
      if (!(s >= 0.0)) throw ConfigError("slopes", "slopes must be nonnegative");
    }
  }
  if (doc.contains("pfr")) {
    const json& p = doc["pfr"];
    if (!p.is_object() || !p.contains("target") || !p.contains("proposal")) {
      throw ConfigError("pfr", "expected {\"target\": [...], \"proposal\": [...]}");
    }
    const FinitePmf target = parse_pmf(p["target"], "pfr.target");
    const FinitePmf proposal = parse_pmf(p["proposal"], "pfr.proposal");
    cfg.pfr = PfrPair{{target.probs().begin(), target.probs().end()},
                      {proposal.probs().begin(), proposal.probs().end()}};
    if (cfg.pfr->target.size() != cfg.pfr->proposal.size()) {
      throw ConfigError("pfr.proposal", "must have the same length as pfr.target");
    }
  }
  if (doc.contains("gray_wyner")) cfg.gray_wyner = parse_gray_wyner(doc["gray_wyner"]);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

}  // namespace pfrlab::cli

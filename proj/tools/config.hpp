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
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "pfrlab/gray_wyner.hpp"
#include "pfrlab/prob.hpp"
#include "pfrlab/rng.hpp"

namespace pfrlab::cli {

/// Config could not be turned into valid module inputs. `field` is the JSON
/// path of the offending value.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct PfrPair {
  std::vector<double> target;
  std::vector<double> proposal;
};

struct ExperimentConfig {
  std::optional<std::string> mode;
  std::optional<FinitePmf> source;
  std::optional<DistortionMatrix> distortion;
  std::optional<double> target_D;
  std::uint64_t trials = 10000;
  Seed seed;
  std::vector<double> gamma_grid;
  std::vector<double> slopes;
  std::optional<PfrPair> pfr;
  std::optional<GwModel> gray_wyner;
};

/// Probabilities and reals may be given as decimal strings or JSON numbers.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

}  // namespace pfrlab::cli

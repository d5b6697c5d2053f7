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

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace pfrlab::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,         ///< bad command line or I/O failure
  kExitConfig = 2,        ///< config parse or validation failure
  kExitNotConverged = 3,  ///< rate-distortion solver did not converge
  kExitRoundTrip = 4,     ///< Gray-Wyner decoder disagreed with the encoder
  kExitCheckFailed = 5,   ///< a requested bound or law check failed
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  unsigned threads = 1;
};

/// Writes rd_curve.csv: s,D,R,lambda_star.
int cmd_rd_curve(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Writes pfr_checks.csv: pair,check,y,statistic,bound,pass.
int cmd_verify_pfr(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Writes trials.csv, tails.csv and summary.csv.
int cmd_redundancy_sweep(const ExperimentConfig& cfg, const RunOptions& opts,
                         std::ostream& log);

/// Writes gray_wyner.csv and gw_summary.csv.
int cmd_gray_wyner(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Entry point shared by the executable and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pfrlab::cli

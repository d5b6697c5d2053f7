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
#include "pfrlab/poisson_codebook.hpp"

#include <string>

namespace pfrlab {
namespace {

Seed substream(const Seed& seed, std::string_view label, std::string_view part) {
  std::string full(label);
  full.push_back('/');
  full.append(part);
  return derive_labeled(seed, full);
}

}  // namespace

CodebookStream::CodebookStream(const Seed& seed, std::string_view label, FinitePmf mark_law)
    : mark_law_(std::move(mark_law)),
      gap_rng_(substream(seed, label, "time")),
      mark_rng_(substream(seed, label, "mark")) {}

MarkedPoint CodebookStream::next() {
  double t = time_;
  while (t <= time_) t = time_ + gap_rng_.exponential();
  time_ = t;
  ++cursor_;
  return MarkedPoint{cursor_, sample_pmf(mark_law_, mark_rng_), time_};
}

CodebookStream arrival_stream(const Seed& seed, std::string_view label, FinitePmf mark_law) {
  return CodebookStream(seed, label, std::move(mark_law));
}

}  // namespace pfrlab

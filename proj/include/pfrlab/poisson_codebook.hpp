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

#include <concepts>
#include <cstdint>
#include <string_view>

#include "pfrlab/prob.hpp"
#include "pfrlab/rng.hpp"

namespace pfrlab {

/// One point (index, mark, arrival time) of a marked Poisson process.
struct MarkedPoint {
  std::uint64_t index = 0;  ///< 1-based position in the stream
  SymbolId mark = 0;
  double time = 0.0;
};

/// Anything that yields marked points in increasing time order.
template <class S>
concept MarkedPointSource = requires(S s) {
  { s.next() } -> std::same_as<MarkedPoint>;
  { s.mark_law() } -> std::convertible_to<const FinitePmf&>;
};

/// Lazily generated rate-1 Poisson process with i.i.d. marks.
///
/// Times and marks come from two independent substreams of the seed, so the
/// sequence is a pure function of (seed, label) and is never materialised.
class CodebookStream {
 public:
  CodebookStream(const Seed& seed, std::string_view label, FinitePmf mark_law);

  /// Next point: time = previous + Exp(1) (zero gaps redrawn), mark ~ law.
  MarkedPoint next();

  const FinitePmf& mark_law() const { return mark_law_; }
  std::uint64_t cursor() const { return cursor_; }

 private:
  FinitePmf mark_law_;
  Rng gap_rng_;
  Rng mark_rng_;
  std::uint64_t cursor_ = 0;
  double time_ = 0.0;
};

/// Stream whose inter-arrival gaps are i.i.d. Exp(1) from the labelled
/// substream of `seed`. Marks default to a single-symbol alphabet.
CodebookStream arrival_stream(const Seed& seed, std::string_view label,
                              FinitePmf mark_law = FinitePmf::point_mass(1, 0));

inline MarkedPoint next_marked_point(CodebookStream& stream) { return stream.next(); }

}  // namespace pfrlab

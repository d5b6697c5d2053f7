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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace pfrlab {

/// 256-bit opaque seed. All randomness in the library is derived from one.
struct Seed {
  std::array<std::uint8_t, 32> bytes{};

  /// Parses exactly 64 hex characters (either case).
  static Seed from_hex(std::string_view hex);
  std::string to_hex() const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

/// Collision-resistant child seed for a (trial, role) pair.
Seed derive_subseed(const Seed& seed, std::uint64_t trial, std::string_view role);

/// Child seed for a named substream.
Seed derive_labeled(const Seed& seed, std::string_view label);

/// Counter-based generator: the ChaCha20 keystream under the seed as key.
///
/// Output word n depends only on (seed, n), so two generators built from the
/// same seed produce the same sequence regardless of what else runs. Distinct
/// streams come from distinct derived seeds, never from sharing a generator.
class Rng {
 public:
  explicit Rng(const Seed& seed);

  std::uint64_t next_u64();

  /// Uniform on (0, 1], 53-bit resolution; never returns 0.
  double uniform_pos();

  /// Uniform on [0, 1).
  double uniform();

  /// Exp(1) by inversion, -ln(u) with u in (0, 1].
  double exponential();

 private:
  void refill();

  static constexpr std::size_t kWords = 64;

  Seed key_;
  std::uint64_t block_counter_ = 0;
  std::array<std::uint64_t, kWords> buffer_{};
  std::size_t pos_ = kWords;
};

}  // namespace pfrlab

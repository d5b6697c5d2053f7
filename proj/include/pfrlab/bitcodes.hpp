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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pfrlab {

/// Ordered bit sequence, most significant bit first within each field.
class BitString {
 public:
  BitString() = default;

  /// From a string of '0' / '1' characters.
  static BitString from_string(std::string_view bits);

  /// Inverse of to_hex(): `length` bits taken MSB-first from the padded bytes.
  static BitString from_hex(std::size_t length, std::string_view hex);

  void push_back(bool bit) { bits_.push_back(bit); }
  /// Appends the low `width` bits of `value`, MSB first.
  void append_bits(std::uint64_t value, unsigned width);
  void append(const BitString& other);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  std::string to_string() const;
  /// Byte-padded payload as lowercase hex; the final byte is zero-filled.
  std::string to_hex() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

/// Binary representation of k without its leading 1: floor(log2 k) bits.
BitString encode_plain(std::uint64_t k);

/// Prepends the implicit 1. Needs the length out of band; any string decodes.
std::uint64_t decode_plain(const BitString& b);

/// floor(log2 k) for k >= 1.
unsigned plain_length(std::uint64_t k);

/// Elias delta: gamma code of the bit length N of k, then the low N-1 bits.
BitString encode_delta(std::uint64_t k);

/// Codeword length of encode_delta(k) without building it.
unsigned delta_length(std::uint64_t k);

struct DeltaDecoded {
  std::uint64_t value = 0;
  std::size_t consumed = 0;
};

/// Decodes the codeword that starts at bit `offset`. Throws
/// MalformedCodeword on truncation or a length field above 64.
DeltaDecoded decode_delta(const BitString& b, std::size_t offset = 0);

/// L(t) = t + 2 log2(t + 1) + 1, the Elias delta length envelope.
double delta_length_envelope(double t);

/// max{a - 2 log2([a]_+ + 1) - 1, 0}, a lower bound on L^{-1}(a).
double delta_length_inverse_lower(double a);

struct DeltaLengthCalculus {
  double length = 0.0;         ///< L(a)
  double inverse_lower = 0.0;  ///< lower bound on L^{-1}(a)
};

DeltaLengthCalculus delta_length_calculus(double a);

}  // namespace pfrlab

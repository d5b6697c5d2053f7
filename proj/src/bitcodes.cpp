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
#include "pfrlab/bitcodes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "pfrlab/errors.hpp"

namespace pfrlab {
namespace {

void require_positive(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("integer codes are defined for k >= 1");
}

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("not a hex digit");
}

}  // namespace

BitString BitString::from_string(std::string_view bits) {
  BitString out;
  for (char c : bits) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit strings hold only '0' and '1'");
    out.push_back(c == '1');
  }
  return out;
}

BitString BitString::from_hex(std::size_t length, std::string_view hex) {
  if (hex.size() != 2 * ((length + 7) / 8)) {
    throw std::invalid_argument("hex payload does not match the bit length");
  }
  BitString out;
  for (std::size_t i = 0; i < length; ++i) {
    const int byte = hex_digit(hex[2 * (i / 8)]) * 16 + hex_digit(hex[2 * (i / 8) + 1]);
    out.push_back(((byte >> (7 - i % 8)) & 1) != 0);
  }
  return out;
}

void BitString::append_bits(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) bits_.push_back(((value >> i) & 1U) != 0);
}

void BitString::append(const BitString& other) {
  bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

std::string BitString::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (bool b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::string BitString::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t base = 0; base < bits_.size(); base += 8) {
    unsigned byte = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      byte <<= 1;
      if (base + i < bits_.size() && bits_[base + i]) byte |= 1U;
    }
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0xF]);
  }
  return out;
}

unsigned plain_length(std::uint64_t k) {
  require_positive(k);
  return static_cast<unsigned>(std::bit_width(k) - 1);
}

BitString encode_plain(std::uint64_t k) {
  BitString out;
  out.append_bits(k, plain_length(k));
  return out;
}

std::uint64_t decode_plain(const BitString& b) {
  if (b.size() > 63) throw std::overflow_error("plain codeword longer than 63 bits");
  std::uint64_t k = 1;
  for (std::size_t i = 0; i < b.size(); ++i) k = (k << 1) | (b[i] ? 1U : 0U);
  return k;
}

unsigned delta_length(std::uint64_t k) {
  require_positive(k);
  const unsigned n = static_cast<unsigned>(std::bit_width(k));
  const unsigned l = static_cast<unsigned>(std::bit_width(n) - 1);
  return 2 * l + 1 + (n - 1);
}

BitString encode_delta(std::uint64_t k) {
  require_positive(k);
  const unsigned n = static_cast<unsigned>(std::bit_width(k));
  const unsigned l = static_cast<unsigned>(std::bit_width(n) - 1);
  BitString out;
  out.append_bits(0, l);
  out.append_bits(n, l + 1);
  out.append_bits(k, n - 1);
  return out;
}

DeltaDecoded decode_delta(const BitString& b, std::size_t offset) {
  std::size_t pos = offset;
  unsigned zeros = 0;
  while (pos < b.size() && !b[pos]) {
    ++zeros;
    ++pos;
  }
  if (pos == b.size()) throw MalformedCodeword("delta codeword: unterminated length prefix");
  if (zeros > 6) throw MalformedCodeword("delta codeword: length field exceeds 64 bits");
  if (pos + zeros + 1 > b.size()) throw MalformedCodeword("delta codeword: truncated length");
  std::uint64_t n = 0;
  for (unsigned i = 0; i <= zeros; ++i) n = (n << 1) | (b[pos++] ? 1U : 0U);
  if (n > 64) throw MalformedCodeword("delta codeword: length field exceeds 64 bits");
  if (pos + (n - 1) > b.size()) throw MalformedCodeword("delta codeword: truncated payload");
  std::uint64_t k = 1;
  for (std::uint64_t i = 0; i + 1 < n; ++i) k = (k << 1) | (b[pos++] ? 1U : 0U);
  return {k, pos - offset};
}

double delta_length_envelope(double t) { return t + 2.0 * std::log2(t + 1.0) + 1.0; }

double delta_length_inverse_lower(double a) {
  return std::max(a - 2.0 * std::log2(std::max(a, 0.0) + 1.0) - 1.0, 0.0);
}

DeltaLengthCalculus delta_length_calculus(double a) {
  return {delta_length_envelope(a), delta_length_inverse_lower(a)};
}

}  // namespace pfrlab

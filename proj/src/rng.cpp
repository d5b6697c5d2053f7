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
#include "pfrlab/rng.hpp"

#include <sodium.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "pfrlab/errors.hpp"

namespace pfrlab {
namespace {

void ensure_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("libsodium initialisation failed");
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Domain-separated BLAKE2b-256 over (tag, seed, payload).
Seed hash_child(const Seed& seed, std::string_view tag, const std::uint8_t* payload,
                std::size_t payload_len) {
  ensure_sodium();
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, 32);
  const std::uint8_t tag_len = static_cast<std::uint8_t>(tag.size());
  crypto_generichash_update(&st, &tag_len, 1);
  crypto_generichash_update(&st, reinterpret_cast<const unsigned char*>(tag.data()),
                            tag.size());
  crypto_generichash_update(&st, seed.bytes.data(), seed.bytes.size());
  crypto_generichash_update(&st, payload, payload_len);
  Seed out;
  crypto_generichash_final(&st, out.bytes.data(), out.bytes.size());
  return out;
}

}  // namespace

Seed Seed::from_hex(std::string_view hex) {
  if (hex.size() != 64) {
    throw std::invalid_argument("seed must be 64 hex characters, got " +
                                std::to_string(hex.size()));
  }
  Seed s;
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("seed contains a non-hex character");
    s.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return s;
}

std::string Seed::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

Seed derive_subseed(const Seed& seed, std::uint64_t trial, std::string_view role) {
  std::string payload(8, '\0');
  for (int i = 0; i < 8; ++i) payload[i] = static_cast<char>((trial >> (8 * i)) & 0xFF);
  payload.append(role);
  return hash_child(seed, "subseed", reinterpret_cast<const std::uint8_t*>(payload.data()),
                    payload.size());
}

Seed derive_labeled(const Seed& seed, std::string_view label) {
  return hash_child(seed, "label", reinterpret_cast<const std::uint8_t*>(label.data()),
                    label.size());
}

Rng::Rng(const Seed& seed) : key_(seed) { ensure_sodium(); }

void Rng::refill() {
  static const std::array<unsigned char, crypto_stream_chacha20_NONCEBYTES> nonce{};
  std::array<unsigned char, kWords * 8> raw{};
  // The keystream block counter advances by kWords * 8 / 64 per refill.
  crypto_stream_chacha20_xor_ic(raw.data(), raw.data(), raw.size(), nonce.data(),
                                block_counter_, key_.bytes.data());
  block_counter_ += raw.size() / 64;
  for (std::size_t i = 0; i < kWords; ++i) {
    std::uint64_t w = 0;
    for (int b = 7; b >= 0; --b) w = (w << 8) | raw[8 * i + static_cast<std::size_t>(b)];
    buffer_[i] = w;
  }
  pos_ = 0;
}

std::uint64_t Rng::next_u64() {
  if (pos_ == kWords) refill();
  return buffer_[pos_++];
}

double Rng::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::exponential() { return -std::log(uniform_pos()); }

}  // namespace pfrlab

// Copyright 2026 The streamgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <bitset>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "streamgate/common.hpp"

namespace streamgate {

inline constexpr int kKeyBits = 64;
inline constexpr std::array<int, 4> kGeMarkerExponents{4, 8, 16, 32};
// One attribute per bit polarity plus the ge2exp markers.
inline constexpr std::size_t kUniverseSize =
    2 * kKeyBits + kGeMarkerExponents.size();  // 132

/// One attribute of the fixed universe: either "bit i of the key is b", or a
/// marker "key >= 2^m" for m in {4, 8, 16, 32}. Bag-of-bits encoding of
/// integer keys, so that comparison policies become threshold trees.
class Attribute {
 public:
  static Attribute bit(int position, int value) {
    if (position < 0 || position >= kKeyBits || (value != 0 && value != 1))
      throw Error("bit attribute out of range");
    return Attribute(static_cast<std::uint16_t>(position * 2 + value));
  }

  static Attribute ge_marker(int exponent) {
    for (std::size_t i = 0; i < kGeMarkerExponents.size(); ++i)
      if (kGeMarkerExponents[i] == exponent)
        return Attribute(static_cast<std::uint16_t>(2 * kKeyBits + i));
    throw Error("unknown ge2exp marker");
  }

  static Attribute from_id(std::uint16_t id) {
    if (id >= kUniverseSize) throw Error("attribute id outside universe");
    return Attribute(id);
  }

  std::uint16_t id() const { return id_; }
  bool is_bit() const { return id_ < 2 * kKeyBits; }
  bool is_marker() const { return !is_bit(); }
  int bit_position() const { return id_ / 2; }
  int bit_value() const { return id_ % 2; }
  int marker_exponent() const { return kGeMarkerExponents[id_ - 2 * kKeyBits]; }

  std::string label() const {
    if (is_bit())
      return "bit" + std::to_string(bit_position()) + "=" + std::to_string(bit_value());
    return "ge2exp" + std::to_string(marker_exponent());
  }

  friend auto operator<=>(const Attribute&, const Attribute&) = default;

 private:
  explicit Attribute(std::uint16_t id) : id_(id) {}
  std::uint16_t id_;
};

/// Width of the key space the encoder and tree builder operate over. The
/// 64-bit layout is the production one; the 8-bit layout keeps exhaustive
/// sweeps over every (threshold, key) pair tractable.
struct KeyEncoding {
  int bits;
  std::span<const int> markers;

  static const KeyEncoding& bits64() {
    static const KeyEncoding enc{kKeyBits, kGeMarkerExponents};
    return enc;
  }

  static const KeyEncoding& bits8() {
    static constexpr std::array<int, 1> markers8{4};
    static const KeyEncoding enc{8, markers8};
    return enc;
  }

  std::uint64_t max_key() const {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
  }
};

/// The attribute set B_k attached to a ciphertext: exactly one polarity
/// attribute per bit position plus every satisfied ge2exp marker.
class AttributeSet {
 public:
  void insert(Attribute a) { bits_.set(a.id()); }
  bool contains(Attribute a) const { return bits_.test(a.id()); }
  std::size_t size() const { return bits_.count(); }

  std::vector<Attribute> to_vector() const {
    std::vector<Attribute> out;
    out.reserve(size());
    for (std::size_t id = 0; id < kUniverseSize; ++id)
      if (bits_.test(id)) out.push_back(Attribute::from_id(static_cast<std::uint16_t>(id)));
    return out;
  }

  static constexpr std::size_t kByteSize = (kUniverseSize + 7) / 8;

  std::array<std::uint8_t, kByteSize> to_bytes() const {
    std::array<std::uint8_t, kByteSize> out{};
    for (std::size_t id = 0; id < kUniverseSize; ++id)
      if (bits_.test(id)) out[id / 8] |= static_cast<std::uint8_t>(1u << (id % 8));
    return out;
  }

  static AttributeSet from_bytes(std::span<const std::uint8_t> in) {
    if (in.size() != kByteSize) throw SerializationError("attribute set must be 17 bytes");
    AttributeSet s;
    for (std::size_t id = 0; id < kUniverseSize; ++id)
      if (in[id / 8] & (1u << (id % 8))) s.bits_.set(id);
    if ((in[kByteSize - 1] >> (kUniverseSize % 8)) != 0)
      throw SerializationError("attribute set has bits outside the universe");
    return s;
  }

  friend bool operator==(const AttributeSet&, const AttributeSet&) = default;

 private:
  std::bitset<kUniverseSize> bits_;
};

/// Bag-of-bits translation of a key: k = 3 becomes {bit0=1, bit1=1, biti=0
/// for the rest}, with ge2exp markers for every satisfied power of two.
inline AttributeSet encode_attributes(std::uint64_t k,
                                      const KeyEncoding& enc = KeyEncoding::bits64()) {
  if (k > enc.max_key()) throw Error("key wider than the attribute encoding");
  AttributeSet set;
  for (int i = 0; i < enc.bits; ++i)
    set.insert(Attribute::bit(i, static_cast<int>((k >> i) & 1)));
  for (int m : enc.markers)
    if (k >= (std::uint64_t{1} << m)) set.insert(Attribute::ge_marker(m));
  return set;
}

}  // namespace streamgate

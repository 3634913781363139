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

#include "streamgate/attributes.hpp"

#include <catch_amalgamated.hpp>

using namespace streamgate;

TEST_CASE("attribute universe has 132 members with stable ids") {
  CHECK(kUniverseSize == 132);
  for (std::uint16_t id = 0; id < kUniverseSize; ++id) {
    const Attribute a = Attribute::from_id(id);
    CHECK(a.id() == id);
    if (a.is_bit())
      CHECK(Attribute::bit(a.bit_position(), a.bit_value()) == a);
    else
      CHECK(Attribute::ge_marker(a.marker_exponent()) == a);
  }
  CHECK_THROWS_AS(Attribute::from_id(132), Error);
  CHECK_THROWS_AS(Attribute::bit(64, 0), Error);
  CHECK_THROWS_AS(Attribute::ge_marker(5), Error);
}

TEST_CASE("k=3 encodes to low bits set and no markers") {
  const AttributeSet set = encode_attributes(3);
  CHECK(set.size() == 64);
  CHECK(set.contains(Attribute::bit(0, 1)));
  CHECK(set.contains(Attribute::bit(1, 1)));
  for (int i = 2; i < 64; ++i) {
    CHECK(set.contains(Attribute::bit(i, 0)));
    CHECK_FALSE(set.contains(Attribute::bit(i, 1)));
  }
  for (int m : kGeMarkerExponents) CHECK_FALSE(set.contains(Attribute::ge_marker(m)));
}

TEST_CASE("k=0 encodes to all zero polarities") {
  const AttributeSet set = encode_attributes(0);
  CHECK(set.size() == 64);
  for (int i = 0; i < 64; ++i) CHECK(set.contains(Attribute::bit(i, 0)));
}

TEST_CASE("k=2^32 carries every marker") {
  const AttributeSet set = encode_attributes(std::uint64_t{1} << 32);
  CHECK(set.size() == 68);
  CHECK(set.contains(Attribute::bit(32, 1)));
  for (int i = 0; i < 64; ++i)
    if (i != 32) CHECK(set.contains(Attribute::bit(i, 0)));
  for (int m : kGeMarkerExponents) CHECK(set.contains(Attribute::ge_marker(m)));
}

TEST_CASE("narrow 8-bit encoding") {
  const KeyEncoding& enc = KeyEncoding::bits8();
  CHECK(enc.max_key() == 255);
  const AttributeSet small = encode_attributes(3, enc);
  CHECK(small.size() == 8);
  const AttributeSet marked = encode_attributes(20, enc);
  CHECK(marked.size() == 9);
  CHECK(marked.contains(Attribute::ge_marker(4)));
  CHECK_THROWS_AS(encode_attributes(256, enc), Error);
}

TEST_CASE("attribute sets round-trip through bytes") {
  const AttributeSet set = encode_attributes(123456789);
  const auto bytes = set.to_bytes();
  CHECK(bytes.size() == 17);
  CHECK(AttributeSet::from_bytes(bytes) == set);

  auto corrupted = bytes;
  corrupted[16] |= 0xf0;  // bits beyond the universe
  CHECK_THROWS_AS(AttributeSet::from_bytes(corrupted), SerializationError);
  CHECK_THROWS_AS(AttributeSet::from_bytes(std::span<const std::uint8_t>(bytes).first(16)),
                  SerializationError);
}

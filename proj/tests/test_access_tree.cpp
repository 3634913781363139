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

#include "streamgate/access_tree.hpp"

#include <catch_amalgamated.hpp>

#include "streamgate/rng.hpp"

#include "oracles.hpp"

using namespace streamgate;

namespace {

const AccessTree::Node& child(const AccessTree& t, const AccessTree::Node& gate, int i) {
  return t.at(gate.children.at(i));
}

bool is_leaf_attr(const AccessTree& t, const AccessTree::Node& gate, int i, Attribute a) {
  const auto& n = child(t, gate, i);
  return n.is_leaf() && *n.attr == a;
}

}  // namespace

TEST_CASE("ge tree for threshold 11 has the marker OR over the bit chain") {
  const AccessTree t = build_access_tree(11, CompareOp::ge);
  const AccessTree::Node& root = t.at(t.root);

  // OR(ge2exp4, ge2exp8, ge2exp16, ge2exp32, AND(b3, OR(b2, AND(b1, b0))))
  REQUIRE_FALSE(root.is_leaf());
  CHECK(root.threshold == 1);
  REQUIRE(root.children.size() == 5);
  CHECK(is_leaf_attr(t, root, 0, Attribute::ge_marker(4)));
  CHECK(is_leaf_attr(t, root, 1, Attribute::ge_marker(8)));
  CHECK(is_leaf_attr(t, root, 2, Attribute::ge_marker(16)));
  CHECK(is_leaf_attr(t, root, 3, Attribute::ge_marker(32)));

  const AccessTree::Node& and3 = child(t, root, 4);
  REQUIRE_FALSE(and3.is_leaf());
  CHECK(and3.threshold == 2);
  REQUIRE(and3.children.size() == 2);
  CHECK(is_leaf_attr(t, and3, 0, Attribute::bit(3, 1)));

  const AccessTree::Node& or2 = child(t, and3, 1);
  CHECK(or2.threshold == 1);
  REQUIRE(or2.children.size() == 2);
  CHECK(is_leaf_attr(t, or2, 0, Attribute::bit(2, 1)));

  const AccessTree::Node& and1 = child(t, or2, 1);
  CHECK(and1.threshold == 2);
  REQUIRE(and1.children.size() == 2);
  CHECK(is_leaf_attr(t, and1, 0, Attribute::bit(1, 1)));
  CHECK(is_leaf_attr(t, and1, 1, Attribute::bit(0, 1)));
}

TEST_CASE("eq tree is a single 64-leaf AND gate") {
  const std::uint64_t theta = 0xdeadbeefcafef00dULL;
  const AccessTree t = build_access_tree(theta, CompareOp::eq);
  const AccessTree::Node& root = t.at(t.root);
  REQUIRE_FALSE(root.is_leaf());
  CHECK(root.children.size() == 64);
  CHECK(root.threshold == 64);
  CHECK(t.leaf_count() == 64);
  for (std::uint32_t c : root.children) {
    const auto& leaf = t.at(c);
    REQUIRE(leaf.is_leaf());
    CHECK(leaf.attr->bit_value() == static_cast<int>((theta >> leaf.attr->bit_position()) & 1));
  }
}

TEST_CASE("tree acceptance matches integer comparison exhaustively at 8 bits") {
  const KeyEncoding& enc = KeyEncoding::bits8();
  std::vector<AttributeSet> encoded;
  encoded.reserve(256);
  for (std::uint64_t k = 0; k < 256; ++k) encoded.push_back(encode_attributes(k, enc));

  const CompareOp ops[] = {CompareOp::eq, CompareOp::ge, CompareOp::gt, CompareOp::le,
                           CompareOp::lt};
  std::uint64_t cases = 0;
  for (int op_i = 0; op_i < 5; ++op_i) {
    for (std::uint64_t theta = 0; theta < 256; ++theta) {
      // gt 255 and lt 0 are unsatisfiable and rejected by the builder; the
      // oracle must agree that no key matches.
      const bool buildable = !(ops[op_i] == CompareOp::gt && theta == 255) &&
                             !(ops[op_i] == CompareOp::lt && theta == 0);
      if (!buildable) {
        CHECK_THROWS_AS(build_access_tree(theta, ops[op_i], enc), Error);
        for (std::uint64_t k = 0; k < 256; ++k) {
          REQUIRE_FALSE(oracle::compare(k, op_i, theta));
          ++cases;
        }
        continue;
      }
      const AccessTree t = build_access_tree(theta, ops[op_i], enc);
      for (std::uint64_t k = 0; k < 256; ++k) {
        const bool expected = oracle::compare(k, op_i, theta);
        if (t.accepts(encoded[k]) != expected) {
          CAPTURE(op_i, theta, k);
          REQUIRE(t.accepts(encoded[k]) == expected);
        }
        ++cases;
      }
    }
  }
  CHECK(cases == 5 * 256 * 256);
}

TEST_CASE("degenerate thresholds") {
  const KeyEncoding& enc = KeyEncoding::bits8();

  // always-true predicates still have a well-formed tree
  const AccessTree ge0 = build_access_tree(0, CompareOp::ge, enc);
  const AccessTree le_max = build_access_tree(255, CompareOp::le, enc);
  for (std::uint64_t k : {0ULL, 1ULL, 254ULL, 255ULL}) {
    CHECK(ge0.accepts(encode_attributes(k, enc)));
    CHECK(le_max.accepts(encode_attributes(k, enc)));
  }

  CHECK_THROWS_AS(build_access_tree(255, CompareOp::gt, enc), Error);
  CHECK_THROWS_AS(build_access_tree(0, CompareOp::lt, enc), Error);
  CHECK_THROWS_AS(build_access_tree(256, CompareOp::eq, enc), Error);
  CHECK_THROWS_AS(build_access_tree(~std::uint64_t{0}, CompareOp::gt), Error);
  CHECK_THROWS_AS(build_access_tree(0, CompareOp::lt), Error);
}

TEST_CASE("64-bit trees accept spot-checked keys") {
  Rng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const std::uint64_t theta = rng.next();
    const std::uint64_t k = rng.next();
    for (int op_i = 0; op_i < 5; ++op_i) {
      const auto op = static_cast<CompareOp>(op_i);
      if (op == CompareOp::gt && theta == ~std::uint64_t{0}) continue;
      if (op == CompareOp::lt && theta == 0) continue;
      const AccessTree t = build_access_tree(theta, op);
      CHECK(t.accepts(encode_attributes(k)) == oracle::compare(k, op_i, theta));
      CHECK(t.accepts(encode_attributes(theta)) == oracle::compare(theta, op_i, theta));
    }
  }
}

TEST_CASE("validate rejects malformed trees") {
  AccessTree t;
  const auto leaf = t.add_leaf(Attribute::bit(0, 1));
  t.root = t.add_gate(1, {leaf, leaf});  // child used twice
  CHECK_THROWS_AS(t.validate(), Error);

  AccessTree dangling;
  dangling.root = dangling.add_gate(1, {5});
  CHECK_THROWS_AS(dangling.validate(), Error);

  AccessTree empty;
  CHECK_THROWS_AS(empty.validate(), Error);

  AccessTree bad_gate;
  CHECK_THROWS_AS(bad_gate.add_gate(3, std::vector<std::uint32_t>{0, 1}), Error);
}

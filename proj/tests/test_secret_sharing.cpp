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

#include "streamgate/secret_sharing.hpp"

#include <catch_amalgamated.hpp>
#include <optional>

#include "oracles.hpp"

using namespace streamgate;

namespace {

/// Reference recombination: walks the tree, reconstructs each satisfied gate
/// from an arbitrary threshold-sized subset of its satisfied children via
/// Lagrange interpolation at zero. `take_last` switches which subset is used,
/// so the test covers that any satisfying subset reconstructs the secret.
std::optional<std::uint64_t> recombine(const AccessTree& tree,
                                       const std::vector<TransparentGroup::Scalar>& shares,
                                       const AttributeSet& attrs, std::uint64_t p,
                                       std::uint32_t node, bool take_last) {
  const AccessTree::Node& n = tree.at(node);
  if (n.is_leaf())
    return attrs.contains(*n.attr) ? std::optional(shares[node].v) : std::nullopt;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> points;
  for (std::size_t pos = 0; pos < n.children.size(); ++pos) {
    const auto sub = recombine(tree, shares, attrs, p, n.children[pos], take_last);
    if (sub) points.emplace_back(pos + 1, *sub);
  }
  if (points.size() < n.threshold) return std::nullopt;
  if (take_last)
    points.erase(points.begin(), points.end() - n.threshold);
  else
    points.resize(n.threshold);
  return oracle::interpolate_at_zero(points, p);
}

}  // namespace

TEST_CASE("single-leaf tree assigns the secret to the leaf") {
  TransparentGroup grp("shares-1");
  Rng rng = grp.make_rng(0);
  AccessTree tree;
  tree.root = tree.add_leaf(Attribute::bit(5, 1));
  const auto y = grp.random_scalar(rng);
  const auto shares = share_secret(grp, tree, y, rng);
  CHECK(shares[tree.root] == y);
}

TEST_CASE("AND gate shares interpolate back to the secret") {
  TransparentGroup grp("shares-2");
  Rng rng = grp.make_rng(0);
  const std::uint64_t p = grp.order();

  AccessTree tree;
  const auto a = tree.add_leaf(Attribute::bit(0, 1));
  const auto b = tree.add_leaf(Attribute::bit(1, 1));
  tree.root = tree.add_gate(2, {a, b});

  const auto y = grp.random_scalar(rng);
  const auto shares = share_secret(grp, tree, y, rng);
  CHECK(shares[tree.root] == y);

  // Delta_{1,{1,2}}(0) * q(1) + Delta_{2,{1,2}}(0) * q(2) = 2q(1) - q(2)
  const std::uint64_t recombined =
      oracle::sub(oracle::mul(2, shares[a].v, p), shares[b].v, p);
  CHECK(recombined == y.v);
  CHECK(oracle::interpolate_at_zero({{1, shares[a].v}, {2, shares[b].v}}, p) == y.v);
}

TEST_CASE("OR gate children inherit the parent share") {
  TransparentGroup grp("shares-3");
  Rng rng = grp.make_rng(0);
  AccessTree tree;
  const auto a = tree.add_leaf(Attribute::bit(0, 1));
  const auto b = tree.add_leaf(Attribute::bit(0, 0));
  tree.root = tree.add_gate(1, {a, b});
  const auto y = grp.random_scalar(rng);
  const auto shares = share_secret(grp, tree, y, rng);
  CHECK(shares[a] == y);
  CHECK(shares[b] == y);
}

TEST_CASE("every satisfying key reconstructs the secret through an 8-bit ge tree") {
  TransparentGroup grp("shares-4");
  Rng rng = grp.make_rng(0);
  const std::uint64_t p = grp.order();
  const KeyEncoding& enc = KeyEncoding::bits8();

  for (std::uint64_t theta : {1ULL, 11ULL, 77ULL, 200ULL}) {
    const AccessTree tree = build_access_tree(theta, CompareOp::ge, enc);
    const auto y = grp.random_scalar(rng);
    const auto shares = share_secret(grp, tree, y, rng);

    for (std::uint64_t k = 0; k < 256; ++k) {
      const AttributeSet attrs = encode_attributes(k, enc);
      const auto first = recombine(tree, shares, attrs, p, tree.root, false);
      const auto last = recombine(tree, shares, attrs, p, tree.root, true);
      if (k >= theta) {
        REQUIRE(first.has_value());
        CHECK(*first == y.v);
        REQUIRE(last.has_value());
        CHECK(*last == y.v);
      } else {
        CHECK_FALSE(first.has_value());
      }
    }
  }
}

TEST_CASE("eq tree needs every leaf for reconstruction") {
  TransparentGroup grp("shares-5");
  Rng rng = grp.make_rng(0);
  const std::uint64_t p = grp.order();
  const KeyEncoding& enc = KeyEncoding::bits8();
  const std::uint64_t theta = 0b10110100;

  const AccessTree tree = build_access_tree(theta, CompareOp::eq, enc);
  const auto y = grp.random_scalar(rng);
  const auto shares = share_secret(grp, tree, y, rng);

  CHECK(recombine(tree, shares, encode_attributes(theta, enc), p, tree.root, false) == y.v);
  // One flipped bit starves the 8-of-8 gate.
  CHECK_FALSE(recombine(tree, shares, encode_attributes(theta ^ 1, enc), p, tree.root, false)
                  .has_value());
}

TEST_CASE("lagrange coefficients sum polynomial evaluations back to q(0)") {
  TransparentGroup grp("lagrange");
  Rng rng = grp.make_rng(0);
  const std::uint64_t p = grp.order();

  // degree-3 polynomial, reconstruct from its values at 1..4
  std::array<std::uint64_t, 4> coeff;
  for (auto& c : coeff) c = rng.below(p);
  std::vector<std::uint32_t> indices{1, 2, 3, 4};
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < indices.size(); ++w) {
    std::uint64_t value = 0;
    for (std::size_t c = coeff.size(); c-- > 0;)
      value = oracle::add(coeff[c], oracle::mul(value, indices[w], p), p);
    const auto delta = lagrange_at_zero(grp, indices, w);
    acc = oracle::add(acc, oracle::mul(delta.v, value, p), p);
  }
  CHECK(acc == coeff[0]);
}

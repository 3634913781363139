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

#include <cstdint>
#include <span>
#include <vector>

#include "streamgate/access_tree.hpp"
#include "streamgate/group.hpp"

namespace streamgate {

/// Shares `secret` down an access tree. Each gate with threshold d gets a
/// random polynomial q of degree d-1 with q(0) equal to the gate's own share;
/// child c receives q(index(c)) with 1-based indices. Returns q_x(0) for
/// every node, indexed by node id; the root's entry equals `secret`.
template <bilinear_group Grp>
std::vector<typename Grp::Scalar> share_secret(const Grp& grp, const AccessTree& tree,
                                               typename Grp::Scalar secret, Rng& rng) {
  using Scalar = typename Grp::Scalar;
  std::vector<Scalar> shares(tree.nodes.size(), grp.scalar(0));
  // Parents are created after their children, so a reverse walk from the
  // root visits every parent before its children.
  shares[tree.root] = secret;
  std::vector<std::uint32_t> order;
  order.reserve(tree.nodes.size());
  order.push_back(tree.root);
  for (std::size_t at = 0; at < order.size(); ++at) {
    const AccessTree::Node& node = tree.at(order[at]);
    if (node.is_leaf()) continue;
    // q(x) = share + c1*x + ... + c_{d-1}*x^{d-1}
    std::vector<Scalar> coeffs;
    coeffs.reserve(node.threshold);
    coeffs.push_back(shares[order[at]]);
    for (std::uint16_t i = 1; i < node.threshold; ++i)
      coeffs.push_back(grp.random_scalar(rng));
    for (std::size_t child_pos = 0; child_pos < node.children.size(); ++child_pos) {
      const Scalar x = grp.scalar(child_pos + 1);
      Scalar acc = grp.scalar(0);
      for (std::size_t c = coeffs.size(); c-- > 0;)
        acc = grp.s_add(coeffs[c], grp.s_mul(acc, x));
      shares[node.children[child_pos]] = acc;
      order.push_back(node.children[child_pos]);
    }
  }
  return shares;
}

/// Lagrange coefficient at zero for the point `indices[which]` over the
/// 1-based index set `indices`.
template <bilinear_group Grp>
typename Grp::Scalar lagrange_at_zero(const Grp& grp, std::span<const std::uint32_t> indices,
                                      std::size_t which) {
  using Scalar = typename Grp::Scalar;
  const std::uint64_t i = indices[which];
  Scalar num = grp.scalar(1);
  Scalar den = grp.scalar(1);
  for (std::size_t n = 0; n < indices.size(); ++n) {
    if (n == which) continue;
    const std::uint64_t j = indices[n];
    num = grp.s_mul(num, grp.s_neg(grp.scalar(j)));  // (0 - j)
    const Scalar diff = i >= j ? grp.scalar(i - j) : grp.s_neg(grp.scalar(j - i));
    den = grp.s_mul(den, diff);
  }
  return grp.s_mul(num, grp.s_inv(den));
}

}  // namespace streamgate

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

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamgate/attributes.hpp"
#include "streamgate/common.hpp"

namespace streamgate {

enum class CompareOp : std::uint8_t { eq, ge, gt, le, lt };

inline const char* compare_op_name(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "eq";
    case CompareOp::ge: return "ge";
    case CompareOp::gt: return "gt";
    case CompareOp::le: return "le";
    case CompareOp::lt: return "lt";
  }
  throw Error("unknown comparison operator");
}

inline CompareOp compare_op_from_name(std::string_view name) {
  if (name == "eq") return CompareOp::eq;
  if (name == "ge") return CompareOp::ge;
  if (name == "gt") return CompareOp::gt;
  if (name == "le") return CompareOp::le;
  if (name == "lt") return CompareOp::lt;
  throw Error("unknown comparison operator: " + std::string(name));
}

inline bool compare_keys(std::uint64_t k, CompareOp op, std::uint64_t theta) {
  switch (op) {
    case CompareOp::eq: return k == theta;
    case CompareOp::ge: return k >= theta;
    case CompareOp::gt: return k > theta;
    case CompareOp::le: return k <= theta;
    case CompareOp::lt: return k < theta;
  }
  throw Error("unknown comparison operator");
}

/// Threshold-gate tree over the attribute universe. A node is either a leaf
/// carrying an attribute or a gate that is satisfied when at least
/// `threshold` of its ordered children are satisfied (threshold == arity for
/// AND, 1 for OR). Child indices are 1-based, as used by the secret-sharing
/// polynomials.
struct AccessTree {
  struct Node {
    std::optional<Attribute> attr;     // set iff leaf
    std::uint16_t threshold = 0;       // gates only
    std::vector<std::uint32_t> children;

    bool is_leaf() const { return attr.has_value(); }
  };

  std::vector<Node> nodes;
  std::uint32_t root = 0;

  std::uint32_t add_leaf(Attribute a) {
    nodes.push_back(Node{a, 0, {}});
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

  std::uint32_t add_gate(std::uint16_t threshold, std::vector<std::uint32_t> children) {
    if (threshold == 0 || children.empty() || threshold > children.size())
      throw Error("invalid threshold gate");
    nodes.push_back(Node{std::nullopt, threshold, std::move(children)});
    return static_cast<std::uint32_t>(nodes.size() - 1);
  }

  const Node& at(std::uint32_t id) const {
    if (id >= nodes.size()) throw Error("access tree node out of range");
    return nodes[id];
  }

  bool accepts(const AttributeSet& set) const { return satisfied(root, set); }

  std::vector<std::uint32_t> leaf_ids() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t id = 0; id < nodes.size(); ++id)
      if (nodes[id].is_leaf()) out.push_back(id);
    return out;
  }

  std::size_t leaf_count() const { return leaf_ids().size(); }

  /// Structural sanity: every child id in range and used exactly once, and
  /// the root reaches every node. Decoded trees go through this.
  void validate() const {
    if (nodes.empty() || root >= nodes.size()) throw Error("empty or rootless access tree");
    std::vector<int> uses(nodes.size(), 0);
    for (const Node& n : nodes) {
      if (n.is_leaf()) {
        if (!n.children.empty()) throw Error("leaf with children");
        continue;
      }
      if (n.threshold == 0 || n.threshold > n.children.size())
        throw Error("gate threshold out of range");
      for (std::uint32_t c : n.children) {
        if (c >= nodes.size()) throw Error("child id out of range");
        ++uses[c];
      }
    }
    for (std::uint32_t id = 0; id < nodes.size(); ++id) {
      const int expected = id == root ? 0 : 1;
      if (uses[id] != expected) throw Error("access tree is not a tree");
    }
  }

 private:
  bool satisfied(std::uint32_t id, const AttributeSet& set) const {
    const Node& n = at(id);
    if (n.is_leaf()) return set.contains(*n.attr);
    std::size_t hits = 0;
    std::size_t left = n.children.size();
    for (std::uint32_t c : n.children) {
      if (hits >= n.threshold) break;
      if (hits + left < n.threshold) break;
      if (satisfied(c, set)) ++hits;
      --left;
    }
    return hits >= n.threshold;
  }
};

namespace detail {

/// k >= theta over bit positions [0, top], theta != 0, built MSB-first:
/// theta_i = 1 -> AND(bit_i=1, rest), theta_i = 0 -> OR(bit_i=1, rest); the
/// chain terminates in the mandatory leaf at theta's lowest set bit.
inline std::uint32_t ge_bit_chain(AccessTree& tree, std::uint64_t theta, int top) {
  const int lowest = std::countr_zero(theta);
  std::uint32_t node = tree.add_leaf(Attribute::bit(lowest, 1));
  for (int i = lowest + 1; i <= top; ++i) {
    const std::uint32_t leaf = tree.add_leaf(Attribute::bit(i, 1));
    if ((theta >> i) & 1)
      node = tree.add_gate(2, {leaf, node});
    else
      node = tree.add_gate(1, {leaf, node});
  }
  return node;
}

/// k <= theta, the mirror of ge_bit_chain over polarity-0 attributes:
/// theta_i = 0 -> AND(bit_i=0, rest), theta_i = 1 -> OR(bit_i=0, rest).
/// High bits above theta's width demand bit=0, which the same recursion
/// produces; the chain ends at theta's lowest clear bit.
inline std::uint32_t le_bit_chain(AccessTree& tree, std::uint64_t theta, int top) {
  const int lowest = std::countr_zero(~theta);
  std::uint32_t node = tree.add_leaf(Attribute::bit(lowest, 0));
  for (int i = lowest + 1; i <= top; ++i) {
    const std::uint32_t leaf = tree.add_leaf(Attribute::bit(i, 0));
    if ((theta >> i) & 1)
      node = tree.add_gate(1, {leaf, node});
    else
      node = tree.add_gate(2, {leaf, node});
  }
  return node;
}

/// Predicate that every key satisfies: B_k always carries exactly one
/// polarity of bit 0.
inline std::uint32_t tautology(AccessTree& tree) {
  const std::uint32_t zero = tree.add_leaf(Attribute::bit(0, 0));
  const std::uint32_t one = tree.add_leaf(Attribute::bit(0, 1));
  return tree.add_gate(1, {zero, one});
}

}  // namespace detail

/// Builds the access tree for the predicate `k op theta` over the bag-of-bits
/// encoding. For ge, every marker with 2^m > theta joins a top-level OR ahead
/// of the bit chain, which is what makes transforms of large keys cost a
/// single pairing.
inline AccessTree build_access_tree(std::uint64_t theta, CompareOp op,
                                    const KeyEncoding& enc = KeyEncoding::bits64()) {
  if (theta > enc.max_key()) throw Error("threshold wider than the attribute encoding");

  AccessTree tree;
  switch (op) {
    case CompareOp::eq: {
      std::vector<std::uint32_t> leaves;
      leaves.reserve(enc.bits);
      for (int i = enc.bits - 1; i >= 0; --i)
        leaves.push_back(tree.add_leaf(Attribute::bit(i, static_cast<int>((theta >> i) & 1))));
      tree.root = tree.add_gate(static_cast<std::uint16_t>(enc.bits), std::move(leaves));
      break;
    }
    case CompareOp::ge: {
      if (theta == 0) {
        tree.root = detail::tautology(tree);
        break;
      }
      std::vector<int> markers;
      for (int m : enc.markers)
        if ((std::uint64_t{1} << m) > theta) markers.push_back(m);
      const int top = markers.empty() ? enc.bits - 1 : markers.front() - 1;
      if (markers.empty()) {
        tree.root = detail::ge_bit_chain(tree, theta, top);
      } else {
        std::vector<std::uint32_t> children;
        children.reserve(markers.size() + 1);
        for (int m : markers) children.push_back(tree.add_leaf(Attribute::ge_marker(m)));
        children.push_back(detail::ge_bit_chain(tree, theta, top));
        tree.root = tree.add_gate(1, std::move(children));
      }
      break;
    }
    case CompareOp::gt:
      if (theta >= enc.max_key()) throw Error("gt threshold out of range");
      return build_access_tree(theta + 1, CompareOp::ge, enc);
    case CompareOp::le: {
      if (theta == enc.max_key()) {
        tree.root = detail::tautology(tree);
        break;
      }
      tree.root = detail::le_bit_chain(tree, theta, enc.bits - 1);
      break;
    }
    case CompareOp::lt:
      if (theta == 0) throw Error("lt threshold out of range");
      return build_access_tree(theta - 1, CompareOp::le, enc);
  }
  tree.validate();
  return tree;
}

}  // namespace streamgate

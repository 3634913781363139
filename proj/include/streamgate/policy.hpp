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
#include <string>

#include "streamgate/access_tree.hpp"

namespace streamgate {

enum class PolicyKind : std::uint8_t { trigger, window };

/// What a user was granted: either individual values whose key satisfies
/// `k op theta` (trigger), or averages of consecutive non-overlapping windows
/// of size beta starting at key alpha (sliding window).
struct PolicyDescriptor {
  PolicyKind kind = PolicyKind::trigger;
  CompareOp op = CompareOp::eq;  // trigger only
  std::uint64_t theta = 0;       // trigger only
  std::uint64_t alpha = 0;       // window only
  std::uint32_t beta = 0;        // window only

  static PolicyDescriptor trigger(std::uint64_t theta, CompareOp op) {
    PolicyDescriptor d;
    d.kind = PolicyKind::trigger;
    d.theta = theta;
    d.op = op;
    return d;
  }

  static PolicyDescriptor window(std::uint64_t alpha, std::uint32_t beta) {
    if (beta == 0) throw Error("window size must be positive");
    PolicyDescriptor d;
    d.kind = PolicyKind::window;
    d.alpha = alpha;
    d.beta = beta;
    return d;
  }

  bool is_window() const { return kind == PolicyKind::window; }

  /// Key predicate enforced by the access tree: `k op theta` for triggers,
  /// `k >= alpha` for windows.
  bool key_matches(std::uint64_t k) const {
    return is_window() ? k >= alpha : compare_keys(k, op, theta);
  }

  AccessTree to_tree(const KeyEncoding& enc = KeyEncoding::bits64()) const {
    return is_window() ? build_access_tree(alpha, CompareOp::ge, enc)
                       : build_access_tree(theta, op, enc);
  }

  std::string to_string() const {
    if (is_window())
      return "window:" + std::to_string(alpha) + "," + std::to_string(beta);
    return std::string(compare_op_name(op)) + ":" + std::to_string(theta);
  }

  /// Parses the CLI form `eq:42`, `ge:9`, ..., `window:9,5`.
  static PolicyDescriptor parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error("policy must look like op:args");
    const std::string_view head = text.substr(0, colon);
    const std::string_view args = text.substr(colon + 1);
    if (head == "window") {
      const auto comma = args.find(',');
      if (comma == std::string_view::npos) throw Error("window policy needs alpha,beta");
      return window(std::stoull(std::string(args.substr(0, comma))),
                    static_cast<std::uint32_t>(std::stoul(std::string(args.substr(comma + 1)))));
    }
    return trigger(std::stoull(std::string(args)), compare_op_from_name(head));
  }

  friend bool operator==(const PolicyDescriptor&, const PolicyDescriptor&) = default;
};

}  // namespace streamgate

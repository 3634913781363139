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

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "streamgate/access_tree.hpp"
#include "streamgate/attributes.hpp"
#include "streamgate/group.hpp"
#include "streamgate/modmath.hpp"
#include "streamgate/policy.hpp"
#include "streamgate/secret_sharing.hpp"

namespace streamgate {

// Key-policy ABE with outsourced decryption, extended with blinded
// additive-homomorphic window bodies. Messages live in the target group with
// base gt = e(g, g); a value v is carried as gt^v and recovered through a
// precomputed discrete-log table over the bounded value domain.

template <bilinear_group Grp>
struct MasterKey {
  typename Grp::Scalar y;
  std::array<typename Grp::Scalar, kUniverseSize> t;
};

template <bilinear_group Grp>
struct PublicKey {
  typename Grp::GT big_y;                              // e(g,g)^y
  std::array<typename Grp::G, kUniverseSize> t_pub;    // g^{t_i}
};

/// Per-stream, per-window-size blinding material R[0..beta).
template <bilinear_group Grp>
struct WindowSecrets {
  std::uint32_t beta = 0;
  std::vector<typename Grp::Scalar> r;
};

template <bilinear_group Grp>
using WindowSecretsMap = std::map<std::uint32_t, WindowSecrets<Grp>>;

/// Cloud-side half of a user's key: the access tree plus one group element
/// per leaf, D_x = g^{q_x(0) / (z_u * t_i)}.
template <bilinear_group Grp>
struct TransformKey {
  PolicyDescriptor policy;
  AccessTree tree;
  std::vector<std::pair<std::uint32_t, typename Grp::G>> leaf_values;  // node id -> D_x

  const typename Grp::G& leaf_value(std::uint32_t node_id) const {
    for (const auto& [id, v] : leaf_values)
      if (id == node_id) return v;
    throw Error("transform key is missing a leaf value");
  }
};

/// User-side half: z_u always, plus the unblinding scalar sigma(alpha, beta)
/// for sliding-window policies.
template <bilinear_group Grp>
struct UserKey {
  typename Grp::Scalar z;
  std::optional<typename Grp::Scalar> sigma;
  std::uint64_t alpha = 0;
  std::uint32_t beta = 0;

  bool is_window() const { return sigma.has_value(); }
};

/// One encrypted tuple as stored at the cloud: public attributes B_k, the
/// per-attribute components E'_i = g^{t_i * s_k}, the trigger body, and one
/// blinded body per supported window size. All bodies share the same s_k, so
/// each extra window size costs exactly one GT element.
template <bilinear_group Grp>
struct CiphertextRecord {
  std::uint64_t k = 0;
  AttributeSet attrs;
  std::vector<std::pair<Attribute, typename Grp::G>> eprime;  // ascending attribute id
  typename Grp::GT trigger_body;
  std::vector<std::pair<std::uint32_t, typename Grp::GT>> window_bodies;  // ascending beta

  const typename Grp::G* eprime_for(Attribute a) const {
    auto it = std::lower_bound(eprime.begin(), eprime.end(), a,
                               [](const auto& p, Attribute x) { return p.first < x; });
    if (it == eprime.end() || it->first != a) return nullptr;
    return &it->second;
  }

  const typename Grp::GT& window_body(std::uint32_t beta) const {
    for (const auto& [b, body] : window_bodies)
      if (b == beta) return body;
    throw Error("ciphertext has no body for window size " + std::to_string(beta));
  }
};

template <bilinear_group Grp>
struct TransformedCiphertext {
  std::uint64_t k = 0;
  typename Grp::GT body;   // the selected E(k, v)
  typename Grp::GT proof;  // e(g,g)^{y * s_k / z_u}
};

/// Result of the cloud-side Transform: the converted ciphertext when the
/// access tree accepted B_k, nothing otherwise, plus the number of pairings
/// spent either way.
template <bilinear_group Grp>
struct TransformOutcome {
  std::optional<TransformedCiphertext<Grp>> ct;
  std::uint32_t pairings = 0;

  bool accepted() const { return ct.has_value(); }
};

/// Precomputed map gt^m -> m for m in [0, max]. Keys are the canonical
/// element encoding, so the table is backend-agnostic.
template <bilinear_group Grp>
class DlogTable {
 public:
  static constexpr std::uint64_t kDefaultCap = 10'000'000;

  DlogTable() = default;

  DlogTable(const Grp& grp, std::uint64_t max, std::uint64_t cap = kDefaultCap) : max_(max) {
    if (max > cap) throw Error("discrete-log table larger than the configured cap");
    table_.reserve(max + 1);
    typename Grp::GT cur = grp.gt_pow(grp.scalar(0));
    const typename Grp::GT gen = grp.gt_gen();
    for (std::uint64_t m = 0;; ++m) {
      table_.emplace(key(grp, cur), m);
      if (m == max) break;
      cur = grp.mul(cur, gen);
    }
  }

  std::optional<std::uint64_t> lookup(const Grp& grp, const typename Grp::GT& e) const {
    auto it = table_.find(key(grp, e));
    if (it == table_.end()) return std::nullopt;
    return it->second;
  }

  std::uint64_t max_value() const { return max_; }
  std::size_t size() const { return table_.size(); }

 private:
  static std::string key(const Grp& grp, const typename Grp::GT& e) {
    Bytes b;
    grp.append(b, e);
    return std::string(b.begin(), b.end());
  }

  std::uint64_t max_ = 0;
  std::unordered_map<std::string, std::uint64_t> table_;
};

template <bilinear_group Grp>
DlogTable<Grp> build_dlog_table(const Grp& grp, std::uint64_t max,
                                std::uint64_t cap = DlogTable<Grp>::kDefaultCap) {
  return DlogTable<Grp>(grp, max, cap);
}

// -- key generation ----------------------------------------------------------

template <bilinear_group Grp>
std::pair<MasterKey<Grp>, PublicKey<Grp>> master_keygen(const Grp& grp, Rng& rng) {
  MasterKey<Grp> mk;
  PublicKey<Grp> pk;
  mk.y = grp.random_nonzero(rng);
  pk.big_y = grp.gt_pow(mk.y);
  for (std::size_t i = 0; i < kUniverseSize; ++i) {
    mk.t[i] = grp.random_nonzero(rng);
    pk.t_pub[i] = grp.g_pow(mk.t[i]);
  }
  return {std::move(mk), std::move(pk)};
}

template <bilinear_group Grp>
WindowSecrets<Grp> make_window_secrets(const Grp& grp, std::uint32_t beta, Rng& rng) {
  if (beta == 0) throw Error("window size must be positive");
  WindowSecrets<Grp> ws;
  ws.beta = beta;
  ws.r.reserve(beta);
  for (std::uint32_t j = 0; j < beta; ++j) ws.r.push_back(grp.random_nonzero(rng));
  return ws;
}

/// Blind added to the window body of tuple k: 2^ceil(k/beta) * R[k mod beta].
template <bilinear_group Grp>
typename Grp::Scalar window_blind(const Grp& grp, const WindowSecrets<Grp>& ws,
                                  std::uint64_t k) {
  const typename Grp::Scalar weight = grp.s_pow2(ceil_div(k, ws.beta));
  return grp.s_mul(weight, ws.r[k % ws.beta]);
}

/// sigma(alpha, beta) = sum_{j=0}^{beta-1} 2^ceil((alpha+j)/beta) * R[(alpha+j) mod beta].
/// The blinds of the window starting at alpha + i*beta sum to 2^i * sigma.
template <bilinear_group Grp>
typename Grp::Scalar sigma_value(const Grp& grp, const WindowSecrets<Grp>& ws,
                                 std::uint64_t alpha) {
  typename Grp::Scalar acc = grp.scalar(0);
  for (std::uint32_t j = 0; j < ws.beta; ++j)
    acc = grp.s_add(acc, window_blind(grp, ws, alpha + j));
  return acc;
}

template <bilinear_group Grp>
std::pair<TransformKey<Grp>, UserKey<Grp>> user_keygen(
    const Grp& grp, const MasterKey<Grp>& mk, const PolicyDescriptor& policy,
    const WindowSecretsMap<Grp>& secrets, Rng& rng,
    const KeyEncoding& enc = KeyEncoding::bits64()) {
  TransformKey<Grp> tk;
  UserKey<Grp> uk;
  tk.policy = policy;
  tk.tree = policy.to_tree(enc);
  uk.z = grp.random_nonzero(rng);

  if (policy.is_window()) {
    auto it = secrets.find(policy.beta);
    if (it == secrets.end())
      throw Error("no window secrets generated for window size " +
                  std::to_string(policy.beta));
    uk.sigma = sigma_value(grp, it->second, policy.alpha);
    uk.alpha = policy.alpha;
    uk.beta = policy.beta;
  }

  const auto shares = share_secret(grp, tk.tree, mk.y, rng);
  const typename Grp::Scalar z_inv = grp.s_inv(uk.z);
  for (std::uint32_t leaf : tk.tree.leaf_ids()) {
    const Attribute attr = *tk.tree.at(leaf).attr;
    // D_x = g^{q_x(0) / (z_u * t_i)}
    const auto exponent =
        grp.s_mul(shares[leaf], grp.s_mul(z_inv, grp.s_inv(mk.t[attr.id()])));
    tk.leaf_values.emplace_back(leaf, grp.g_pow(exponent));
  }
  return {std::move(tk), std::move(uk)};
}

// -- encryption ---------------------------------------------------------------

template <bilinear_group Grp>
CiphertextRecord<Grp> encrypt(const Grp& grp, const PublicKey<Grp>& pk,
                              const WindowSecretsMap<Grp>& secrets, std::uint64_t k,
                              std::uint64_t v, std::uint64_t vmax, Rng& rng,
                              const KeyEncoding& enc = KeyEncoding::bits64()) {
  if (v > vmax) throw Error("value exceeds the configured maximum");

  CiphertextRecord<Grp> rec;
  rec.k = k;
  rec.attrs = encode_attributes(k, enc);

  const typename Grp::Scalar s_k = grp.random_nonzero(rng);
  for (Attribute a : rec.attrs.to_vector())
    rec.eprime.emplace_back(a, grp.pow(pk.t_pub[a.id()], s_k));

  // Every body reuses s_k; e(g,g)^{y*s_k} comes from the public Y.
  const typename Grp::GT mask = grp.pow(pk.big_y, s_k);
  const typename Grp::Scalar value = grp.scalar(v);
  rec.trigger_body = grp.mul(grp.gt_pow(value), mask);
  for (const auto& [beta, ws] : secrets) {
    const typename Grp::Scalar blinded = grp.s_add(value, window_blind(grp, ws, k));
    rec.window_bodies.emplace_back(beta, grp.mul(grp.gt_pow(blinded), mask));
  }
  return rec;
}

// -- cloud-side transform ------------------------------------------------------

namespace detail {

/// Recursive Transform. Gates are evaluated left to right and stop as soon as
/// the threshold is met or can no longer be met; when more children succeed
/// than needed, the lowest child indices win, so outputs and pairing counts
/// are deterministic.
template <bilinear_group Grp>
std::optional<typename Grp::GT> transform_node(const Grp& grp, const TransformKey<Grp>& tk,
                                               const CiphertextRecord<Grp>& rec,
                                               std::uint32_t node_id, std::uint32_t& pairings) {
  const AccessTree::Node& node = tk.tree.at(node_id);
  if (node.is_leaf()) {
    const typename Grp::G* e_i = rec.eprime_for(*node.attr);
    if (e_i == nullptr) return std::nullopt;
    ++pairings;
    // e(D_x, E'_i) = e(g,g)^{s_k * q_x(0) / z_u}
    return grp.pair(tk.leaf_value(node_id), *e_i);
  }

  std::vector<std::pair<std::uint32_t, typename Grp::GT>> satisfied;
  std::size_t left = node.children.size();
  for (std::size_t pos = 0; pos < node.children.size(); ++pos, --left) {
    if (satisfied.size() >= node.threshold) break;
    if (satisfied.size() + left < node.threshold) break;
    auto f = transform_node(grp, tk, rec, node.children[pos], pairings);
    if (f) satisfied.emplace_back(static_cast<std::uint32_t>(pos + 1), *f);
  }
  if (satisfied.size() < node.threshold) return std::nullopt;

  if (node.threshold == 1) return satisfied.front().second;

  std::vector<std::uint32_t> indices;
  indices.reserve(satisfied.size());
  for (const auto& [idx, f] : satisfied) indices.push_back(idx);
  typename Grp::GT acc = grp.gt_pow(grp.scalar(0));
  for (std::size_t w = 0; w < satisfied.size(); ++w)
    acc = grp.mul(acc, grp.pow(satisfied[w].second, lagrange_at_zero(grp, indices, w)));
  return acc;
}

}  // namespace detail

template <bilinear_group Grp>
TransformOutcome<Grp> transform(const Grp& grp, const TransformKey<Grp>& tk,
                                const CiphertextRecord<Grp>& rec) {
  TransformOutcome<Grp> out;
  auto root = detail::transform_node(grp, tk, rec, tk.tree.root, out.pairings);
  if (!root) return out;
  TransformedCiphertext<Grp> ct;
  ct.k = rec.k;
  ct.proof = *root;
  ct.body = tk.policy.is_window() ? rec.window_body(tk.policy.beta) : rec.trigger_body;
  out.ct = std::move(ct);
  return out;
}

// -- window aggregation ----------------------------------------------------------

/// Homomorphic sum of one complete window: component-wise product of the
/// bodies and of the proofs. Inputs must be the beta consecutive keys of the
/// window starting at alpha + i*beta.
template <bilinear_group Grp>
std::pair<typename Grp::GT, typename Grp::GT> compute_sum(
    const Grp& grp, std::span<const TransformedCiphertext<Grp>> window, std::uint64_t alpha,
    std::uint32_t beta) {
  if (beta == 0 || window.size() != beta)
    throw Error("window must contain exactly beta transformed ciphertexts");
  const std::uint64_t start = window.front().k;
  if (start < alpha || (start - alpha) % beta != 0)
    throw Error("window start is not aligned to alpha + i*beta");
  typename Grp::GT e1 = grp.gt_pow(grp.scalar(0));
  typename Grp::GT e2 = e1;
  for (std::uint32_t j = 0; j < beta; ++j) {
    if (window[j].k != start + j) throw Error("window keys are not consecutive");
    e1 = grp.mul(e1, window[j].body);
    e2 = grp.mul(e2, window[j].proof);
  }
  return {e1, e2};
}

// -- user-side decryption ---------------------------------------------------------

struct WindowSum {
  std::uint64_t sum = 0;
  std::uint32_t beta = 1;

  double average() const { return static_cast<double>(sum) / beta; }
};

/// Recovers v from a transformed trigger ciphertext:
/// gt^v = body / proof^{z_u}. A table miss means the key does not match.
template <bilinear_group Grp>
std::optional<std::uint64_t> decrypt_trigger(const Grp& grp, const UserKey<Grp>& uk,
                                             const TransformedCiphertext<Grp>& ct,
                                             const DlogTable<Grp>& table) {
  if (uk.is_window()) throw Error("window key used for trigger decryption");
  const typename Grp::GT plain = grp.mul(ct.body, grp.inv(grp.pow(ct.proof, uk.z)));
  return table.lookup(grp, plain);
}

/// Recovers the exact (sum, beta) pair of window i from (E1, E2):
/// gt^sum = E1 / E2^{z_u} / gt^{2^i * sigma}. A table miss signals wrong key
/// material or a window the user is not authorized for.
template <bilinear_group Grp>
std::optional<WindowSum> decrypt_window(const Grp& grp, const UserKey<Grp>& uk,
                                        std::uint64_t index, const typename Grp::GT& e1,
                                        const typename Grp::GT& e2,
                                        const DlogTable<Grp>& table) {
  if (!uk.is_window()) throw Error("trigger key used for window decryption");
  const typename Grp::GT w = grp.mul(e1, grp.inv(grp.pow(e2, uk.z)));
  const typename Grp::Scalar unblind = grp.s_mul(grp.s_pow2(index), *uk.sigma);
  const typename Grp::GT plain = grp.mul(w, grp.inv(grp.gt_pow(unblind)));
  auto sum = table.lookup(grp, plain);
  if (!sum) return std::nullopt;
  return WindowSum{*sum, uk.beta};
}

}  // namespace streamgate

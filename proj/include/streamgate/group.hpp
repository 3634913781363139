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

#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "streamgate/common.hpp"
#include "streamgate/modmath.hpp"
#include "streamgate/rng.hpp"

namespace streamgate {

enum class BackendKind { transparent, external };

inline BackendKind backend_from_name(std::string_view name) {
  if (name == "transparent") return BackendKind::transparent;
  if (name == "external") return BackendKind::external;
  throw ConfigError("unknown backend id: " + std::string(name));
}

inline const char* backend_name(BackendKind k) {
  return k == BackendKind::transparent ? "transparent" : "external";
}

/// Contract a pairing backend has to satisfy. The protocol layers are written
/// against this concept only, so a production pairing implementation can be
/// dropped in as a second model without touching them.
template <class T>
concept bilinear_group = requires(const T& ctx, typename T::Scalar s, typename T::G a,
                                  typename T::GT t, Rng& rng, Bytes& out,
                                  std::span<const std::uint8_t> in, std::uint64_t n) {
  { ctx.order() } -> std::convertible_to<std::uint64_t>;
  { ctx.scalar(n) } -> std::same_as<typename T::Scalar>;
  { ctx.s_add(s, s) } -> std::same_as<typename T::Scalar>;
  { ctx.s_sub(s, s) } -> std::same_as<typename T::Scalar>;
  { ctx.s_mul(s, s) } -> std::same_as<typename T::Scalar>;
  { ctx.s_inv(s) } -> std::same_as<typename T::Scalar>;
  { ctx.random_scalar(rng) } -> std::same_as<typename T::Scalar>;
  { ctx.g() } -> std::same_as<typename T::G>;
  { ctx.g_pow(s) } -> std::same_as<typename T::G>;
  { ctx.mul(a, a) } -> std::same_as<typename T::G>;
  { ctx.inv(a) } -> std::same_as<typename T::G>;
  { ctx.pow(a, s) } -> std::same_as<typename T::G>;
  { ctx.gt_gen() } -> std::same_as<typename T::GT>;
  { ctx.gt_pow(s) } -> std::same_as<typename T::GT>;
  { ctx.mul(t, t) } -> std::same_as<typename T::GT>;
  { ctx.inv(t) } -> std::same_as<typename T::GT>;
  { ctx.pow(t, s) } -> std::same_as<typename T::GT>;
  { ctx.pair(a, a) } -> std::same_as<typename T::GT>;
  { ctx.scalar_size() } -> std::convertible_to<std::size_t>;
  { ctx.g_size() } -> std::convertible_to<std::size_t>;
  { ctx.gt_size() } -> std::convertible_to<std::size_t>;
  { ctx.append(out, s) };
  { ctx.append(out, a) };
  { ctx.append(out, t) };
  { ctx.read_scalar(in) } -> std::same_as<typename T::Scalar>;
  { ctx.read_g(in) } -> std::same_as<typename T::G>;
  { ctx.read_gt(in) } -> std::same_as<typename T::GT>;
};

/// Test-oriented backend where a group element *is* its discrete logarithm
/// relative to the generator, so the pairing is multiplication of exponents
/// mod p. Every protocol equation can then be checked against plain modular
/// arithmetic. Not a secure group; correctness oracle only.
class TransparentGroup {
 public:
  // Largest 64-bit prime.
  static constexpr std::uint64_t kDefaultOrder = 18446744073709551557ULL;

  struct Scalar {
    std::uint64_t v = 0;
    friend bool operator==(const Scalar&, const Scalar&) = default;
  };

  struct G {
    std::uint64_t e = 0;
    std::uint32_t ctx = 0;
    friend bool operator==(const G&, const G&) = default;
  };

  struct GT {
    std::uint64_t e = 0;
    std::uint32_t ctx = 0;
    friend bool operator==(const GT&, const GT&) = default;
  };

  explicit TransparentGroup(std::string_view seed, std::uint64_t order = kDefaultOrder)
      : order_(order), seed_(seed) {
    if (seed.empty()) throw ConfigError("transparent backend requires a non-empty seed");
    if (!is_prime_u64(order) || order < (1ULL << 63))
      throw ConfigError("group order must be a prime of at least 63 bits");
    std::uint64_t h = fnv1a64(seed_) ^ order_;
    id_ = static_cast<std::uint32_t>(splitmix64(h) | 1);
  }

  std::uint64_t order() const { return order_; }
  std::uint32_t context_id() const { return id_; }
  const std::string& seed() const { return seed_; }

  /// Deterministic RNG stream derived from the context seed; distinct
  /// `stream` values give independent streams.
  Rng make_rng(std::uint64_t stream) const {
    std::uint64_t h = fnv1a64(seed_) + 0x632be59bd9b4e019ULL * (stream + 1);
    return Rng(splitmix64(h));
  }

  // -- scalar ring ----------------------------------------------------------

  Scalar scalar(std::uint64_t v) const { return {v % order_}; }
  Scalar s_add(Scalar a, Scalar b) const { return {add_mod(a.v, b.v, order_)}; }
  Scalar s_sub(Scalar a, Scalar b) const { return {sub_mod(a.v, b.v, order_)}; }
  Scalar s_mul(Scalar a, Scalar b) const { return {mul_mod(a.v, b.v, order_)}; }
  Scalar s_neg(Scalar a) const { return {a.v == 0 ? 0 : order_ - a.v}; }
  Scalar s_inv(Scalar a) const { return {inv_mod(a.v, order_)}; }
  /// 2^e mod p; exponents this large show up in the window blinds.
  Scalar s_pow2(std::uint64_t e) const { return {pow_mod(2, e, order_)}; }

  Scalar random_scalar(Rng& rng) const { return {rng.below(order_)}; }
  Scalar random_nonzero(Rng& rng) const { return {1 + rng.below(order_ - 1)}; }

  // -- source group G -------------------------------------------------------

  G g() const { return {1, id_}; }
  G g_pow(Scalar s) const { return {s.v, id_}; }
  G mul(G a, G b) const { return {add_mod(own(a).e, own(b).e, order_), id_}; }
  G inv(G a) const { return {own(a).e == 0 ? 0 : order_ - a.e, id_}; }
  G pow(G a, Scalar s) const { return {mul_mod(own(a).e, s.v, order_), id_}; }

  // -- target group GT ------------------------------------------------------

  GT gt_gen() const { return {1, id_}; }
  GT gt_pow(Scalar s) const { return {s.v, id_}; }
  GT mul(GT a, GT b) const { return {add_mod(own(a).e, own(b).e, order_), id_}; }
  GT inv(GT a) const { return {own(a).e == 0 ? 0 : order_ - a.e, id_}; }
  GT pow(GT a, Scalar s) const { return {mul_mod(own(a).e, s.v, order_), id_}; }

  /// e(g^x, g^y) = gt^(x*y).
  GT pair(G a, G b) const { return {mul_mod(own(a).e, own(b).e, order_), id_}; }

  // -- canonical serialization (fixed-width big-endian) ----------------------

  std::size_t scalar_size() const { return 8; }
  std::size_t g_size() const { return 8; }
  std::size_t gt_size() const { return 8; }

  void append(Bytes& out, Scalar s) const { put_u64(out, s.v); }
  void append(Bytes& out, G a) const { put_u64(out, own(a).e); }
  void append(Bytes& out, GT a) const { put_u64(out, own(a).e); }

  Scalar read_scalar(std::span<const std::uint8_t> in) const { return {take_u64(in)}; }
  G read_g(std::span<const std::uint8_t> in) const { return {take_u64(in), id_}; }
  GT read_gt(std::span<const std::uint8_t> in) const { return {take_u64(in), id_}; }

  /// Transparent-backend escape hatch used by tests to check protocol
  /// equations against exponent arithmetic.
  std::uint64_t exponent(G a) const { return own(a).e; }
  std::uint64_t exponent(GT a) const { return own(a).e; }

 private:
  template <class E>
  const E& own(const E& e) const {
    if (e.ctx != id_) throw Error("group element from a different context");
    return e;
  }

  static void put_u64(Bytes& out, std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::uint64_t take_u64(std::span<const std::uint8_t> in) const {
    if (in.size() != 8) throw SerializationError("element must be 8 bytes");
    std::uint64_t v = 0;
    for (std::uint8_t b : in) v = (v << 8) | b;
    if (v >= order_) throw SerializationError("element exponent out of range");
    return v;
  }

  std::uint64_t order_;
  std::string seed_;
  std::uint32_t id_;
};

static_assert(bilinear_group<TransparentGroup>);

/// Runtime backend selection for the CLI and role processes. Only the
/// transparent backend is compiled into this build; the external slot is the
/// hook a production pairing library would register under.
inline TransparentGroup setup(BackendKind kind, std::string_view seed) {
  switch (kind) {
    case BackendKind::transparent:
      return TransparentGroup(seed);
    case BackendKind::external:
      throw ConfigError("backend unavailable: no external pairing backend compiled in");
  }
  throw ConfigError("unknown backend id");
}

}  // namespace streamgate

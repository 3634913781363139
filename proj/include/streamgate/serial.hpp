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
#include <string>
#include <string_view>
#include <vector>

#include "streamgate/abe.hpp"
#include "streamgate/common.hpp"
#include "streamgate/group.hpp"

namespace streamgate {

// Canonical binary layout shared by key material, ciphertexts and wire
// payloads: a type byte, a version byte, then big-endian fields. Group
// elements are fixed width (the context knows the width), variable-length
// sections carry a u32 length prefix. Equal values encode to equal bytes.

inline constexpr std::uint8_t kSerialVersion = 0x01;

enum SerialTag : std::uint8_t {
  kTagPublicKey = 0x01,
  kTagMasterKey = 0x02,
  kTagWindowSecrets = 0x03,
  kTagTransformKey = 0x04,
  kTagUserKey = 0x05,
  kTagCiphertextRecord = 0x06,
  kTagTransformedCiphertext = 0x07,
  kTagOwnerBundle = 0x08,
  kTagUserKeyMaterial = 0x09,
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }

  void u16(std::uint16_t v) {
    buf_.push_back(static_cast<std::uint8_t>(v >> 8));
    buf_.push_back(static_cast<std::uint8_t>(v));
  }

  void u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  void raw(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }

  void lp_bytes(std::span<const std::uint8_t> bytes) {
    u32(static_cast<std::uint32_t>(bytes.size()));
    raw(bytes);
  }

  void lp_string(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  template <bilinear_group Grp, class Elem>
  void elem(const Grp& grp, const Elem& e) {
    grp.append(buf_, e);
  }

  Bytes take() { return std::move(buf_); }
  std::size_t size() const { return buf_.size(); }

 private:
  Bytes buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() { return one(); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(one() << 8 | one()); }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | one();
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | one();
    return v;
  }

  std::span<const std::uint8_t> raw(std::size_t n) {
    if (remaining() < n) throw SerializationError("truncated input");
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const std::uint8_t> lp_bytes() {
    const std::uint32_t n = u32();
    if (remaining() < n) throw SerializationError("length prefix exceeds input");
    return raw(n);
  }

  std::string lp_string() {
    auto b = lp_bytes();
    return std::string(b.begin(), b.end());
  }

  template <bilinear_group Grp>
  typename Grp::Scalar scalar(const Grp& grp) {
    return grp.read_scalar(raw(grp.scalar_size()));
  }

  template <bilinear_group Grp>
  typename Grp::G g_elem(const Grp& grp) {
    return grp.read_g(raw(grp.g_size()));
  }

  template <bilinear_group Grp>
  typename Grp::GT gt_elem(const Grp& grp) {
    return grp.read_gt(raw(grp.gt_size()));
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  bool done() const { return remaining() == 0; }

  void expect_done() const {
    if (!done()) throw SerializationError("trailing bytes after value");
  }

 private:
  std::uint8_t one() {
    if (pos_ >= data_.size()) throw SerializationError("truncated input");
    return data_[pos_++];
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

inline void expect_header(ByteReader& r, std::uint8_t tag) {
  const std::uint8_t got = r.u8();
  if (got != tag)
    throw SerializationError("unexpected type tag " + std::to_string(got) + ", wanted " +
                             std::to_string(tag));
  const std::uint8_t version = r.u8();
  if (version != kSerialVersion)
    throw SerializationError("unsupported version " + std::to_string(version));
}

// -- base64 (RFC 4648, with padding) ------------------------------------------

inline std::string base64_encode(std::span<const std::uint8_t> in) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= in.size(); i += 3) {
    const std::uint32_t n = in[i] << 16 | in[i + 1] << 8 | in[i + 2];
    out.push_back(kAlphabet[n >> 18]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back(kAlphabet[n & 63]);
  }
  if (i + 1 == in.size()) {
    const std::uint32_t n = in[i] << 16;
    out.push_back(kAlphabet[n >> 18]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out += "==";
  } else if (i + 2 == in.size()) {
    const std::uint32_t n = in[i] << 16 | in[i + 1] << 8;
    out.push_back(kAlphabet[n >> 18]);
    out.push_back(kAlphabet[(n >> 12) & 63]);
    out.push_back(kAlphabet[(n >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

inline Bytes base64_decode(std::string_view in) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (in.size() % 4 != 0) throw SerializationError("base64 length not a multiple of 4");
  Bytes out;
  out.reserve(in.size() / 4 * 3);
  for (std::size_t i = 0; i < in.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int j = 0; j < 4; ++j) {
      const char c = in[i + j];
      if (c == '=') {
        if (i + 4 != in.size() || j < 2) throw SerializationError("stray base64 padding");
        ++pad;
        vals[j] = 0;
        continue;
      }
      if (pad != 0) throw SerializationError("data after base64 padding");
      vals[j] = value_of(c);
      if (vals[j] < 0) throw SerializationError("invalid base64 character");
    }
    const std::uint32_t n = vals[0] << 18 | vals[1] << 12 | vals[2] << 6 | vals[3];
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(n >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(n));
  }
  return out;
}

// -- policy descriptor & access tree (embedded, untagged) ---------------------

inline void write_policy_descriptor(ByteWriter& w, const PolicyDescriptor& d) {
  w.u8(static_cast<std::uint8_t>(d.kind));
  if (d.is_window()) {
    w.u64(d.alpha);
    w.u32(d.beta);
  } else {
    w.u64(d.theta);
    w.u8(static_cast<std::uint8_t>(d.op));
  }
}

inline PolicyDescriptor read_policy_descriptor(ByteReader& r) {
  const std::uint8_t kind = r.u8();
  if (kind == static_cast<std::uint8_t>(PolicyKind::window)) {
    const std::uint64_t alpha = r.u64();
    const std::uint32_t beta = r.u32();
    return PolicyDescriptor::window(alpha, beta);
  }
  if (kind == static_cast<std::uint8_t>(PolicyKind::trigger)) {
    const std::uint64_t theta = r.u64();
    const std::uint8_t op = r.u8();
    if (op > static_cast<std::uint8_t>(CompareOp::lt))
      throw SerializationError("unknown comparison operator");
    return PolicyDescriptor::trigger(theta, static_cast<CompareOp>(op));
  }
  throw SerializationError("unknown policy kind");
}

inline void write_access_tree(ByteWriter& w, const AccessTree& tree) {
  w.u32(static_cast<std::uint32_t>(tree.nodes.size()));
  for (const AccessTree::Node& n : tree.nodes) {
    if (n.is_leaf()) {
      w.u8(0);
      w.u16(n.attr->id());
    } else {
      w.u8(1);
      w.u16(n.threshold);
      w.u16(static_cast<std::uint16_t>(n.children.size()));
      for (std::uint32_t c : n.children) w.u32(c);
    }
  }
  w.u32(tree.root);
}

inline AccessTree read_access_tree(ByteReader& r) {
  AccessTree tree;
  const std::uint32_t count = r.u32();
  // Every node costs at least 3 bytes, so this bounds allocation by input size.
  if (count > r.remaining() / 3 + 1) throw SerializationError("access tree too large");
  tree.nodes.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    AccessTree::Node n;
    const std::uint8_t kind = r.u8();
    if (kind == 0) {
      n.attr = Attribute::from_id(r.u16());
    } else if (kind == 1) {
      n.threshold = r.u16();
      const std::uint16_t nc = r.u16();
      n.children.reserve(nc);
      for (std::uint16_t c = 0; c < nc; ++c) n.children.push_back(r.u32());
    } else {
      throw SerializationError("unknown access tree node kind");
    }
    tree.nodes.push_back(std::move(n));
  }
  tree.root = r.u32();
  try {
    tree.validate();
  } catch (const Error& e) {
    throw SerializationError(std::string("invalid access tree: ") + e.what());
  }
  return tree;
}

// -- keys ----------------------------------------------------------------------

template <bilinear_group Grp>
Bytes encode_public_key(const Grp& grp, const PublicKey<Grp>& pk) {
  ByteWriter w;
  w.u8(kTagPublicKey);
  w.u8(kSerialVersion);
  w.elem(grp, pk.big_y);
  w.u16(static_cast<std::uint16_t>(kUniverseSize));
  for (const auto& t : pk.t_pub) w.elem(grp, t);
  return w.take();
}

template <bilinear_group Grp>
PublicKey<Grp> decode_public_key(const Grp& grp, std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagPublicKey);
  PublicKey<Grp> pk;
  pk.big_y = r.gt_elem(grp);
  if (r.u16() != kUniverseSize) throw SerializationError("wrong attribute universe size");
  for (auto& t : pk.t_pub) t = r.g_elem(grp);
  r.expect_done();
  return pk;
}

template <bilinear_group Grp>
Bytes encode_master_key(const Grp& grp, const MasterKey<Grp>& mk) {
  ByteWriter w;
  w.u8(kTagMasterKey);
  w.u8(kSerialVersion);
  w.elem(grp, mk.y);
  w.u16(static_cast<std::uint16_t>(kUniverseSize));
  for (const auto& t : mk.t) w.elem(grp, t);
  return w.take();
}

template <bilinear_group Grp>
MasterKey<Grp> decode_master_key(const Grp& grp, std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagMasterKey);
  MasterKey<Grp> mk;
  mk.y = r.scalar(grp);
  if (r.u16() != kUniverseSize) throw SerializationError("wrong attribute universe size");
  for (auto& t : mk.t) t = r.scalar(grp);
  r.expect_done();
  return mk;
}

template <bilinear_group Grp>
Bytes encode_window_secrets(const Grp& grp, const WindowSecrets<Grp>& ws) {
  ByteWriter w;
  w.u8(kTagWindowSecrets);
  w.u8(kSerialVersion);
  w.u32(ws.beta);
  for (const auto& r : ws.r) w.elem(grp, r);
  return w.take();
}

template <bilinear_group Grp>
WindowSecrets<Grp> decode_window_secrets(const Grp& grp, std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagWindowSecrets);
  WindowSecrets<Grp> ws;
  ws.beta = r.u32();
  if (ws.beta == 0) throw SerializationError("window size must be positive");
  if (ws.beta > r.remaining() / grp.scalar_size())
    throw SerializationError("window secrets truncated");
  ws.r.reserve(ws.beta);
  for (std::uint32_t i = 0; i < ws.beta; ++i) ws.r.push_back(r.scalar(grp));
  r.expect_done();
  return ws;
}

template <bilinear_group Grp>
Bytes encode_transform_key(const Grp& grp, const TransformKey<Grp>& tk) {
  ByteWriter w;
  w.u8(kTagTransformKey);
  w.u8(kSerialVersion);
  write_policy_descriptor(w, tk.policy);
  write_access_tree(w, tk.tree);
  w.u32(static_cast<std::uint32_t>(tk.leaf_values.size()));
  for (const auto& [node, d] : tk.leaf_values) {
    w.u32(node);
    w.elem(grp, d);
  }
  return w.take();
}

template <bilinear_group Grp>
TransformKey<Grp> decode_transform_key(const Grp& grp, std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagTransformKey);
  TransformKey<Grp> tk;
  tk.policy = read_policy_descriptor(r);
  tk.tree = read_access_tree(r);
  const std::uint32_t count = r.u32();
  const auto leaves = tk.tree.leaf_ids();
  if (count != leaves.size())
    throw SerializationError("transform key leaf count does not match its tree");
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t node = r.u32();
    if (node != leaves[i]) throw SerializationError("transform key leaf ids out of order");
    tk.leaf_values.emplace_back(node, r.g_elem(grp));
  }
  r.expect_done();
  return tk;
}

template <bilinear_group Grp>
Bytes encode_user_key(const Grp& grp, const UserKey<Grp>& uk) {
  ByteWriter w;
  w.u8(kTagUserKey);
  w.u8(kSerialVersion);
  w.elem(grp, uk.z);
  w.u8(uk.is_window() ? 1 : 0);
  if (uk.is_window()) {
    w.elem(grp, *uk.sigma);
    w.u64(uk.alpha);
    w.u32(uk.beta);
  }
  return w.take();
}

template <bilinear_group Grp>
UserKey<Grp> decode_user_key(const Grp& grp, std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagUserKey);
  UserKey<Grp> uk;
  uk.z = r.scalar(grp);
  const std::uint8_t windowed = r.u8();
  if (windowed > 1) throw SerializationError("invalid user key flags");
  if (windowed == 1) {
    uk.sigma = r.scalar(grp);
    uk.alpha = r.u64();
    uk.beta = r.u32();
    if (uk.beta == 0) throw SerializationError("window size must be positive");
  }
  r.expect_done();
  return uk;
}

// -- ciphertexts ---------------------------------------------------------------

/// The window-size list is stream metadata announced once at registration and
/// deliberately not repeated per record: bodies are written in ascending
/// window-size order, so each additional supported size costs exactly one GT
/// element per record.
template <bilinear_group Grp>
Bytes encode_record(const Grp& grp, const CiphertextRecord<Grp>& rec) {
  ByteWriter w;
  w.u8(kTagCiphertextRecord);
  w.u8(kSerialVersion);
  w.u64(rec.k);
  w.raw(rec.attrs.to_bytes());
  for (const auto& [attr, e] : rec.eprime) {
    (void)attr;  // implied by the attribute set
    w.elem(grp, e);
  }
  w.elem(grp, rec.trigger_body);
  w.u16(static_cast<std::uint16_t>(rec.window_bodies.size()));
  for (const auto& [beta, body] : rec.window_bodies) {
    (void)beta;  // implied by the stream's window-size list
    w.elem(grp, body);
  }
  return w.take();
}

template <bilinear_group Grp>
CiphertextRecord<Grp> decode_record(const Grp& grp, std::span<const std::uint32_t> window_sizes,
                                    std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagCiphertextRecord);
  CiphertextRecord<Grp> rec;
  rec.k = r.u64();
  rec.attrs = AttributeSet::from_bytes(r.raw(AttributeSet::kByteSize));
  for (Attribute a : rec.attrs.to_vector()) rec.eprime.emplace_back(a, r.g_elem(grp));
  rec.trigger_body = r.gt_elem(grp);
  const std::uint16_t count = r.u16();
  if (count != window_sizes.size())
    throw SerializationError("record window-body count does not match the stream");
  for (std::uint32_t beta : window_sizes) rec.window_bodies.emplace_back(beta, r.gt_elem(grp));
  r.expect_done();
  return rec;
}

template <bilinear_group Grp>
Bytes encode_transformed(const Grp& grp, const TransformedCiphertext<Grp>& ct) {
  ByteWriter w;
  w.u8(kTagTransformedCiphertext);
  w.u8(kSerialVersion);
  w.u64(ct.k);
  w.elem(grp, ct.body);
  w.elem(grp, ct.proof);
  return w.take();
}

template <bilinear_group Grp>
TransformedCiphertext<Grp> decode_transformed(const Grp& grp,
                                              std::span<const std::uint8_t> in) {
  ByteReader r(in);
  expect_header(r, kTagTransformedCiphertext);
  TransformedCiphertext<Grp> ct;
  ct.k = r.u64();
  ct.body = r.gt_elem(grp);
  ct.proof = r.gt_elem(grp);
  r.expect_done();
  return ct;
}

}  // namespace streamgate

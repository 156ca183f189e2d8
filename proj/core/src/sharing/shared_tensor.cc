// Copyright 2026 The Shareformer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shareformer/sharing/shared_tensor.h"

#include <functional>
#include <numeric>

#include "shareformer/common/errors.h"
#include "shareformer/sharing/prg.h"

namespace shareformer {
namespace {

constexpr std::uint32_t kShareStream = 0x5348;  // "SH"

void CheckParty(int party) {
  SF_ENFORCE(party == 1 || party == 2, "party must be 1 or 2, got ", party);
}

void CheckCompatible(const SharedTensor& x, const SharedTensor& y) {
  SF_ENFORCE(x.kind() == y.kind(), "share kinds differ");
  SF_ENFORCE(x.shape() == y.shape(), "share shapes differ");
  SF_ENFORCE(x.party() == y.party(), "shares belong to different parties");
}

template <typename Fn>
SharedTensor Map(const SharedTensor& x, Fn fn) {
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = fn(x[i]);
  return x.WithData(std::move(out));
}

template <typename Fn>
SharedTensor Zip(const SharedTensor& x, const SharedTensor& y, Fn fn) {
  CheckCompatible(x, y);
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = fn(x[i], y[i]);
  return x.WithData(std::move(out));
}

}  // namespace

size_t NumElements(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), size_t{1},
                         std::multiplies<>());
}

SharedTensor::SharedTensor(int party, ShareKind kind, Shape shape,
                           std::vector<RingElement> data)
    : party_(party),
      kind_(kind),
      shape_(std::move(shape)),
      data_(std::move(data)) {
  CheckParty(party_);
  SF_ENFORCE(NumElements(shape_) == data_.size(), "shape holds ",
             NumElements(shape_), " elements but data has ", data_.size());
}

SharedTensor SharedTensor::Zeros(int party, ShareKind kind, Shape shape) {
  const size_t n = NumElements(shape);
  return SharedTensor(party, kind, std::move(shape),
                      std::vector<RingElement>(n, 0));
}

size_t SharedTensor::rows() const { return shape_.size() >= 2 ? shape_[0] : 1; }

size_t SharedTensor::cols() const {
  if (shape_.empty()) return 1;
  return shape_.size() >= 2 ? data_.size() / shape_[0] : shape_[0];
}

SharedTensor SharedTensor::Reshaped(Shape shape) const {
  return SharedTensor(party_, kind_, std::move(shape), data_);
}

SharedTensor SharedTensor::WithData(std::vector<RingElement> data) const {
  return SharedTensor(party_, kind_, shape_, std::move(data));
}

std::pair<SharedTensor, SharedTensor> Share(std::span<const RingElement> secret,
                                            const Shape& shape, ShareKind kind,
                                            std::uint64_t seed) {
  SF_ENFORCE(NumElements(shape) == secret.size(), "shape/secret size mismatch");
  Prg prg(seed, 0, kShareStream);
  std::vector<RingElement> s1(secret.size()), s2(secret.size());
  for (size_t i = 0; i < secret.size(); ++i) {
    const RingElement z = prg.Next();
    if (kind == ShareKind::kArithmetic) {
      s1[i] = secret[i] + z;
      s2[i] = RingNeg(z);
    } else {
      s1[i] = secret[i] ^ z;
      s2[i] = z;
    }
  }
  return {SharedTensor(1, kind, shape, std::move(s1)),
          SharedTensor(2, kind, shape, std::move(s2))};
}

std::pair<SharedTensor, SharedTensor> ShareWithMask(
    std::span<const RingElement> secret, const Shape& shape,
    std::span<const RingElement> mask_party1, int owner) {
  CheckParty(owner);
  SF_ENFORCE(secret.size() == mask_party1.size(), "mask size mismatch");
  std::vector<RingElement> s1(secret.size()), s2(secret.size());
  for (size_t i = 0; i < secret.size(); ++i) {
    const RingElement z1 = mask_party1[i];
    const RingElement z2 = RingNeg(z1);
    s1[i] = owner == 1 ? secret[i] + z1 : z1;
    s2[i] = owner == 2 ? secret[i] + z2 : z2;
  }
  return {SharedTensor(1, ShareKind::kArithmetic, shape, std::move(s1)),
          SharedTensor(2, ShareKind::kArithmetic, shape, std::move(s2))};
}

std::vector<RingElement> Reconstruct(const SharedTensor& s1,
                                     const SharedTensor& s2) {
  SF_ENFORCE(s1.kind() == s2.kind(), "cannot reconstruct mixed share kinds");
  SF_ENFORCE(s1.shape() == s2.shape(), "cannot reconstruct mismatched shapes");
  SF_ENFORCE(s1.party() != s2.party(), "both shares belong to party ",
             s1.party());
  std::vector<RingElement> out(s1.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] =
        s1.kind() == ShareKind::kArithmetic ? s1[i] + s2[i] : s1[i] ^ s2[i];
  }
  return out;
}

SharedTensor AddLocal(const SharedTensor& x, const SharedTensor& y) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic, "AddLocal needs arithmetic");
  return Zip(x, y, [](RingElement a, RingElement b) { return a + b; });
}

SharedTensor SubLocal(const SharedTensor& x, const SharedTensor& y) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic, "SubLocal needs arithmetic");
  return Zip(x, y, [](RingElement a, RingElement b) { return a - b; });
}

SharedTensor NegLocal(const SharedTensor& x) {
  return Map(x, [](RingElement a) { return RingNeg(a); });
}

SharedTensor AddPublic(const SharedTensor& x, RingElement k) {
  if (x.party() != 1) return x;
  return Map(x, [k](RingElement a) { return a + k; });
}

SharedTensor AddPublic(const SharedTensor& x, std::span<const RingElement> k) {
  SF_ENFORCE(k.size() == x.size(), "public operand size mismatch");
  if (x.party() != 1) return x;
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = x[i] + k[i];
  return x.WithData(std::move(out));
}

SharedTensor MulPublic(const SharedTensor& x, RingElement k) {
  return Map(x, [k](RingElement a) { return a * k; });
}

SharedTensor MulPublic(const SharedTensor& x, std::span<const RingElement> k) {
  SF_ENFORCE(k.size() == x.size(), "public operand size mismatch");
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) out[i] = x[i] * k[i];
  return x.WithData(std::move(out));
}

SharedTensor TruncateLocal(const SharedTensor& x,
                           const FixedPointCodec& codec) {
  const int party = x.party();
  return Map(x, [&](RingElement a) { return codec.TruncateShare(a, party); });
}

SharedTensor XorLocal(const SharedTensor& x, const SharedTensor& y) {
  return Zip(x, y, [](RingElement a, RingElement b) { return a ^ b; });
}

SharedTensor XorPublic(const SharedTensor& x, RingElement k) {
  if (x.party() != 1) return x;
  return Map(x, [k](RingElement a) { return a ^ k; });
}

SharedTensor AndPublic(const SharedTensor& x, RingElement k) {
  return Map(x, [k](RingElement a) { return a & k; });
}

SharedTensor ShiftLeft(const SharedTensor& x, int bits) {
  return Map(x, [bits](RingElement a) { return a << bits; });
}

SharedTensor ShiftRight(const SharedTensor& x, int bits) {
  return Map(x, [bits](RingElement a) { return a >> bits; });
}

SharedTensor Transpose(const SharedTensor& x) {
  const size_t r = x.rows(), c = x.cols();
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < c; ++j) out[j * r + i] = x[i * c + j];
  }
  return SharedTensor(x.party(), x.kind(), {c, r}, std::move(out));
}

SharedTensor SliceCols(const SharedTensor& x, size_t begin, size_t count) {
  const size_t r = x.rows(), c = x.cols();
  SF_ENFORCE(begin + count <= c, "column slice out of range");
  std::vector<RingElement> out(r * count);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < count; ++j)
      out[i * count + j] = x[i * c + begin + j];
  }
  return SharedTensor(x.party(), x.kind(), {r, count}, std::move(out));
}

SharedTensor SliceRows(const SharedTensor& x, size_t begin, size_t count) {
  const size_t r = x.rows(), c = x.cols();
  SF_ENFORCE(begin + count <= r, "row slice out of range");
  auto first = x.data().begin() + static_cast<std::ptrdiff_t>(begin * c);
  std::vector<RingElement> out(first,
                               first + static_cast<std::ptrdiff_t>(count * c));
  return SharedTensor(x.party(), x.kind(), {count, c}, std::move(out));
}

SharedTensor ConcatCols(std::span<const SharedTensor> parts) {
  SF_ENFORCE(!parts.empty(), "nothing to concatenate");
  const size_t r = parts[0].rows();
  size_t total = 0;
  for (const auto& p : parts) {
    SF_ENFORCE(p.rows() == r, "row counts differ in ConcatCols");
    total += p.cols();
  }
  std::vector<RingElement> out(r * total);
  size_t offset = 0;
  for (const auto& p : parts) {
    const size_t c = p.cols();
    for (size_t i = 0; i < r; ++i) {
      for (size_t j = 0; j < c; ++j) out[i * total + offset + j] = p[i * c + j];
    }
    offset += c;
  }
  return SharedTensor(parts[0].party(), parts[0].kind(), {r, total},
                      std::move(out));
}

SharedTensor ConcatRows(std::span<const SharedTensor> parts) {
  SF_ENFORCE(!parts.empty(), "nothing to concatenate");
  const size_t c = parts[0].cols();
  size_t total = 0;
  std::vector<RingElement> out;
  for (const auto& p : parts) {
    SF_ENFORCE(p.cols() == c, "column counts differ in ConcatRows");
    total += p.rows();
    out.insert(out.end(), p.data().begin(), p.data().end());
  }
  return SharedTensor(parts[0].party(), parts[0].kind(), {total, c},
                      std::move(out));
}

SharedTensor RowSum(const SharedTensor& x) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic, "RowSum needs arithmetic");
  const size_t r = x.rows(), c = x.cols();
  std::vector<RingElement> out(r, 0);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < c; ++j) out[i] += x[i * c + j];
  }
  return SharedTensor(x.party(), x.kind(), {r, 1}, std::move(out));
}

SharedTensor BroadcastCols(const SharedTensor& x, size_t cols) {
  SF_ENFORCE(x.cols() == 1, "BroadcastCols expects a column vector");
  const size_t r = x.rows();
  std::vector<RingElement> out(r * cols);
  for (size_t i = 0; i < r; ++i) {
    for (size_t j = 0; j < cols; ++j) out[i * cols + j] = x[i];
  }
  return SharedTensor(x.party(), x.kind(), {r, cols}, std::move(out));
}

SharedTensor BroadcastRows(const SharedTensor& x, size_t rows) {
  SF_ENFORCE(x.rows() == 1, "BroadcastRows expects a row vector");
  const size_t c = x.cols();
  std::vector<RingElement> out;
  out.reserve(rows * c);
  for (size_t i = 0; i < rows; ++i) {
    out.insert(out.end(), x.data().begin(), x.data().end());
  }
  return SharedTensor(x.party(), x.kind(), {rows, c}, std::move(out));
}

}  // namespace shareformer

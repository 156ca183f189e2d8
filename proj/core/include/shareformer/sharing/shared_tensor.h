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

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shareformer/ring/fixed_point.h"

namespace shareformer {

enum class ShareKind : std::uint8_t {
  kArithmetic = 0,  // [x]_1 + [x]_2 = x (mod 2^64)
  kBinary = 1,      // <x>_1 ^ <x>_2 = x
};

using Shape = std::vector<size_t>;

size_t NumElements(const Shape& shape);

// One party's share of a tensor. Row-major storage; 1-D tensors behave as a
// single row in the 2-D helpers.
class SharedTensor {
 public:
  SharedTensor() = default;
  SharedTensor(int party, ShareKind kind, Shape shape,
               std::vector<RingElement> data);

  static SharedTensor Zeros(int party, ShareKind kind, Shape shape);

  int party() const { return party_; }
  ShareKind kind() const { return kind_; }
  const Shape& shape() const { return shape_; }
  size_t size() const { return data_.size(); }
  size_t rows() const;
  size_t cols() const;

  std::span<const RingElement> data() const { return data_; }
  RingElement operator[](size_t i) const { return data_[i]; }

  SharedTensor Reshaped(Shape shape) const;
  SharedTensor WithData(std::vector<RingElement> data) const;

 private:
  int party_ = 1;
  ShareKind kind_ = ShareKind::kArithmetic;
  Shape shape_;
  std::vector<RingElement> data_;
};

// Splits `secret` into two shares with a uniform mask drawn from `seed`.
// Arithmetic: party 1 holds secret + z and party 2 holds -z.
// Binary: party 1 holds secret ^ z and party 2 holds z.
std::pair<SharedTensor, SharedTensor> Share(std::span<const RingElement> secret,
                                            const Shape& shape, ShareKind kind,
                                            std::uint64_t seed);

// Shares with an explicit zero-sum mask pair (z, -z); `owner` adds its mask
// half to the secret and the other party keeps its half.
std::pair<SharedTensor, SharedTensor> ShareWithMask(
    std::span<const RingElement> secret, const Shape& shape,
    std::span<const RingElement> mask_party1, int owner);

// Throws ContractViolation on shape/kind mismatch or when both shares claim
// the same party.
std::vector<RingElement> Reconstruct(const SharedTensor& s1,
                                     const SharedTensor& s2);

// Zero-communication arithmetic.
SharedTensor AddLocal(const SharedTensor& x, const SharedTensor& y);
SharedTensor SubLocal(const SharedTensor& x, const SharedTensor& y);
SharedTensor NegLocal(const SharedTensor& x);
// Party 1 adds k; party 2 returns its share untouched.
SharedTensor AddPublic(const SharedTensor& x, RingElement k);
SharedTensor AddPublic(const SharedTensor& x, std::span<const RingElement> k);
// Multiplies by public integers without rescaling.
SharedTensor MulPublic(const SharedTensor& x, RingElement k);
SharedTensor MulPublic(const SharedTensor& x, std::span<const RingElement> k);
// Share-local truncation by the codec's fractional bits.
SharedTensor TruncateLocal(const SharedTensor& x, const FixedPointCodec& codec);

// Boolean share helpers; all local.
SharedTensor XorLocal(const SharedTensor& x, const SharedTensor& y);
SharedTensor XorPublic(const SharedTensor& x, RingElement k);
SharedTensor AndPublic(const SharedTensor& x, RingElement k);
SharedTensor ShiftLeft(const SharedTensor& x, int bits);
SharedTensor ShiftRight(const SharedTensor& x, int bits);

// Layout helpers for 2-D shares.
SharedTensor Transpose(const SharedTensor& x);
SharedTensor SliceCols(const SharedTensor& x, size_t begin, size_t count);
SharedTensor SliceRows(const SharedTensor& x, size_t begin, size_t count);
SharedTensor ConcatCols(std::span<const SharedTensor> parts);
SharedTensor ConcatRows(std::span<const SharedTensor> parts);
// rows x cols -> rows x 1.
SharedTensor RowSum(const SharedTensor& x);
// rows x 1 -> rows x cols.
SharedTensor BroadcastCols(const SharedTensor& x, size_t cols);
// 1 x cols -> rows x cols.
SharedTensor BroadcastRows(const SharedTensor& x, size_t rows);

}  // namespace shareformer

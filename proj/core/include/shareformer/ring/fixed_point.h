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
#include <vector>

namespace shareformer {

// An element of Z / 2^64 Z. Arithmetic wraps; the signed view is two's
// complement on the upper half of the ring.
using RingElement = std::uint64_t;

inline constexpr int kRingBits = 64;

constexpr RingElement RingAdd(RingElement a, RingElement b) { return a + b; }
constexpr RingElement RingSub(RingElement a, RingElement b) { return a - b; }
constexpr RingElement RingMul(RingElement a, RingElement b) { return a * b; }
constexpr RingElement RingNeg(RingElement a) { return RingElement{0} - a; }
constexpr std::int64_t ToSigned(RingElement a) {
  return static_cast<std::int64_t>(a);
}
constexpr RingElement FromSigned(std::int64_t a) {
  return static_cast<RingElement>(a);
}

// Encodes reals as round(v * 2^f) in the ring.
//
// decode(encode(v)) is within 2^(-f-1) of v whenever |v| < 2^(63-f). After a
// product of two encoded values the result carries 2f fractional bits and
// must be truncated by f bits.
class FixedPointCodec {
 public:
  static constexpr int kDefaultFracBits = 16;
  static constexpr int kMinFracBits = 8;
  static constexpr int kMaxFracBits = 24;

  explicit FixedPointCodec(int frac_bits = kDefaultFracBits);

  int frac_bits() const { return frac_bits_; }
  double scale() const { return scale_; }
  // Largest magnitude accepted by Encode (exclusive).
  double max_abs() const;

  // Throws RangeError when |v| >= 2^(63-f) or v is not finite.
  RingElement Encode(double v) const;
  double Decode(RingElement r) const;

  std::vector<RingElement> Encode(std::span<const double> values) const;
  std::vector<double> Decode(std::span<const RingElement> values) const;

  // Encodes with 2f fractional bits, i.e. the scale of a raw product.
  RingElement EncodeDouble(double v) const;

  // Arithmetic right shift by f of the signed view.
  RingElement TruncateLocal(RingElement r) const;

  // Share-local truncation. Party 1 shifts its share, party 2 shifts the
  // negation of its share and negates back, so the reconstructed result is
  // floor(x / 2^f) or one more, except with probability about |x| / 2^64.
  RingElement TruncateShare(RingElement share, int party) const;

 private:
  int frac_bits_;
  double scale_;
};

bool operator==(const FixedPointCodec& a, const FixedPointCodec& b);

}  // namespace shareformer

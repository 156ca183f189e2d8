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

#include "shareformer/ring/fixed_point.h"

#include <cmath>

#include "shareformer/common/errors.h"

namespace shareformer {

FixedPointCodec::FixedPointCodec(int frac_bits)
    : frac_bits_(frac_bits), scale_(std::ldexp(1.0, frac_bits)) {
  SF_ENFORCE(frac_bits >= kMinFracBits && frac_bits <= kMaxFracBits,
             "frac_bits must lie in [", kMinFracBits, ", ", kMaxFracBits,
             "], got ", frac_bits);
}

double FixedPointCodec::max_abs() const {
  return std::ldexp(1.0, 63 - frac_bits_);
}

RingElement FixedPointCodec::Encode(double v) const {
  if (!std::isfinite(v) || std::fabs(v) >= max_abs()) {
    throw RangeError(internal::StrCat(
        "value ", v, " is outside the fixed-point range at f=", frac_bits_));
  }
  return FromSigned(std::llround(v * scale_));
}

double FixedPointCodec::Decode(RingElement r) const {
  return static_cast<double>(ToSigned(r)) / scale_;
}

std::vector<RingElement> FixedPointCodec::Encode(
    std::span<const double> values) const {
  std::vector<RingElement> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = Encode(values[i]);
  return out;
}

std::vector<double> FixedPointCodec::Decode(
    std::span<const RingElement> values) const {
  std::vector<double> out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out[i] = Decode(values[i]);
  return out;
}

RingElement FixedPointCodec::EncodeDouble(double v) const {
  const double scaled = v * scale_ * scale_;
  if (!std::isfinite(scaled) || std::fabs(scaled) >= std::ldexp(1.0, 63)) {
    throw RangeError(
        internal::StrCat("value ", v, " is outside the 2f fixed-point range"));
  }
  return FromSigned(std::llround(scaled));
}

RingElement FixedPointCodec::TruncateLocal(RingElement r) const {
  return FromSigned(ToSigned(r) >> frac_bits_);
}

RingElement FixedPointCodec::TruncateShare(RingElement share, int party) const {
  if (party == 1) return TruncateLocal(share);
  return RingNeg(TruncateLocal(RingNeg(share)));
}

bool operator==(const FixedPointCodec& a, const FixedPointCodec& b) {
  return a.frac_bits() == b.frac_bits();
}

}  // namespace shareformer

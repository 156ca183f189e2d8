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

#include "shareformer/protocols/numeric.h"

#include <array>
#include <cmath>

#include "shareformer/common/errors.h"
#include "shareformer/protocols/arithmetic.h"
#include "shareformer/protocols/boolean.h"

namespace shareformer {

namespace {

constexpr int kExpLog2Steps = 8;
// Initial guesses sit at the geometric middle of each bit-length bucket.
constexpr double kReciprocalGuessScale = 2.0 / 3.0;
const double kInvSqrtGuessScale = std::pow(2.0, -0.25);
// erf Taylor coefficients are applied with this many extra bits.
constexpr int kErfCoefficientBits = 8;

RingElement EncodePow2(double mantissa, int exponent) {
  if (exponent < -2) return 0;
  return static_cast<RingElement>(std::llround(std::ldexp(mantissa, exponent)));
}

// Sum over k of bits[:, k] * weights[k]; exact, no truncation.
SharedTensor WeightedBitSum(int party, const SharedTensor& bits,
                            const std::array<RingElement, kRingBits>& weights,
                            const Shape& shape) {
  const size_t n = bits.rows();
  std::vector<RingElement> out(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < static_cast<size_t>(kRingBits); ++k) {
      out[i] += bits[i * kRingBits + k] * weights[k];
    }
  }
  return SharedTensor(party, ShareKind::kArithmetic, shape, std::move(out));
}

}  // namespace

SharedTensor ExpIter(Session& s, const SharedTensor& x, int extra_bits) {
  SF_ENFORCE(extra_bits >= 0 && extra_bits <= kExpLog2Steps,
             "extra_bits must be in [0, 8]");
  const int f = s.codec().frac_bits();
  const int scale = f + extra_bits;
  SharedTensor y = AddPublic(TruncateBits(x, kExpLog2Steps - extra_bits),
                             RingElement{1} << scale);
  for (int i = 0; i < kExpSquarings; ++i) {
    y = TruncateBits(MulNoTrunc(s, y, y), scale);
  }
  return y;
}

SharedTensor MsbOneHot(Session& s, const SharedTensor& x) {
  SharedTensor o = A2B(s, x);
  // Prefix OR toward the low bits: a | b = a ^ b ^ (a & b).
  for (int shift = 1; shift < kRingBits; shift *= 2) {
    const SharedTensor moved = ShiftRight(o, shift);
    o = XorLocal(XorLocal(o, moved), BinaryAnd(s, o, moved));
  }
  const SharedTensor one_hot = XorLocal(o, ShiftRight(o, 1));
  return BitsToArithmetic(s, one_hot, kRingBits);
}

SharedTensor ReciprocalNr(Session& s, const SharedTensor& x, int extra_bits) {
  SF_ENFORCE(extra_bits >= 0 && extra_bits <= kReciprocalWorkBits,
             "extra_bits must be in [0, ", kReciprocalWorkBits, "]");
  const int f = s.codec().frac_bits();
  const int work = f + kReciprocalWorkBits;

  // If the top bit of x is k then x lies in [2^(k-f), 2^(k+1-f)).
  std::array<RingElement, kRingBits> guess{};
  for (int k = 0; k < kRingBits; ++k) {
    guess[k] = EncodePow2(kReciprocalGuessScale, f + work - k);
  }
  SharedTensor y = WeightedBitSum(s.party(), MsbOneHot(s, x), guess, x.shape());

  const RingElement two = RingElement{2} << work;
  for (int i = 0; i < kNewtonIterations; ++i) {
    const SharedTensor xy = TruncateBits(MulNoTrunc(s, x, y), f);
    const SharedTensor u =
        TruncateBits(AddPublic(NegLocal(xy), two), kReciprocalWorkBits);
    y = TruncateBits(MulNoTrunc(s, y, u), f);
  }
  return TruncateBits(y, kReciprocalWorkBits - extra_bits);
}

SharedTensor InvSqrtNr(Session& s, const SharedTensor& x, int extra_bits) {
  SF_ENFORCE(extra_bits >= 0 && extra_bits <= 8,
             "extra_bits must be in [0, 8]");
  const int f = s.codec().frac_bits();
  constexpr int kWideBits = 8;

  std::array<RingElement, kRingBits> guess{};
  for (int k = 0; k < kRingBits; ++k) {
    guess[k] = static_cast<RingElement>(
        std::llround(kInvSqrtGuessScale * std::pow(2.0, f + 0.5 * (f - k))));
  }
  SharedTensor y = WeightedBitSum(s.party(), MsbOneHot(s, x), guess, x.shape());

  for (int i = 0; i < kNewtonIterations; ++i) {
    // The last iteration keeps `extra_bits` of x y^3 and scales 3y to match.
    const int out = (i + 1 == kNewtonIterations) ? extra_bits : 0;
    // x*y at scale f and y*y with 8 extra bits, in one round.
    const std::array<SharedTensor, 2> lhs{x, y};
    const std::array<SharedTensor, 2> rhs{y, y};
    auto r = MulMany(s, lhs, rhs, /*truncate=*/false);
    const SharedTensor xy = TruncateBits(r[0], f);
    const SharedTensor yy = TruncateBits(r[1], f - kWideBits);
    const SharedTensor xyyy =
        TruncateBits(MulNoTrunc(s, xy, yy), f + kWideBits - out);
    // y' = (3y - x y^3) / 2
    y = TruncateBits(
        SubLocal(MulPublic(y, static_cast<RingElement>(3) << out), xyyy), 1);
  }
  return y;
}

SharedTensor ErfTaylor(Session& s, const SharedTensor& x) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic, "erf expects arithmetic");
  const int f = s.codec().frac_bits();
  const size_t n = x.size();
  const Shape flat{n};
  const SharedTensor xf = x.Reshaped(flat);

  // Odd polynomial x * P(x^2) with P of degree 7.
  std::array<SharedTensor, 8> pw;
  pw[1] = Square(s, xf);
  pw[2] = Square(s, pw[1]);
  {
    const std::array<SharedTensor, 2> lhs{pw[2], pw[2]};
    const std::array<SharedTensor, 2> rhs{pw[1], pw[2]};
    auto r = MulMany(s, lhs, rhs);
    pw[3] = std::move(r[0]);
    pw[4] = std::move(r[1]);
  }
  {
    const std::array<SharedTensor, 3> lhs{pw[4], pw[4], pw[4]};
    const std::array<SharedTensor, 3> rhs{pw[1], pw[2], pw[3]};
    auto r = MulMany(s, lhs, rhs);
    pw[5] = std::move(r[0]);
    pw[6] = std::move(r[1]);
    pw[7] = std::move(r[2]);
  }
  const double two_over_sqrt_pi = 2.0 / std::sqrt(M_PI);
  const int coef_scale = f + kErfCoefficientBits;
  std::vector<RingElement> acc(n, 0);
  double factorial = 1.0;
  for (int k = 0; k <= 7; ++k) {
    if (k > 0) factorial *= k;
    const double a = two_over_sqrt_pi * ((k % 2 == 0) ? 1.0 : -1.0) /
                     (factorial * (2 * k + 1));
    const RingElement c = FromSigned(std::llround(std::ldexp(a, coef_scale)));
    if (k == 0) {
      if (s.party() == 1) {
        for (auto& v : acc) v += c << f;
      }
      continue;
    }
    for (size_t i = 0; i < n; ++i) acc[i] += c * pw[k][i];
  }
  s.CountLocalOps(8 * n);
  const SharedTensor poly = TruncateBits(
      SharedTensor(s.party(), ShareKind::kArithmetic, flat, std::move(acc)),
      coef_scale);
  const SharedTensor p = Mul(s, xf, poly);

  // [x > c] and [x < -c] in one comparison.
  const std::array<SharedTensor, 2> tests{SubFromConst(s, kErfClamp, xf),
                                          AddConst(s, xf, kErfClamp)};
  const SharedTensor bits = LtzBit(s, ConcatRows(tests).Reshaped({2 * n}));
  const SharedTensor above =
      SliceRows(bits.Reshaped({2 * n, 1}), 0, n).Reshaped(flat);
  const SharedTensor below =
      SliceRows(bits.Reshaped({2 * n, 1}), n, n).Reshaped(flat);
  // erf = p * (1 - above - below) + above - below
  const SharedTensor keep = AddPublic(NegLocal(AddLocal(above, below)), 1);
  const SharedTensor sat =
      MulPublic(SubLocal(above, below), RingElement{1} << f);
  return AddLocal(MulNoTrunc(s, p, keep), sat).Reshaped(x.shape());
}

}  // namespace shareformer

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

#include "shareformer/nn/mpc_layers.h"

#include <array>
#include <cmath>
#include <vector>

#include "shareformer/common/errors.h"
#include "shareformer/protocols/arithmetic.h"
#include "shareformer/protocols/boolean.h"
#include "shareformer/protocols/numeric.h"

namespace shareformer {

namespace {

void CheckKeep(std::span<const double> keep, size_t cols) {
  if (keep.empty()) return;
  SF_ENFORCE(keep.size() == cols, "mask has ", keep.size(), " entries for ",
             cols, " columns");
  for (double k : keep)
    SF_ENFORCE(k == 0.0 || k == 1.0, "mask entries must be 0 or 1");
}

// Multiplies every row by the public 0/1 mask; exact, no truncation.
SharedTensor ApplyKeep(const SharedTensor& x, std::span<const double> keep) {
  if (keep.empty()) return x;
  const size_t rows = x.rows(), cols = x.cols();
  std::vector<RingElement> out(x.size());
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      out[r * cols + c] = keep[c] != 0.0 ? x[r * cols + c] : 0;
    }
  }
  return x.WithData(std::move(out));
}

// Adds the public constant `value` at masked columns.
SharedTensor AddMaskConstant(Session& s, const SharedTensor& x,
                             std::span<const double> keep, double value) {
  if (keep.empty()) return x;
  const size_t rows = x.rows(), cols = x.cols();
  const RingElement m = s.codec().Encode(value);
  std::vector<RingElement> k(x.size(), 0);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      if (keep[c] == 0.0) k[r * cols + c] = m;
    }
  }
  return AddPublic(x, k);
}

// numerator / (row sum + eps) using the widened reciprocal.
SharedTensor NormalizeRows(Session& s, const SharedTensor& numerator) {
  const int f = s.codec().frac_bits();
  const SharedTensor denom =
      AddConst(s, RowSum(numerator), kSoftmaxDenominatorEps);
  const SharedTensor inv = ReciprocalNr(s, denom, kReciprocalWorkBits);
  return TruncateBits(
      MulNoTrunc(s, numerator, BroadcastCols(inv, numerator.cols())),
      f + kReciprocalWorkBits);
}

SharedTensor As2D(const SharedTensor& x) {
  return x.Reshaped({x.rows(), x.cols()});
}

}  // namespace

SharedTensor GeluQuad(Session& s, const SharedTensor& x) {
  CommLedger::Scope scope(s.ledger(), kScopeGelu);
  const SharedTensor sq = Square(s, x);
  return AddConst(s, AddLocal(TruncateBits(sq, 3), TruncateBits(x, 2)), 0.5);
}

SharedTensor GeluExact(Session& s, const SharedTensor& x) {
  CommLedger::Scope scope(s.ledger(), kScopeGelu);
  const SharedTensor e = ErfTaylor(s, MulConst(s, x, 1.0 / std::sqrt(2.0)));
  const SharedTensor half = AddConst(s, TruncateBits(e, 1), 0.5);
  return Mul(s, x, half);
}

SharedTensor Gelu(Session& s, const SharedTensor& x, GeluVariant variant) {
  return variant == GeluVariant::kQuad ? GeluQuad(s, x) : GeluExact(s, x);
}

SharedTensor SoftmaxExact(Session& s, const SharedTensor& x_in,
                          std::span<const double> keep) {
  CommLedger::Scope scope(s.ledger(), kScopeSoftmax);
  const SharedTensor x = As2D(x_in);
  CheckKeep(keep, x.cols());
  const SharedTensor masked = AddMaskConstant(s, x, keep, kAdditiveMask);
  const SharedTensor top = MaxTree(s, masked);
  const SharedTensor shifted = SubLocal(masked, BroadcastCols(top, x.cols()));
  // Masked entries leave exp's domain; the keep mask zeroes them exactly.
  // The squarings run wide, then drop back to the session scale.
  const SharedTensor e = ApplyKeep(
      TruncateBits(ExpIter(s, shifted, kExpWorkBits), kExpWorkBits), keep);
  return ApplyKeep(NormalizeRows(s, e), keep).Reshaped(x_in.shape());
}

SharedTensor Softmax2Relu(Session& s, const SharedTensor& x_in,
                          std::span<const double> keep) {
  CommLedger::Scope scope(s.ledger(), kScopeSoftmax);
  const SharedTensor x = As2D(x_in);
  CheckKeep(keep, x.cols());
  const SharedTensor r = Relu(s, AddMaskConstant(s, x, keep, kAdditiveMask));
  return NormalizeRows(s, r).Reshaped(x_in.shape());
}

SharedTensor Softmax2Quad(Session& s, const SharedTensor& x_in,
                          std::span<const double> keep, double c) {
  CommLedger::Scope scope(s.ledger(), kScopeSoftmax);
  const SharedTensor x = As2D(x_in);
  CheckKeep(keep, x.cols());
  const SharedTensor num = ApplyKeep(Square(s, AddConst(s, x, c)), keep);
  return ApplyKeep(NormalizeRows(s, num), keep).Reshaped(x_in.shape());
}

SharedTensor Softmax(Session& s, const SharedTensor& x,
                     const ApproximationSpec& spec,
                     std::span<const double> keep) {
  switch (spec.softmax) {
    case SoftmaxVariant::kExact:
      return SoftmaxExact(s, x, keep);
    case SoftmaxVariant::kTwoRelu:
      return Softmax2Relu(s, x, keep);
    case SoftmaxVariant::kTwoQuad:
      return Softmax2Quad(s, x, keep, spec.two_quad_c);
  }
  throw ContractViolation("unknown softmax variant");
}

SharedTensor LayerNorm(Session& s, const SharedTensor& x_in,
                       const SharedTensor& gain, const SharedTensor& bias) {
  CommLedger::Scope scope(s.ledger(), kScopeLayerNorm);
  const SharedTensor x = As2D(x_in);
  const size_t rows = x.rows(), h = x.cols();
  SF_ENFORCE(gain.size() == h && bias.size() == h,
             "layer norm parameters must have ", h, " entries");
  const double inv_h = 1.0 / static_cast<double>(h);
  // h * (x - mean) is formed exactly with local ops, so a constant row
  // normalises to exactly zero.
  const SharedTensor scaled = SubLocal(
      MulPublic(x, static_cast<RingElement>(h)), BroadcastCols(RowSum(x), h));
  const SharedTensor g = BroadcastRows(gain.Reshaped({1, h}), rows);
  const std::array<SharedTensor, 2> lhs{scaled, scaled};
  const std::array<SharedTensor, 2> rhs{scaled, g};
  const auto prods = MulMany(s, lhs, rhs);
  const SharedTensor var =
      MulConst(s, MulConst(s, RowSum(prods[0]), inv_h * inv_h), inv_h);
  const SharedTensor inv =
      InvSqrtNr(s, AddConst(s, var, kLayerNormEps), kInvSqrtWorkBits);
  const SharedTensor y = TruncateBits(
      MulNoTrunc(s, MulConst(s, prods[1], inv_h), BroadcastCols(inv, h)),
      s.codec().frac_bits() + kInvSqrtWorkBits);
  return AddLocal(y, BroadcastRows(bias.Reshaped({1, h}), rows))
      .Reshaped(x_in.shape());
}

SharedTensor Attention(Session& s, const SharedTensor& q, const SharedTensor& k,
                       const SharedTensor& v, const ApproximationSpec& spec,
                       std::span<const double> keep) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  SharedTensor scores;
  {
    CommLedger::Scope scope(s.ledger(), kScopeMatMul);
    scores = MulConst(s, MatMul(s, q, Transpose(k)), scale);
  }
  const SharedTensor probs = Softmax(s, scores, spec, keep);
  CommLedger::Scope scope(s.ledger(), kScopeMatMul);
  return MatMul(s, probs, v);
}

SharedTensor MultiHeadAttention(Session& s, const SharedTensor& qkv, int heads,
                                const ApproximationSpec& spec,
                                std::span<const double> keep) {
  const size_t seq = qkv.rows();
  SF_ENFORCE(heads >= 1 && qkv.cols() % (3 * static_cast<size_t>(heads)) == 0,
             "fused QKV width must be a multiple of 3 * heads");
  const size_t hidden = qkv.cols() / 3;
  const size_t d = hidden / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));

  std::vector<SharedTensor> qs, kts, vs;
  for (int h = 0; h < heads; ++h) {
    qs.push_back(SliceCols(qkv, h * d, d));
    kts.push_back(Transpose(SliceCols(qkv, hidden + h * d, d)));
    vs.push_back(SliceCols(qkv, 2 * hidden + h * d, d));
  }
  std::vector<SharedTensor> scores;
  {
    CommLedger::Scope scope(s.ledger(), kScopeMatMul);
    scores = MatMulMany(s, qs, kts);
    for (auto& sc : scores) sc = MulConst(s, sc, scale);
  }
  const SharedTensor probs = Softmax(s, ConcatRows(scores), spec, keep);
  std::vector<SharedTensor> per_head;
  for (int h = 0; h < heads; ++h)
    per_head.push_back(SliceRows(probs, h * seq, seq));
  CommLedger::Scope scope(s.ledger(), kScopeMatMul);
  return ConcatCols(MatMulMany(s, per_head, vs));
}

}  // namespace shareformer

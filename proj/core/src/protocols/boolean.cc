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

#include "shareformer/protocols/boolean.h"

#include <array>
#include <utility>

#include "shareformer/common/errors.h"
#include "shareformer/protocols/arithmetic.h"

namespace shareformer {

namespace {

SharedTensor Binary(int party, Shape shape, std::vector<RingElement> data) {
  return SharedTensor(party, ShareKind::kBinary, std::move(shape),
                      std::move(data));
}

// Private values of each party in the first adder round, and the products
// (party-1 index, party-2 index) it needs: g = u&w, T1 = A&(w<<1),
// T2 = (u<<1)&B, X1 = u&(w<<1), X2 = (u<<1)&w.
constexpr size_t kPrivateValues = 3;
constexpr std::array<std::pair<std::uint32_t, std::uint32_t>, 5>
    kAdderProducts = {{{0, 0}, {2, 1}, {1, 2}, {0, 1}, {1, 0}}};

}  // namespace

std::vector<SharedTensor> BinaryAndMany(Session& s,
                                        std::span<const SharedTensor> xs,
                                        std::span<const SharedTensor> ys) {
  SF_ENFORCE(xs.size() == ys.size(), "operand lists differ in length");
  size_t total = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    SF_ENFORCE(xs[i].kind() == ShareKind::kBinary &&
                   ys[i].kind() == ShareKind::kBinary,
               "binary AND expects binary shares");
    SF_ENFORCE(xs[i].shape() == ys[i].shape(), "AND operands differ in shape");
    total += xs[i].size();
  }
  const auto t = UnpackBinaryTriple(
      s.party(), {total}, s.Fetch(DealerRequest::BinaryAndTriple(total)));

  std::vector<RingElement> opening(2 * total);
  size_t off = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < xs[i].size(); ++j, ++off) {
      opening[off] = xs[i][j] ^ t.a[off];
      opening[total + off] = ys[i][j] ^ t.b[off];
    }
  }
  const auto peer = s.Exchange(Opening::Masked(opening), 2 * total);

  std::vector<SharedTensor> out;
  off = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    std::vector<RingElement> z(xs[i].size());
    for (size_t j = 0; j < z.size(); ++j, ++off) {
      const RingElement e = opening[off] ^ peer[off];
      const RingElement d = opening[total + off] ^ peer[total + off];
      RingElement v = t.c[off] ^ (e & t.b[off]) ^ (d & t.a[off]);
      if (s.party() == 1) v ^= e & d;
      z[j] = v;
    }
    out.push_back(xs[i].WithData(std::move(z)));
  }
  s.CountLocalOps(4 * total);
  return out;
}

SharedTensor BinaryAnd(Session& s, const SharedTensor& x,
                       const SharedTensor& y) {
  return BinaryAndMany(s, std::span(&x, 1), std::span(&y, 1)).front();
}

SharedTensor A2B(Session& s, const SharedTensor& x) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic, "A2B expects arithmetic");
  const size_t n = x.size();
  const int party = s.party();

  // Round 1: generate/propagate over 2-bit blocks. Each party's own share
  // is private to it, so the first products are cross ANDs.
  const auto request = DealerRequest::CrossAndTriple(
      n, kPrivateValues, kPrivateValues, kAdderProducts);
  const auto corr = UnpackCrossAnd(party, request, s.Fetch(request));
  std::vector<RingElement> own(n * kPrivateValues);
  for (size_t e = 0; e < n; ++e) {
    const RingElement v = x[e];
    own[e * 3 + 0] = v;
    own[e * 3 + 1] = v << 1;
    own[e * 3 + 2] = v & (v << 1);
  }
  std::vector<RingElement> opening(own.size());
  for (size_t i = 0; i < own.size(); ++i) opening[i] = own[i] ^ corr.masks[i];
  const auto peer =
      s.Exchange(Opening::MaskedPrivate(opening), n * kPrivateValues);

  constexpr size_t np = kAdderProducts.size();
  std::vector<RingElement> prod(n * np);
  for (size_t e = 0; e < n; ++e) {
    for (size_t q = 0; q < np; ++q) {
      const auto [i, j] = kAdderProducts[q];
      RingElement v = corr.products[e * np + q];
      if (party == 1) {
        v ^= own[e * 3 + i] & peer[e * 3 + j];
      } else {
        v ^= peer[e * 3 + i] & corr.masks[e * 3 + j];
      }
      prod[e * np + q] = v;
    }
  }
  std::vector<RingElement> g(n), p(n), pp(n);
  for (size_t e = 0; e < n; ++e) {
    const RingElement* q = &prod[e * np];
    g[e] = q[0] ^ q[1] ^ q[2];
    pp[e] = own[e * 3 + 2] ^ q[3] ^ q[4];
    p[e] = x[e];
  }
  SharedTensor gen = Binary(party, x.shape(), std::move(g));
  SharedTensor prop = Binary(party, x.shape(), std::move(pp));
  const SharedTensor p0 = Binary(party, x.shape(), std::move(p));

  // Rounds 2-5: doubling spans, two ANDs per level.
  for (int span = 2; span < 32; span *= 2) {
    const std::array<SharedTensor, 2> lhs{prop, prop};
    const std::array<SharedTensor, 2> rhs{ShiftLeft(gen, span),
                                          ShiftLeft(prop, span)};
    auto r = BinaryAndMany(s, lhs, rhs);
    gen = XorLocal(gen, r[0]);
    prop = std::move(r[1]);
  }
  // Round 6: the last level only needs the generate signal.
  gen = XorLocal(gen, BinaryAnd(s, prop, ShiftLeft(gen, 32)));
  s.CountLocalOps(8 * n);
  return XorLocal(p0, ShiftLeft(gen, 1));
}

SharedTensor BitsToArithmetic(Session& s, const SharedTensor& x, int nbits) {
  SF_ENFORCE(x.kind() == ShareKind::kBinary, "expected a binary share");
  SF_ENFORCE(nbits >= 1 && nbits <= kRingBits, "nbits must be in [1, 64]");
  const size_t n = x.size();
  const size_t nb = static_cast<size_t>(nbits);
  const RingElement low =
      nbits == kRingBits ? ~RingElement{0} : (RingElement{1} << nbits) - 1;
  const auto pairs = UnpackBitPairs(s.party(), n, nbits,
                                    s.Fetch(DealerRequest::BitPairs(n, nbits)));

  std::vector<RingElement> opening(n);
  for (size_t i = 0; i < n; ++i) opening[i] = (x[i] ^ pairs.binary[i]) & low;
  const auto peer = s.Exchange(Opening::Masked(opening), n);

  std::vector<RingElement> bits(n * nb);
  for (size_t i = 0; i < n; ++i) {
    const RingElement c = (opening[i] ^ peer[i]) & low;
    for (size_t b = 0; b < nb; ++b) {
      const RingElement cb = (c >> b) & 1;
      const RingElement r = pairs.arithmetic[i * nb + b];
      RingElement v = r - 2 * cb * r;
      if (s.party() == 1) v += cb;
      bits[i * nb + b] = v;
    }
  }
  s.CountLocalOps(2 * n * nb);
  return SharedTensor(s.party(), ShareKind::kArithmetic, {n, nb},
                      std::move(bits));
}

SharedTensor B2A(Session& s, const SharedTensor& x, int nbits) {
  const SharedTensor bits = BitsToArithmetic(s, x, nbits);
  const size_t nb = static_cast<size_t>(nbits);
  std::vector<RingElement> out(x.size(), 0);
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t b = 0; b < nb; ++b) out[i] += bits[i * nb + b] << b;
  }
  return SharedTensor(s.party(), ShareKind::kArithmetic, x.shape(),
                      std::move(out));
}

SharedTensor LtzBit(Session& s, const SharedTensor& x) {
  const SharedTensor sign = ShiftRight(A2B(s, x), kRingBits - 1);
  return B2A(s, sign, 1).Reshaped(x.shape());
}

SharedTensor Ltz(Session& s, const SharedTensor& x) {
  return MulPublic(LtzBit(s, x), RingElement{1} << s.codec().frac_bits());
}

SharedTensor Relu(Session& s, const SharedTensor& x) {
  return SubLocal(x, MulNoTrunc(s, x, LtzBit(s, x)));
}

SharedTensor MaxTree(Session& s, const SharedTensor& x) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic, "max expects arithmetic");
  SF_ENFORCE(x.size() > 0, "max over an empty axis");
  const size_t rows = x.rows();
  SharedTensor cur = x.Reshaped({rows, x.cols()});
  while (cur.cols() > 1) {
    const size_t cols = cur.cols();
    const size_t half = cols / 2;
    std::vector<RingElement> a(rows * half), b(rows * half);
    for (size_t r = 0; r < rows; ++r) {
      for (size_t j = 0; j < half; ++j) {
        a[r * half + j] = cur[r * cols + 2 * j];
        b[r * half + j] = cur[r * cols + 2 * j + 1];
      }
    }
    const SharedTensor sa = SharedTensor(s.party(), ShareKind::kArithmetic,
                                         {rows, half}, std::move(a));
    const SharedTensor sb = SharedTensor(s.party(), ShareKind::kArithmetic,
                                         {rows, half}, std::move(b));
    const SharedTensor diff = SubLocal(sa, sb);
    // max(a, b) = a - (a - b) * [a < b]
    SharedTensor m = SubLocal(sa, MulNoTrunc(s, diff, LtzBit(s, diff)));
    if (cols % 2 == 1) {
      const std::array<SharedTensor, 2> parts{m, SliceCols(cur, cols - 1, 1)};
      m = ConcatCols(parts);
    }
    cur = std::move(m);
  }
  return cur;
}

}  // namespace shareformer

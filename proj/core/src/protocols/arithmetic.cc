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

#include "shareformer/protocols/arithmetic.h"

#include <algorithm>
#include <cmath>

#include "shareformer/common/errors.h"

namespace shareformer {

namespace {

RingElement TruncateShareBits(RingElement v, int bits, int party) {
  if (party == 1) return FromSigned(ToSigned(v) >> bits);
  return RingNeg(FromSigned(ToSigned(RingNeg(v)) >> bits));
}

void CheckArithmetic(const SharedTensor& x) {
  SF_ENFORCE(x.kind() == ShareKind::kArithmetic,
             "expected an arithmetic share");
}

}  // namespace

SharedTensor TruncateBits(const SharedTensor& x, int bits) {
  SF_ENFORCE(bits >= 0 && bits < kRingBits, "bad truncation width ", bits);
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = TruncateShareBits(x[i], bits, x.party());
  }
  return x.WithData(std::move(out));
}

SharedTensor MulConst(Session& s, const SharedTensor& x, double c) {
  CheckArithmetic(x);
  s.CountLocalOps(x.size());
  // Small constants get up to 8 extra fractional bits so that factors such
  // as 1/768 keep their precision.
  int extra = 0;
  if (c != 0.0) {
    extra = std::clamp(-static_cast<int>(std::floor(std::log2(std::fabs(c)))),
                       0, 8);
  }
  const FixedPointCodec& codec = s.codec();
  const RingElement k = FromSigned(static_cast<std::int64_t>(
      std::llround(std::ldexp(c, codec.frac_bits() + extra))));
  return TruncateBits(MulPublic(x, k), codec.frac_bits() + extra);
}

SharedTensor AddConst(Session& s, const SharedTensor& x, double c) {
  return AddPublic(x, s.codec().Encode(c));
}

SharedTensor SubFromConst(Session& s, double c, const SharedTensor& x) {
  return AddPublic(NegLocal(x), s.codec().Encode(c));
}

std::vector<SharedTensor> MulMany(Session& s, std::span<const SharedTensor> xs,
                                  std::span<const SharedTensor> ys,
                                  bool truncate) {
  SF_ENFORCE(xs.size() == ys.size(), "operand lists differ in length");
  size_t total = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    CheckArithmetic(xs[i]);
    CheckArithmetic(ys[i]);
    SF_ENFORCE(xs[i].shape() == ys[i].shape(), "mul operands differ in shape");
    total += xs[i].size();
  }
  const auto request = DealerRequest::ElementwiseTriple(total);
  const auto triple =
      UnpackElementwiseTriple(s.party(), {total}, s.Fetch(request));

  // Own shares of eps = x - a followed by delta = y - b.
  std::vector<RingElement> opening(2 * total);
  size_t off = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < xs[i].size(); ++j, ++off) {
      opening[off] = xs[i][j] - triple.a[off];
      opening[total + off] = ys[i][j] - triple.b[off];
    }
  }
  const auto peer = s.Exchange(Opening::Masked(opening), 2 * total);

  std::vector<SharedTensor> out;
  out.reserve(xs.size());
  off = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    std::vector<RingElement> z(xs[i].size());
    for (size_t j = 0; j < z.size(); ++j, ++off) {
      const RingElement eps = opening[off] + peer[off];
      const RingElement delta = opening[total + off] + peer[total + off];
      RingElement v =
          triple.c[off] + eps * triple.b[off] + triple.a[off] * delta;
      if (s.party() == 1) v += eps * delta;
      z[j] = v;
    }
    SharedTensor product = xs[i].WithData(std::move(z));
    out.push_back(truncate ? TruncateLocal(product, s.codec()) : product);
  }
  s.CountLocalOps(4 * total);
  return out;
}

SharedTensor Mul(Session& s, const SharedTensor& x, const SharedTensor& y) {
  return MulMany(s, std::span(&x, 1), std::span(&y, 1), true).front();
}

SharedTensor MulNoTrunc(Session& s, const SharedTensor& x,
                        const SharedTensor& y) {
  return MulMany(s, std::span(&x, 1), std::span(&y, 1), false).front();
}

SharedTensor Square(Session& s, const SharedTensor& x) { return Mul(s, x, x); }

std::vector<SharedTensor> MatMulMany(Session& s,
                                     std::span<const SharedTensor> xs,
                                     std::span<const SharedTensor> ys) {
  SF_ENFORCE(xs.size() == ys.size(), "operand lists differ in length");
  struct Dims {
    size_t m, k, n;
  };
  std::vector<Dims> dims;
  std::vector<BeaverTriple> triples;
  size_t total = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    CheckArithmetic(xs[i]);
    CheckArithmetic(ys[i]);
    SF_ENFORCE(xs[i].shape().size() == 2 && ys[i].shape().size() == 2,
               "matmul expects 2-D operands");
    const Dims d{xs[i].rows(), xs[i].cols(), ys[i].cols()};
    SF_ENFORCE(ys[i].rows() == d.k, "matmul inner dimensions differ: ", d.k,
               " vs ", ys[i].rows());
    dims.push_back(d);
    const auto request = DealerRequest::MatmulTriple(d.m, d.k, d.n);
    triples.push_back(
        UnpackMatmulTriple(s.party(), d.m, d.k, d.n, s.Fetch(request)));
    total += d.m * d.k + d.k * d.n;
  }

  std::vector<RingElement> opening;
  opening.reserve(total);
  for (size_t i = 0; i < xs.size(); ++i) {
    for (size_t j = 0; j < xs[i].size(); ++j) {
      opening.push_back(xs[i][j] - triples[i].a[j]);
    }
    for (size_t j = 0; j < ys[i].size(); ++j) {
      opening.push_back(ys[i][j] - triples[i].b[j]);
    }
  }
  const auto peer = s.Exchange(Opening::Masked(opening), total);

  std::vector<SharedTensor> out;
  size_t off = 0;
  std::uint64_t ops = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const auto [m, k, n] = dims[i];
    std::vector<RingElement> eps(m * k), delta(k * n);
    for (auto& v : eps) {
      v = opening[off] + peer[off];
      ++off;
    }
    for (auto& v : delta) {
      v = opening[off] + peer[off];
      ++off;
    }
    const auto& t = triples[i];
    auto z = RingMatMul(eps, t.b.data(), m, k, n);
    const auto ad = RingMatMul(t.a.data(), delta, m, k, n);
    for (size_t j = 0; j < z.size(); ++j) z[j] += ad[j] + t.c[j];
    if (s.party() == 1) {
      const auto ed = RingMatMul(eps, delta, m, k, n);
      for (size_t j = 0; j < z.size(); ++j) z[j] += ed[j];
    }
    ops += 3 * m * k * n;
    out.push_back(TruncateLocal(
        SharedTensor(s.party(), ShareKind::kArithmetic, {m, n}, std::move(z)),
        s.codec()));
  }
  s.CountLocalOps(ops);
  return out;
}

SharedTensor MatMul(Session& s, const SharedTensor& x, const SharedTensor& y) {
  return MatMulMany(s, std::span(&x, 1), std::span(&y, 1)).front();
}

}  // namespace shareformer

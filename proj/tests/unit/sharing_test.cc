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

#include <array>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "shareformer/common/errors.h"
#include "shareformer/sharing/dealer.h"
#include "shareformer/sharing/prg.h"
#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {
namespace {

RingElement S(std::int64_t v) { return FromSigned(v); }

TEST(ShareTest, AppendixAdditionExample) {
  const std::vector<RingElement> x{1}, y{2};
  const std::vector<RingElement> mx{S(-4)}, my{S(50)};
  auto [x1, x2] = ShareWithMask(x, {1}, mx, /*owner=*/1);
  auto [y1, y2] = ShareWithMask(y, {1}, my, /*owner=*/2);
  EXPECT_EQ(ToSigned(x1[0]), -3);
  EXPECT_EQ(ToSigned(x2[0]), 4);
  EXPECT_EQ(ToSigned(y1[0]), 50);
  EXPECT_EQ(ToSigned(y2[0]), -48);
  const SharedTensor z1 = AddLocal(x1, y1), z2 = AddLocal(x2, y2);
  EXPECT_EQ(ToSigned(z1[0]), 47);
  EXPECT_EQ(ToSigned(z2[0]), -44);
  EXPECT_EQ(Reconstruct(z1, z2), std::vector<RingElement>{3});
}

TEST(ShareTest, ZeroReconstructsForAnySeed) {
  const std::vector<RingElement> zero(5, 0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto [a, b] = Share(zero, {5}, ShareKind::kArithmetic, seed);
    EXPECT_EQ(Reconstruct(a, b), zero);
  }
}

TEST(ShareTest, RoundTripBothKinds) {
  std::mt19937_64 rng(3);
  std::vector<RingElement> v(1000);
  for (auto& e : v) e = rng();
  for (auto kind : {ShareKind::kArithmetic, ShareKind::kBinary}) {
    auto [a, b] = Share(v, {1000}, kind, 99);
    EXPECT_EQ(Reconstruct(a, b), v);
    EXPECT_EQ(a.kind(), kind);
    EXPECT_EQ(a.shape(), b.shape());
  }
}

TEST(ShareTest, BinaryReconstructIsXor) {
  const SharedTensor a(1, ShareKind::kBinary, {1}, {0b1010});
  const SharedTensor b(2, ShareKind::kBinary, {1}, {0b0110});
  EXPECT_EQ(Reconstruct(a, b), std::vector<RingElement>{0b1100});
}

TEST(ShareTest, ReconstructRejectsMismatch) {
  const SharedTensor a(1, ShareKind::kArithmetic, {2}, {1, 2});
  const SharedTensor b(2, ShareKind::kArithmetic, {1, 2}, {1, 2});
  const SharedTensor c(2, ShareKind::kBinary, {2}, {1, 2});
  EXPECT_THROW(Reconstruct(a, b), ContractViolation);
  EXPECT_THROW(Reconstruct(a, c), ContractViolation);
  EXPECT_THROW(Reconstruct(a, a), ContractViolation);
}

TEST(ShareTest, AddLocalWithZeroSharing) {
  const FixedPointCodec codec;
  const std::vector<RingElement> x{codec.Encode(2.25)}, zero{0};
  auto [x1, x2] = Share(x, {1}, ShareKind::kArithmetic, 1);
  auto [z1, z2] = Share(zero, {1}, ShareKind::kArithmetic, 2);
  EXPECT_EQ(Reconstruct(AddLocal(x1, z1), AddLocal(x2, z2)), x);
}

TEST(ShareTest, AddPublicOnlyPartyOneMutates) {
  const FixedPointCodec codec;
  const std::vector<RingElement> x{codec.Encode(2.0)};
  auto [x1, x2] = Share(x, {1}, ShareKind::kArithmetic, 5);
  const RingElement k = codec.Encode(3.0);
  const SharedTensor y1 = AddPublic(x1, k), y2 = AddPublic(x2, k);
  EXPECT_EQ(y2[0], x2[0]);
  EXPECT_EQ(y1[0], x1[0] + k);
  EXPECT_EQ(codec.Decode(Reconstruct(y1, y2)[0]), 5.0);
  EXPECT_EQ(Reconstruct(AddPublic(x1, 0), AddPublic(x2, 0)), x);
}

// Chi-square statistic of the top-4-bit histogram of party 1's share.
double ShareChiSquare(RingElement secret) {
  std::array<int, 16> counts{};
  constexpr int kDraws = 10000;
  for (int seed = 0; seed < kDraws; ++seed) {
    const std::vector<RingElement> v{secret};
    auto [a, b] = Share(v, {1}, ShareKind::kArithmetic, seed);
    ++counts[a[0] >> 60];
  }
  const double expected = kDraws / 16.0;
  double chi = 0;
  for (int c : counts) chi += (c - expected) * (c - expected) / expected;
  return chi;
}

TEST(ShareTest, SingleShareLooksUniform) {
  // 15 degrees of freedom; 37.7 is the 0.1% critical value.
  EXPECT_LT(ShareChiSquare(0), 37.7);
  EXPECT_LT(ShareChiSquare(RingElement{1} << 63), 37.7);
  EXPECT_LT(ShareChiSquare(12345), 37.7);
}

TEST(PrgTest, DeterministicAndStreamSeparated) {
  EXPECT_EQ(Prg(1, 2, 3).Draw(100), Prg(1, 2, 3).Draw(100));
  EXPECT_NE(Prg(1, 2, 3).Draw(4), Prg(1, 2, 4).Draw(4));
  EXPECT_NE(Prg(1, 2, 3).Draw(4), Prg(1, 3, 3).Draw(4));
  EXPECT_NE(Prg(1, 2, 3).Draw(4), Prg(2, 2, 3).Draw(4));
  // Drawing in pieces matches drawing at once across buffer refills.
  Prg p(9, 9, 9);
  std::vector<RingElement> pieces;
  for (int i = 0; i < 300; ++i) pieces.push_back(p.Next());
  EXPECT_EQ(pieces, Prg(9, 9, 9).Draw(300));
}

TEST(DealerTest, ElementwiseTripleRelation) {
  const auto req = DealerRequest::ElementwiseTriple(500);
  const auto out = DealerGen(req, 42, 7);
  const auto t1 = UnpackElementwiseTriple(1, {500}, out.party1);
  const auto t2 = UnpackElementwiseTriple(2, {500}, out.party2);
  const auto a = Reconstruct(t1.a, t2.a), b = Reconstruct(t1.b, t2.b),
             c = Reconstruct(t1.c, t2.c);
  for (size_t i = 0; i < 500; ++i) EXPECT_EQ(c[i], a[i] * b[i]);
}

TEST(DealerTest, MatmulTripleMatchesPlainProduct) {
  const auto req = DealerRequest::MatmulTriple(4, 8, 3);
  const auto out = DealerGen(req, 42);
  const auto t1 = UnpackMatmulTriple(1, 4, 8, 3, out.party1);
  const auto t2 = UnpackMatmulTriple(2, 4, 8, 3, out.party2);
  const auto a = Reconstruct(t1.a, t2.a), b = Reconstruct(t1.b, t2.b),
             c = Reconstruct(t1.c, t2.c);
  for (size_t i = 0; i < 4; ++i) {
    for (size_t j = 0; j < 3; ++j) {
      RingElement acc = 0;
      for (size_t k = 0; k < 8; ++k) acc += a[i * 8 + k] * b[k * 3 + j];
      EXPECT_EQ(c[i * 3 + j], acc);
    }
  }
}

TEST(DealerTest, BitPairsAgree) {
  const auto req = DealerRequest::BitPairs(1000, 1);
  const auto out = DealerGen(req, 5);
  const auto p1 = UnpackBitPairs(1, 1000, 1, out.party1);
  const auto p2 = UnpackBitPairs(2, 1000, 1, out.party2);
  const auto arith = Reconstruct(p1.arithmetic, p2.arithmetic);
  const auto bin = Reconstruct(p1.binary, p2.binary);
  int ones = 0;
  for (size_t i = 0; i < 1000; ++i) {
    ASSERT_LE(arith[i], 1u);
    EXPECT_EQ(arith[i], bin[i]);
    ones += static_cast<int>(arith[i]);
  }
  EXPECT_GT(ones, 400);
  EXPECT_LT(ones, 600);
}

TEST(DealerTest, MultiBitPairsAgree) {
  const auto req = DealerRequest::BitPairs(50, 64);
  const auto out = DealerGen(req, 6);
  const auto p1 = UnpackBitPairs(1, 50, 64, out.party1);
  const auto p2 = UnpackBitPairs(2, 50, 64, out.party2);
  const auto arith = Reconstruct(p1.arithmetic, p2.arithmetic);
  const auto bin = Reconstruct(p1.binary, p2.binary);
  for (size_t i = 0; i < 50; ++i) {
    for (size_t b = 0; b < 64; ++b)
      EXPECT_EQ(arith[i * 64 + b], (bin[i] >> b) & 1);
  }
}

TEST(DealerTest, BinaryAndTripleRelation) {
  const auto out = DealerGen(DealerRequest::BinaryAndTriple(200), 8);
  const auto t1 = UnpackBinaryTriple(1, {200}, out.party1);
  const auto t2 = UnpackBinaryTriple(2, {200}, out.party2);
  const auto a = Reconstruct(t1.a, t2.a), b = Reconstruct(t1.b, t2.b),
             c = Reconstruct(t1.c, t2.c);
  for (size_t i = 0; i < 200; ++i) EXPECT_EQ(c[i], a[i] & b[i]);
}

TEST(DealerTest, CrossAndRelation) {
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> products{
      {0, 0}, {1, 0}, {0, 1}};
  const auto req = DealerRequest::CrossAndTriple(30, 2, 2, products);
  const auto out = DealerGen(req, 9);
  const auto c1 = UnpackCrossAnd(1, req, out.party1);
  const auto c2 = UnpackCrossAnd(2, req, out.party2);
  for (size_t e = 0; e < 30; ++e) {
    for (size_t q = 0; q < products.size(); ++q) {
      const auto [i, j] = products[q];
      EXPECT_EQ(c1.products[e * 3 + q] ^ c2.products[e * 3 + q],
                c1.masks[e * 2 + i] & c2.masks[e * 2 + j]);
    }
  }
}

TEST(DealerTest, RequestSerializationRoundTrip) {
  const std::vector<std::pair<std::uint32_t, std::uint32_t>> products{{1, 2}};
  for (const auto& r :
       {DealerRequest::ElementwiseTriple(3),
        DealerRequest::MatmulTriple(2, 3, 4), DealerRequest::BitPairs(5, 7),
        DealerRequest::BinaryAndTriple(9),
        DealerRequest::CrossAndTriple(4, 2, 3, products)}) {
    EXPECT_EQ(DealerRequest::Deserialize(r.Serialize()), r);
  }
  const std::vector<std::uint64_t> junk{99, 1};
  EXPECT_THROW(DealerRequest::Deserialize(junk), DealerError);
}

TEST(DealerTest, DeterministicPerSeed) {
  const auto req = DealerRequest::ElementwiseTriple(10);
  EXPECT_EQ(DealerGen(req, 1).party1, DealerGen(req, 1).party1);
  EXPECT_EQ(DealerGen(req, 1).party2, DealerGen(req, 1).party2);
  EXPECT_NE(DealerGen(req, 1).party2, DealerGen(req, 2).party2);
}

TEST(DealerTest, PregenerateMatchesOnDemand) {
  const std::vector<DealerRequest> plan{DealerRequest::ElementwiseTriple(4),
                                        DealerRequest::BitPairs(3, 2),
                                        DealerRequest::MatmulTriple(2, 2, 2)};
  LocalDealer lazy(77, 2), eager(77, 2);
  eager.Pregenerate(plan);
  for (const auto& r : plan) EXPECT_EQ(lazy.Fetch(r), eager.Fetch(r));
  EXPECT_EQ(lazy.issued(), eager.issued());
  EXPECT_EQ(lazy.Fetch(plan[0]), eager.Fetch(plan[0]));
}

TEST(DealerTest, PregeneratedMismatchIsDetected) {
  LocalDealer d(1, 1);
  const std::vector<DealerRequest> plan{DealerRequest::ElementwiseTriple(4)};
  d.Pregenerate(plan);
  EXPECT_THROW(d.Fetch(DealerRequest::ElementwiseTriple(5)), DealerError);
}

TEST(DealerTest, NoCorrelationIsReused) {
  LocalDealer d(1, 1);
  const auto r = DealerRequest::ElementwiseTriple(8);
  EXPECT_NE(d.Fetch(r), d.Fetch(r));
}

}  // namespace
}  // namespace shareformer

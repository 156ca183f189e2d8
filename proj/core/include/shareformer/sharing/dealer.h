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
#include <deque>
#include <span>
#include <utility>
#include <vector>

#include "shareformer/sharing/shared_tensor.h"

namespace shareformer {

enum class CorrelationKind : std::uint8_t {
  kElementwiseTriple = 1,
  kMatmulTriple = 2,
  kBitPair = 3,
  kBinaryAndTriple = 4,
  // AND of a value private to party 1 with a value private to party 2. Each
  // party gets its own masks in the clear plus XOR shares of the products of
  // masks, so a cross AND opens one word per party instead of two.
  kCrossAndTriple = 5,
};

// What a protocol step asks the dealer for. Both parties issue identical
// request sequences; the dealer's i-th answer to each party belongs together.
struct DealerRequest {
  CorrelationKind kind = CorrelationKind::kElementwiseTriple;
  std::vector<std::uint64_t> params;

  static DealerRequest ElementwiseTriple(size_t n);
  static DealerRequest MatmulTriple(size_t m, size_t k, size_t n);
  static DealerRequest BitPairs(size_t n, int nbits);
  static DealerRequest BinaryAndTriple(size_t n);
  // `products` lists (party-1 mask index, party-2 mask index) pairs.
  static DealerRequest CrossAndTriple(
      size_t n, size_t masks1, size_t masks2,
      std::span<const std::pair<std::uint32_t, std::uint32_t>> products);

  // Ring elements the dealer returns to `party` for this request.
  size_t PayloadSize(int party) const;

  std::vector<std::uint64_t> Serialize() const;
  static DealerRequest Deserialize(std::span<const std::uint64_t> words);

  friend bool operator==(const DealerRequest&, const DealerRequest&) = default;
};

// Deterministic: the same (seed, index, request, party) always yields the same
// payload. Party 1's half is pure PRG output; party 2's half carries the
// corrections that make the defining relation hold.
std::vector<RingElement> GenerateCorrelation(std::uint64_t seed,
                                             std::uint64_t index,
                                             const DealerRequest& request,
                                             int party);

struct DealerOutputs {
  std::vector<RingElement> party1;
  std::vector<RingElement> party2;
};

// Both halves at once; a test and offline-generation convenience.
DealerOutputs DealerGen(const DealerRequest& request, std::uint64_t seed,
                        std::uint64_t index = 0);

struct BeaverTriple {
  SharedTensor a;
  SharedTensor b;
  SharedTensor c;
};

struct BitPairShares {
  SharedTensor arithmetic;  // n x nbits; entry (i, b) shares bit b of r_i
  SharedTensor binary;      // n words; low nbits bits hold r_i
  int nbits = 0;
};

struct CrossAndShares {
  std::vector<RingElement> masks;     // n x own-mask count, row-major
  std::vector<RingElement> products;  // n x product count, XOR shares
};

BeaverTriple UnpackElementwiseTriple(int party, const Shape& shape,
                                     std::span<const RingElement> payload);
BeaverTriple UnpackMatmulTriple(int party, size_t m, size_t k, size_t n,
                                std::span<const RingElement> payload);
BitPairShares UnpackBitPairs(int party, size_t n, int nbits,
                             std::span<const RingElement> payload);
BeaverTriple UnpackBinaryTriple(int party, const Shape& shape,
                                std::span<const RingElement> payload);
CrossAndShares UnpackCrossAnd(int party, const DealerRequest& request,
                              std::span<const RingElement> payload);

// Source of correlated randomness for one party.
class DealerClient {
 public:
  virtual ~DealerClient() = default;
  virtual int party() const = 0;
  virtual std::vector<RingElement> Fetch(const DealerRequest& request) = 0;
};

// In-process trusted dealer. Generates on demand, or serves a queue filled in
// advance by Pregenerate (the two modes produce identical material).
class LocalDealer : public DealerClient {
 public:
  LocalDealer(std::uint64_t seed, int party);

  int party() const override { return party_; }
  std::vector<RingElement> Fetch(const DealerRequest& request) override;

  void Pregenerate(std::span<const DealerRequest> requests);
  std::uint64_t issued() const { return next_index_; }

 private:
  std::uint64_t seed_;
  int party_;
  std::uint64_t next_index_ = 0;
  std::deque<std::pair<DealerRequest, std::vector<RingElement>>> queue_;
};

// Records the request sequence a protocol issues without producing material.
class RecordingDealer : public DealerClient {
 public:
  explicit RecordingDealer(DealerClient& inner) : inner_(inner) {}
  int party() const override { return inner_.party(); }
  std::vector<RingElement> Fetch(const DealerRequest& request) override {
    requests_.push_back(request);
    return inner_.Fetch(request);
  }
  const std::vector<DealerRequest>& requests() const { return requests_; }

 private:
  DealerClient& inner_;
  std::vector<DealerRequest> requests_;
};

// Plain ring matrix product, (m x k) * (k x n).
std::vector<RingElement> RingMatMul(std::span<const RingElement> a,
                                    std::span<const RingElement> b, size_t m,
                                    size_t k, size_t n);

}  // namespace shareformer

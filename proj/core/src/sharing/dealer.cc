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

#include "shareformer/sharing/dealer.h"

#include "shareformer/common/errors.h"
#include "shareformer/sharing/prg.h"

namespace shareformer {
namespace {

void CheckParty(int party) {
  SF_ENFORCE(party == 1 || party == 2, "party must be 1 or 2, got ", party);
}

RingElement LowMask(int nbits) {
  return nbits >= 64 ? ~RingElement{0} : ((RingElement{1} << nbits) - 1);
}

std::vector<RingElement> Draw(std::uint64_t seed, std::uint64_t index,
                              std::uint32_t stream, size_t n) {
  return Prg(seed, index, stream).Draw(n);
}

void Append(std::vector<RingElement>& out, const std::vector<RingElement>& v) {
  out.insert(out.end(), v.begin(), v.end());
}

// (a, b, c = a*b) in either arithmetic or boolean form. `product` maps the
// reconstructed a and b to reconstructed c.
template <typename ProductFn>
std::vector<RingElement> GenerateTriple(std::uint64_t seed, std::uint64_t index,
                                        size_t na, size_t nb, size_t nc,
                                        int party, bool boolean,
                                        ProductFn product) {
  auto a1 = Draw(seed, index, 2, na);
  auto b1 = Draw(seed, index, 3, nb);
  auto c1 = Draw(seed, index, 4, nc);
  std::vector<RingElement> out;
  out.reserve(na + nb + nc);
  if (party == 1) {
    Append(out, a1);
    Append(out, b1);
    Append(out, c1);
    return out;
  }
  const auto a = Draw(seed, index, 0, na);
  const auto b = Draw(seed, index, 1, nb);
  const auto c = product(a, b);
  for (size_t i = 0; i < na; ++i)
    out.push_back(boolean ? a[i] ^ a1[i] : a[i] - a1[i]);
  for (size_t i = 0; i < nb; ++i)
    out.push_back(boolean ? b[i] ^ b1[i] : b[i] - b1[i]);
  for (size_t i = 0; i < nc; ++i)
    out.push_back(boolean ? c[i] ^ c1[i] : c[i] - c1[i]);
  return out;
}

}  // namespace

DealerRequest DealerRequest::ElementwiseTriple(size_t n) {
  return {CorrelationKind::kElementwiseTriple, {n}};
}

DealerRequest DealerRequest::MatmulTriple(size_t m, size_t k, size_t n) {
  return {CorrelationKind::kMatmulTriple, {m, k, n}};
}

DealerRequest DealerRequest::BitPairs(size_t n, int nbits) {
  SF_ENFORCE(nbits >= 1 && nbits <= 64, "nbits must be in [1, 64]");
  return {CorrelationKind::kBitPair, {n, static_cast<std::uint64_t>(nbits)}};
}

DealerRequest DealerRequest::BinaryAndTriple(size_t n) {
  return {CorrelationKind::kBinaryAndTriple, {n}};
}

DealerRequest DealerRequest::CrossAndTriple(
    size_t n, size_t masks1, size_t masks2,
    std::span<const std::pair<std::uint32_t, std::uint32_t>> products) {
  DealerRequest r{CorrelationKind::kCrossAndTriple,
                  {n, masks1, masks2, products.size()}};
  for (const auto& [i, j] : products) {
    SF_ENFORCE(i < masks1 && j < masks2, "cross product index out of range");
    r.params.push_back(i);
    r.params.push_back(j);
  }
  return r;
}

size_t DealerRequest::PayloadSize(int party) const {
  CheckParty(party);
  const auto& p = params;
  switch (kind) {
    case CorrelationKind::kElementwiseTriple:
    case CorrelationKind::kBinaryAndTriple:
      return 3 * p.at(0);
    case CorrelationKind::kMatmulTriple:
      return p.at(0) * p.at(1) + p.at(1) * p.at(2) + p.at(0) * p.at(2);
    case CorrelationKind::kBitPair:
      return p.at(0) * p.at(1) + p.at(0);
    case CorrelationKind::kCrossAndTriple:
      return p.at(0) * ((party == 1 ? p.at(1) : p.at(2)) + p.at(3));
  }
  throw DealerError("unknown correlation kind");
}

std::vector<std::uint64_t> DealerRequest::Serialize() const {
  std::vector<std::uint64_t> words;
  words.reserve(params.size() + 1);
  words.push_back(static_cast<std::uint64_t>(kind));
  words.insert(words.end(), params.begin(), params.end());
  return words;
}

DealerRequest DealerRequest::Deserialize(std::span<const std::uint64_t> words) {
  if (words.empty()) throw DealerError("empty dealer request");
  DealerRequest r;
  const auto kind = words[0];
  if (kind < 1 || kind > 5) throw DealerError("unknown correlation kind");
  r.kind = static_cast<CorrelationKind>(kind);
  r.params.assign(words.begin() + 1, words.end());
  size_t expected = 0;
  switch (r.kind) {
    case CorrelationKind::kElementwiseTriple:
    case CorrelationKind::kBinaryAndTriple:
      expected = 1;
      break;
    case CorrelationKind::kMatmulTriple:
      expected = 3;
      break;
    case CorrelationKind::kBitPair:
      expected = 2;
      break;
    case CorrelationKind::kCrossAndTriple:
      if (r.params.size() < 4) throw DealerError("truncated cross request");
      expected = 4 + 2 * r.params[3];
      break;
  }
  if (r.params.size() != expected)
    throw DealerError("malformed dealer request");
  return r;
}

std::vector<RingElement> GenerateCorrelation(std::uint64_t seed,
                                             std::uint64_t index,
                                             const DealerRequest& request,
                                             int party) {
  CheckParty(party);
  const auto& p = request.params;
  switch (request.kind) {
    case CorrelationKind::kElementwiseTriple: {
      const size_t n = p.at(0);
      return GenerateTriple(seed, index, n, n, n, party, false,
                            [n](const auto& a, const auto& b) {
                              std::vector<RingElement> c(n);
                              for (size_t i = 0; i < n; ++i) c[i] = a[i] * b[i];
                              return c;
                            });
    }
    case CorrelationKind::kMatmulTriple: {
      const size_t m = p.at(0), k = p.at(1), n = p.at(2);
      return GenerateTriple(seed, index, m * k, k * n, m * n, party, false,
                            [=](const auto& a, const auto& b) {
                              return RingMatMul(a, b, m, k, n);
                            });
    }
    case CorrelationKind::kBinaryAndTriple: {
      const size_t n = p.at(0);
      return GenerateTriple(seed, index, n, n, n, party, true,
                            [n](const auto& a, const auto& b) {
                              std::vector<RingElement> c(n);
                              for (size_t i = 0; i < n; ++i) c[i] = a[i] & b[i];
                              return c;
                            });
    }
    case CorrelationKind::kBitPair: {
      const size_t n = p.at(0);
      const int nbits = static_cast<int>(p.at(1));
      const RingElement low = LowMask(nbits);
      auto r1 = Draw(seed, index, 1, n);
      for (auto& v : r1) v &= low;
      auto s1 = Draw(seed, index, 2, n * nbits);
      std::vector<RingElement> out;
      out.reserve(n * nbits + n);
      if (party == 1) {
        Append(out, s1);
        Append(out, r1);
        return out;
      }
      const auto r = Draw(seed, index, 0, n);
      for (size_t i = 0; i < n; ++i) {
        for (int b = 0; b < nbits; ++b) {
          out.push_back(((r[i] >> b) & 1) - s1[i * nbits + b]);
        }
      }
      for (size_t i = 0; i < n; ++i) out.push_back((r[i] & low) ^ r1[i]);
      return out;
    }
    case CorrelationKind::kCrossAndTriple: {
      const size_t n = p.at(0), m1 = p.at(1), m2 = p.at(2), np = p.at(3);
      const auto alpha = Draw(seed, index, 0, n * m1);
      const auto beta = Draw(seed, index, 1, n * m2);
      const auto s1 = Draw(seed, index, 2, n * np);
      std::vector<RingElement> out = party == 1 ? alpha : beta;
      out.reserve(out.size() + n * np);
      if (party == 1) {
        Append(out, s1);
        return out;
      }
      for (size_t e = 0; e < n; ++e) {
        for (size_t q = 0; q < np; ++q) {
          const size_t i = p[4 + 2 * q], j = p[5 + 2 * q];
          out.push_back((alpha[e * m1 + i] & beta[e * m2 + j]) ^
                        s1[e * np + q]);
        }
      }
      return out;
    }
  }
  throw DealerError("unknown correlation kind");
}

DealerOutputs DealerGen(const DealerRequest& request, std::uint64_t seed,
                        std::uint64_t index) {
  return {GenerateCorrelation(seed, index, request, 1),
          GenerateCorrelation(seed, index, request, 2)};
}

namespace {

void CheckPayload(std::span<const RingElement> payload, size_t expected) {
  if (payload.size() != expected) {
    throw DealerError(internal::StrCat("dealer payload has ", payload.size(),
                                       " elements, expected ", expected));
  }
}

std::vector<RingElement> Take(std::span<const RingElement> payload,
                              size_t& offset, size_t n) {
  std::vector<RingElement> out(payload.begin() + offset,
                               payload.begin() + offset + n);
  offset += n;
  return out;
}

}  // namespace

BeaverTriple UnpackElementwiseTriple(int party, const Shape& shape,
                                     std::span<const RingElement> payload) {
  const size_t n = NumElements(shape);
  CheckPayload(payload, 3 * n);
  size_t off = 0;
  const auto kind = ShareKind::kArithmetic;
  return {SharedTensor(party, kind, shape, Take(payload, off, n)),
          SharedTensor(party, kind, shape, Take(payload, off, n)),
          SharedTensor(party, kind, shape, Take(payload, off, n))};
}

BeaverTriple UnpackMatmulTriple(int party, size_t m, size_t k, size_t n,
                                std::span<const RingElement> payload) {
  CheckPayload(payload, m * k + k * n + m * n);
  size_t off = 0;
  const auto kind = ShareKind::kArithmetic;
  return {SharedTensor(party, kind, {m, k}, Take(payload, off, m * k)),
          SharedTensor(party, kind, {k, n}, Take(payload, off, k * n)),
          SharedTensor(party, kind, {m, n}, Take(payload, off, m * n))};
}

BitPairShares UnpackBitPairs(int party, size_t n, int nbits,
                             std::span<const RingElement> payload) {
  const size_t nb = static_cast<size_t>(nbits);
  CheckPayload(payload, n * nb + n);
  size_t off = 0;
  BitPairShares out;
  out.arithmetic = SharedTensor(party, ShareKind::kArithmetic, {n, nb},
                                Take(payload, off, n * nb));
  out.binary =
      SharedTensor(party, ShareKind::kBinary, {n}, Take(payload, off, n));
  out.nbits = nbits;
  return out;
}

BeaverTriple UnpackBinaryTriple(int party, const Shape& shape,
                                std::span<const RingElement> payload) {
  const size_t n = NumElements(shape);
  CheckPayload(payload, 3 * n);
  size_t off = 0;
  const auto kind = ShareKind::kBinary;
  return {SharedTensor(party, kind, shape, Take(payload, off, n)),
          SharedTensor(party, kind, shape, Take(payload, off, n)),
          SharedTensor(party, kind, shape, Take(payload, off, n))};
}

CrossAndShares UnpackCrossAnd(int party, const DealerRequest& request,
                              std::span<const RingElement> payload) {
  SF_ENFORCE(request.kind == CorrelationKind::kCrossAndTriple,
             "not a cross-AND request");
  CheckPayload(payload, request.PayloadSize(party));
  const size_t n = request.params[0];
  const size_t own = party == 1 ? request.params[1] : request.params[2];
  size_t off = 0;
  CrossAndShares out;
  out.masks = Take(payload, off, n * own);
  out.products = Take(payload, off, n * request.params[3]);
  return out;
}

LocalDealer::LocalDealer(std::uint64_t seed, int party)
    : seed_(seed), party_(party) {
  CheckParty(party);
}

std::vector<RingElement> LocalDealer::Fetch(const DealerRequest& request) {
  if (!queue_.empty()) {
    auto [queued, payload] = std::move(queue_.front());
    queue_.pop_front();
    if (!(queued == request)) {
      throw DealerError("pregenerated correlation does not match the request");
    }
    ++next_index_;
    return std::move(payload);
  }
  return GenerateCorrelation(seed_, next_index_++, request, party_);
}

void LocalDealer::Pregenerate(std::span<const DealerRequest> requests) {
  // Queued entries always cover indices [next_index_, next_index_ + size).
  std::uint64_t index = next_index_ + queue_.size();
  for (const auto& r : requests) {
    queue_.emplace_back(r, GenerateCorrelation(seed_, index++, r, party_));
  }
}

std::vector<RingElement> RingMatMul(std::span<const RingElement> a,
                                    std::span<const RingElement> b, size_t m,
                                    size_t k, size_t n) {
  SF_ENFORCE(a.size() == m * k && b.size() == k * n,
             "RingMatMul operand sizes do not match ", m, "x", k, "x", n);
  std::vector<RingElement> c(m * n, 0);
  for (size_t i = 0; i < m; ++i) {
    RingElement* crow = c.data() + i * n;
    for (size_t t = 0; t < k; ++t) {
      const RingElement av = a[i * k + t];
      const RingElement* brow = b.data() + t * n;
      for (size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

}  // namespace shareformer

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

#include "shareformer/protocols/io.h"

#include "shareformer/common/errors.h"

namespace shareformer {

namespace {

std::vector<RingElement> Combine(const SharedTensor& x,
                                 std::span<const RingElement> peer) {
  std::vector<RingElement> out(x.size());
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] =
        x.kind() == ShareKind::kArithmetic ? x[i] + peer[i] : x[i] ^ peer[i];
  }
  return out;
}

std::vector<RingElement> Words(const SharedTensor& x) {
  return {x.data().begin(), x.data().end()};
}

}  // namespace

SharedTensor ShareInput(Session& s, int owner,
                        std::span<const RingElement> secret,
                        const Shape& shape) {
  SF_ENFORCE(owner == 1 || owner == 2, "owner must be 1 or 2, got ", owner);
  const size_t n = NumElements(shape);
  std::vector<RingElement> share = s.NextInputMask(n);
  if (s.party() == 2) {
    for (auto& v : share) v = RingNeg(v);
  }
  if (s.party() == owner) {
    SF_ENFORCE(secret.size() == n, "input has ", secret.size(),
               " elements, shape needs ", n);
    for (size_t i = 0; i < n; ++i) share[i] += secret[i];
  }
  return SharedTensor(s.party(), ShareKind::kArithmetic, shape,
                      std::move(share));
}

std::vector<RingElement> Reveal(Session& s, const SharedTensor& x) {
  const auto peer = s.Exchange(Opening::OutputShare(Words(x)), x.size());
  return Combine(x, peer);
}

std::optional<std::vector<RingElement>> RevealTo(Session& s,
                                                 const SharedTensor& x,
                                                 int target) {
  SF_ENFORCE(target == 1 || target == 2, "target must be 1 or 2");
  if (s.party() == target) {
    const auto peer = s.Exchange(Opening::Empty(), x.size());
    return Combine(x, peer);
  }
  s.Exchange(Opening::OutputShare(Words(x)), 0);
  return std::nullopt;
}

}  // namespace shareformer

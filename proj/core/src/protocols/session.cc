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

#include "shareformer/protocols/session.h"

#include "shareformer/common/errors.h"
#include "shareformer/sharing/prg.h"

namespace shareformer {

namespace {
constexpr std::uint32_t kInputMaskStream = 0x494e;
}  // namespace

Session::Session(int party, PeerLink& link, DealerClient& dealer,
                 FixedPointCodec codec, std::uint64_t input_seed)
    : party_(party),
      link_(link),
      dealer_(dealer),
      codec_(codec),
      input_seed_(input_seed) {
  SF_ENFORCE(party == 1 || party == 2, "party must be 1 or 2, got ", party);
  SF_ENFORCE(dealer.party() == party, "dealer client serves party ",
             dealer.party(), " but the session is party ", party);
}

std::vector<RingElement> Session::Exchange(const Opening& opening,
                                           size_t expected) {
  auto received = link_.Exchange(opening);
  if (received.size() != expected) {
    throw ProtocolError(internal::StrCat("peer sent ", received.size(),
                                         " words at step ", link_.step() - 1,
                                         ", expected ", expected));
  }
  return received;
}

std::vector<RingElement> Session::Fetch(const DealerRequest& request) {
  auto payload = dealer_.Fetch(request);
  if (payload.size() != request.PayloadSize(party_)) {
    throw DealerError("dealer payload has the wrong size");
  }
  return payload;
}

std::vector<RingElement> Session::NextInputMask(size_t n) {
  return Prg(input_seed_, input_counter_++, kInputMaskStream).Draw(n);
}

}  // namespace shareformer

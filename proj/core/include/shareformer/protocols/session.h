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
#include <string_view>
#include <vector>

#include "shareformer/ring/fixed_point.h"
#include "shareformer/sharing/dealer.h"
#include "shareformer/transport/peer_link.h"

namespace shareformer {

// Execution context of one party: peer link, dealer, codec and ledger.
// Both parties must issue the same sequence of protocol calls.
class Session {
 public:
  // `input_seed` is common to both parties and drives the zero-sum masks
  // used for input sharing.
  Session(int party, PeerLink& link, DealerClient& dealer,
          FixedPointCodec codec, std::uint64_t input_seed);

  int party() const { return party_; }
  const FixedPointCodec& codec() const { return codec_; }
  PeerLink& link() { return link_; }
  CommLedger& ledger() { return link_.ledger(); }

  // One round. Throws ProtocolError when the peer sends a different number
  // of words than `expected`.
  std::vector<RingElement> Exchange(const Opening& opening, size_t expected);
  std::vector<RingElement> Fetch(const DealerRequest& request);

  // Party 1's half of the next zero-sum input mask (party 2 holds -mask).
  std::vector<RingElement> NextInputMask(size_t n);

  void CountLocalOps(std::uint64_t ops) { ledger().RecordLocalOps(ops); }

  class Scope {
   public:
    Scope(Session& session, std::string_view label)
        : scope_(session.ledger(), label) {}

   private:
    CommLedger::Scope scope_;
  };

 private:
  int party_;
  PeerLink& link_;
  DealerClient& dealer_;
  FixedPointCodec codec_;
  std::uint64_t input_seed_;
  std::uint64_t input_counter_ = 0;
};

}  // namespace shareformer

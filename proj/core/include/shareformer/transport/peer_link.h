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

#include <chrono>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "shareformer/ring/fixed_point.h"
#include "shareformer/transport/channel.h"
#include "shareformer/transport/ledger.h"

namespace shareformer {

// The only thing a party may put on the wire. Every factory names why the
// words are safe to disclose, so raw secrets cannot be sent by accident.
class Opening {
 public:
  // Own share of a value already masked by dealer randomness (Beaver
  // openings, bit-pair openings).
  static Opening Masked(std::vector<RingElement> words);
  // A value private to this party combined with a mask only this party and
  // the dealer know.
  static Opening MaskedPrivate(std::vector<RingElement> words);
  // Own share of a result that the protocol reveals on purpose.
  static Opening OutputShare(std::vector<RingElement> words);
  // Nothing to send (the receiving side of a one-way reveal).
  static Opening Empty() { return Opening({}); }

  std::span<const RingElement> words() const { return words_; }
  size_t size() const { return words_.size(); }

 private:
  explicit Opening(std::vector<RingElement> words) : words_(std::move(words)) {}
  std::vector<RingElement> words_;
};

// Synchronous link to the other computing party. Each Exchange is one
// communication round; a step counter catches desynchronised peers.
class PeerLink {
 public:
  PeerLink(Channel& channel, CommLedger& ledger,
           std::chrono::milliseconds timeout = std::chrono::seconds(30));

  // Agrees on protocol version and configuration; throws ProtocolError on
  // mismatch.
  void Handshake(std::uint64_t config_hash);

  std::vector<RingElement> Exchange(const Opening& opening);

  // Tells the peer to give up. Never throws.
  void Abort() noexcept;

  std::uint64_t step() const { return step_; }
  // Hash over every word exchanged; both parties compute the same value.
  std::uint64_t transcript_hash() const;
  CommLedger& ledger() { return ledger_; }

 private:
  Channel& channel_;
  CommLedger& ledger_;
  std::chrono::milliseconds timeout_;
  std::uint64_t step_ = 0;
  Fingerprint sent_;
  Fingerprint received_;
};

}  // namespace shareformer

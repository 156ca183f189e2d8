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

#include "shareformer/transport/peer_link.h"

#include <algorithm>

#include "shareformer/common/errors.h"

namespace shareformer {

Opening Opening::Masked(std::vector<RingElement> words) {
  return Opening(std::move(words));
}

Opening Opening::MaskedPrivate(std::vector<RingElement> words) {
  return Opening(std::move(words));
}

Opening Opening::OutputShare(std::vector<RingElement> words) {
  return Opening(std::move(words));
}

PeerLink::PeerLink(Channel& channel, CommLedger& ledger,
                   std::chrono::milliseconds timeout)
    : channel_(channel), ledger_(ledger), timeout_(timeout) {}

namespace {

void ThrowIfAbort(const WireMessage& m) {
  if (m.tag == MessageTag::kAbort) {
    throw ProtocolError("peer aborted the protocol");
  }
}

}  // namespace

void PeerLink::Handshake(std::uint64_t config_hash) {
  WireMessage hello{MessageTag::kHello, {kWireProtocolVersion, config_hash}};
  WireMessage reply = channel_.SendReceive(hello, timeout_);
  ThrowIfAbort(reply);
  if (reply.tag != MessageTag::kHello || reply.payload.size() != 2) {
    throw ProtocolError("expected a hello message from the peer");
  }
  if (reply.payload[0] != kWireProtocolVersion) {
    throw ProtocolError(internal::StrCat(
        "wire protocol version mismatch: ", kWireProtocolVersion, " vs ",
        reply.payload[0]));
  }
  if (reply.payload[1] != config_hash) {
    throw ProtocolError("configuration mismatch between the two parties");
  }
}

std::vector<RingElement> PeerLink::Exchange(const Opening& opening) {
  WireMessage out;
  out.tag = MessageTag::kData;
  out.payload.reserve(opening.size() + 1);
  out.payload.push_back(step_);
  out.payload.insert(out.payload.end(), opening.words().begin(),
                     opening.words().end());

  WireMessage in = channel_.SendReceive(out, timeout_);
  ThrowIfAbort(in);
  if (in.tag != MessageTag::kData || in.payload.empty()) {
    throw ProtocolError("unexpected message while exchanging shares");
  }
  if (in.payload[0] != step_) {
    throw ProtocolError(internal::StrCat("peer is at step ", in.payload[0],
                                         ", expected ", step_));
  }
  sent_.Update(step_);
  for (RingElement w : opening.words()) sent_.Update(w);
  std::vector<RingElement> received(in.payload.begin() + 1, in.payload.end());
  received_.Update(step_);
  for (RingElement w : received) received_.Update(w);

  ledger_.RecordRound(opening.size() * sizeof(RingElement));
  ++step_;
  return received;
}

std::uint64_t PeerLink::transcript_hash() const {
  const std::uint64_t a = sent_.value(), b = received_.value();
  const auto [lo, hi] = std::minmax(a, b);
  Fingerprint f;
  f.Update(lo);
  f.Update(hi);
  return f.value();
}

void PeerLink::Abort() noexcept {
  try {
    channel_.Send(WireMessage{MessageTag::kAbort, {}});
  } catch (...) {
  }
}

}  // namespace shareformer

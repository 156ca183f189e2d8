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

#include <array>
#include <chrono>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>

#include "shareformer/protocols/session.h"
#include "shareformer/sharing/dealer.h"
#include "shareformer/transport/channel.h"
#include "shareformer/transport/ledger.h"
#include "shareformer/transport/peer_link.h"

namespace shareformer {

struct LocalRunOptions {
  std::uint64_t dealer_seed = 0x5eed;
  std::uint64_t input_seed = 0x1a7e;
  FixedPointCodec codec = FixedPointCodec();
  std::chrono::milliseconds timeout{std::chrono::seconds(60)};
};

template <typename R>
struct PartyOutcome {
  R value;
  CommLedger ledger;
  std::uint64_t transcript = 0;
  std::uint64_t correlations = 0;
};

// Runs `fn(Session&)` for both parties on two threads connected by an
// in-process channel, each with its own ledger and local dealer. If either
// party throws, the other is told to abort and the first error is rethrown.
template <typename Fn>
auto RunLocal(const LocalRunOptions& options, Fn&& fn)
    -> std::array<PartyOutcome<std::invoke_result_t<Fn&, Session&>>, 2> {
  using R = std::invoke_result_t<Fn&, Session&>;
  auto [c1, c2] = MakeInProcessChannelPair();
  std::array<std::unique_ptr<Channel>, 2> channels{std::move(c1),
                                                   std::move(c2)};
  std::array<std::optional<R>, 2> values;
  std::array<CommLedger, 2> ledgers;
  std::array<std::uint64_t, 2> transcripts{};
  std::array<std::uint64_t, 2> issued{};
  std::array<std::exception_ptr, 2> errors;

  auto body = [&](int index) {
    const int party = index + 1;
    PeerLink link(*channels[index], ledgers[index], options.timeout);
    try {
      LocalDealer dealer(options.dealer_seed, party);
      Session session(party, link, dealer, options.codec, options.input_seed);
      values[index].emplace(fn(session));
      transcripts[index] = link.transcript_hash();
      issued[index] = dealer.issued();
    } catch (...) {
      errors[index] = std::current_exception();
      link.Abort();
    }
  };
  std::thread other(body, 1);
  body(0);
  other.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return {PartyOutcome<R>{std::move(*values[0]), std::move(ledgers[0]),
                          transcripts[0], issued[0]},
          PartyOutcome<R>{std::move(*values[1]), std::move(ledgers[1]),
                          transcripts[1], issued[1]}};
}

}  // namespace shareformer

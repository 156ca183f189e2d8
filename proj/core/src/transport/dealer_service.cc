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

#include "shareformer/transport/dealer_service.h"

#include <exception>
#include <thread>
#include <vector>

#include "shareformer/common/errors.h"

namespace shareformer {

RemoteDealer::RemoteDealer(std::unique_ptr<Channel> channel, int party,
                           std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), party_(party), timeout_(timeout) {
  SF_ENFORCE(channel_ != nullptr, "dealer channel is null");
  SF_ENFORCE(party == 1 || party == 2, "party must be 1 or 2, got ", party);
}

std::vector<RingElement> RemoteDealer::Fetch(const DealerRequest& request) {
  WireMessage msg{MessageTag::kDealerRequest,
                  {static_cast<std::uint64_t>(party_)}};
  const auto words = request.Serialize();
  msg.payload.insert(msg.payload.end(), words.begin(), words.end());
  WireMessage reply = channel_->SendReceive(msg, timeout_);
  if (reply.tag == MessageTag::kAbort) {
    throw DealerError("dealer rejected the request");
  }
  if (reply.tag != MessageTag::kDealerResponse) {
    throw DealerError("unexpected message from the dealer");
  }
  if (reply.payload.size() != request.PayloadSize(party_)) {
    throw DealerError(internal::StrCat("dealer returned ", reply.payload.size(),
                                       " elements, expected ",
                                       request.PayloadSize(party_)));
  }
  return std::move(reply.payload);
}

std::uint64_t ServeDealerConnection(Channel& channel, std::uint64_t seed,
                                    std::chrono::milliseconds idle_timeout) {
  std::uint64_t index = 0;
  while (true) {
    WireMessage msg;
    try {
      msg = channel.Receive(idle_timeout);
    } catch (const ConnectionClosed&) {
      return index;
    }
    if (msg.tag == MessageTag::kAbort) return index;
    try {
      SF_ENFORCE(msg.tag == MessageTag::kDealerRequest && !msg.payload.empty(),
                 "expected a dealer request");
      const int party = static_cast<int>(msg.payload[0]);
      SF_ENFORCE(party == 1 || party == 2, "bad party in dealer request");
      const DealerRequest request = DealerRequest::Deserialize(
          std::span<const std::uint64_t>(msg.payload).subspan(1));
      WireMessage reply{MessageTag::kDealerResponse,
                        GenerateCorrelation(seed, index, request, party)};
      ++index;
      channel.Send(reply);
    } catch (const ContractViolation&) {
      channel.Send(WireMessage{MessageTag::kAbort, {}});
      throw;
    }
  }
}

void RunDealerServer(TcpListener& listener, std::uint64_t seed, int connections,
                     std::chrono::milliseconds timeout) {
  SF_ENFORCE(connections > 0, "connections must be positive");
  std::vector<std::unique_ptr<TcpChannel>> channels(connections);
  std::vector<std::exception_ptr> errors(connections);
  std::vector<std::thread> threads;
  for (int i = 0; i < connections; ++i) {
    try {
      channels[i] = listener.Accept(timeout);
    } catch (...) {
      errors[i] = std::current_exception();
      break;
    }
    threads.emplace_back([&, i] {
      try {
        ServeDealerConnection(*channels[i], seed, timeout);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace shareformer

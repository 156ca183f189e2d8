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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>

#include "shareformer/sharing/dealer.h"
#include "shareformer/transport/channel.h"

namespace shareformer {

// Dealer client that asks a dealer process over a channel.
class RemoteDealer : public DealerClient {
 public:
  RemoteDealer(std::unique_ptr<Channel> channel, int party,
               std::chrono::milliseconds timeout = std::chrono::seconds(60));

  int party() const override { return party_; }
  std::vector<RingElement> Fetch(const DealerRequest& request) override;

 private:
  std::unique_ptr<Channel> channel_;
  int party_;
  std::chrono::milliseconds timeout_;
};

// Answers requests on one connection until the client hangs up. The i-th
// request on a connection receives correlation index i, so two parties with
// identical request sequences receive matching halves. Returns the number of
// requests served.
std::uint64_t ServeDealerConnection(Channel& channel, std::uint64_t seed,
                                    std::chrono::milliseconds idle_timeout);

// Accepts `connections` clients (one per party) and serves them
// concurrently. Blocks until all connections finish.
void RunDealerServer(TcpListener& listener, std::uint64_t seed, int connections,
                     std::chrono::milliseconds timeout);

}  // namespace shareformer

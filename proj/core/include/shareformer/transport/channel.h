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
#include <memory>
#include <string>
#include <utility>

#include "shareformer/common/errors.h"
#include "shareformer/transport/wire.h"

namespace shareformer {

// The remote end closed the connection cleanly.
class ConnectionClosed : public TransportError {
 public:
  using TransportError::TransportError;
};

// A bidirectional, ordered message pipe to exactly one peer. Not thread-safe.
class Channel {
 public:
  virtual ~Channel() = default;

  virtual void Send(const WireMessage& message) = 0;
  // Throws TransportError on timeout, ConnectionClosed on orderly shutdown.
  virtual WireMessage Receive(std::chrono::milliseconds timeout) = 0;
  // Sends and receives as one step. Implementations that can block on send
  // must overlap the two directions.
  virtual WireMessage SendReceive(const WireMessage& message,
                                  std::chrono::milliseconds timeout) {
    Send(message);
    return Receive(timeout);
  }
};

// Two connected in-memory endpoints. Frames go through the wire encoding so
// both transports see byte-identical traffic.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>>
MakeInProcessChannelPair();

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // "host:port"; throws ContractViolation on malformed input.
  static Endpoint Parse(const std::string& text);
  std::string ToString() const;
};

class TcpChannel : public Channel {
 public:
  explicit TcpChannel(int fd);
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  // Retries until `retry_for` elapses so peers may start in any order.
  static std::unique_ptr<TcpChannel> Connect(
      const Endpoint& endpoint, std::chrono::milliseconds retry_for);

  void Send(const WireMessage& message) override;
  WireMessage Receive(std::chrono::milliseconds timeout) override;
  WireMessage SendReceive(const WireMessage& message,
                          std::chrono::milliseconds timeout) override;

 private:
  void WriteAll(const std::uint8_t* data, size_t size);
  void ReadAll(std::uint8_t* data, size_t size,
               std::chrono::steady_clock::time_point deadline);

  int fd_;
};

class TcpListener {
 public:
  explicit TcpListener(const Endpoint& endpoint);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  // The bound port (useful when listening on port 0).
  std::uint16_t port() const { return port_; }
  std::unique_ptr<TcpChannel> Accept(std::chrono::milliseconds timeout);

 private:
  int fd_;
  std::uint16_t port_;
};

}  // namespace shareformer

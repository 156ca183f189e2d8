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

#include "shareformer/transport/channel.h"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>
#include <vector>

namespace shareformer {
namespace {

// Shared state of an in-process pair: one mailbox per direction.
struct Mailboxes {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::vector<std::uint8_t>> box[2];
  bool closed[2] = {false, false};
};

class InProcessChannel : public Channel {
 public:
  InProcessChannel(std::shared_ptr<Mailboxes> boxes, int side)
      : boxes_(std::move(boxes)), side_(side) {}

  ~InProcessChannel() override {
    std::lock_guard<std::mutex> lock(boxes_->mu);
    boxes_->closed[side_] = true;
    boxes_->cv.notify_all();
  }

  void Send(const WireMessage& message) override {
    auto frame = EncodeFrame(message);
    std::lock_guard<std::mutex> lock(boxes_->mu);
    boxes_->box[1 - side_].push_back(std::move(frame));
    boxes_->cv.notify_all();
  }

  WireMessage Receive(std::chrono::milliseconds timeout) override {
    std::unique_lock<std::mutex> lock(boxes_->mu);
    auto& inbox = boxes_->box[side_];
    const bool ready = boxes_->cv.wait_for(lock, timeout, [&] {
      return !inbox.empty() || boxes_->closed[1 - side_];
    });
    if (!inbox.empty()) {
      auto frame = std::move(inbox.front());
      inbox.pop_front();
      lock.unlock();
      return DecodeFrame(frame);
    }
    if (ready) throw ConnectionClosed("in-process peer closed the channel");
    throw TransportError(internal::StrCat("no message from peer within ",
                                          timeout.count(), " ms"));
  }

 private:
  std::shared_ptr<Mailboxes> boxes_;
  int side_;
};

[[noreturn]] void ThrowErrno(const char* what) {
  throw TransportError(internal::StrCat(what, ": ", std::strerror(errno)));
}

sockaddr_in Resolve(const Endpoint& endpoint) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* result = nullptr;
  const int rc = getaddrinfo(endpoint.host.c_str(), nullptr, &hints, &result);
  if (rc != 0 || result == nullptr) {
    throw TransportError(internal::StrCat("cannot resolve ", endpoint.host,
                                          ": ", gai_strerror(rc)));
  }
  sockaddr_in addr = *reinterpret_cast<sockaddr_in*>(result->ai_addr);
  freeaddrinfo(result);
  addr.sin_port = htons(endpoint.port);
  return addr;
}

void SetNoDelay(int fd) {
  int one = 1;
  setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>>
MakeInProcessChannelPair() {
  auto boxes = std::make_shared<Mailboxes>();
  return {std::make_unique<InProcessChannel>(boxes, 0),
          std::make_unique<InProcessChannel>(boxes, 1)};
}

Endpoint Endpoint::Parse(const std::string& text) {
  const auto colon = text.rfind(':');
  SF_ENFORCE(colon != std::string::npos && colon + 1 < text.size(),
             "endpoint must look like host:port, got '", text, "'");
  Endpoint e;
  e.host = colon == 0 ? "127.0.0.1" : text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  int value = 0;
  for (char ch : port) {
    SF_ENFORCE(ch >= '0' && ch <= '9', "bad port in '", text, "'");
    value = value * 10 + (ch - '0');
    SF_ENFORCE(value <= 65535, "port out of range in '", text, "'");
  }
  e.port = static_cast<std::uint16_t>(value);
  return e;
}

std::string Endpoint::ToString() const {
  return internal::StrCat(host, ":", port);
}

TcpChannel::TcpChannel(int fd) : fd_(fd) { SetNoDelay(fd_); }

TcpChannel::~TcpChannel() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpChannel::Connect(
    const Endpoint& endpoint, std::chrono::milliseconds retry_for) {
  const sockaddr_in addr = Resolve(endpoint);
  const auto deadline = std::chrono::steady_clock::now() + retry_for;
  while (true) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) ThrowErrno("socket");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) ==
        0) {
      return std::make_unique<TcpChannel>(fd);
    }
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      throw TransportError(
          internal::StrCat("could not connect to ", endpoint.ToString()));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

void TcpChannel::WriteAll(const std::uint8_t* data, size_t size) {
  while (size > 0) {
    const ssize_t n = ::send(fd_, data, size, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("send");
    }
    data += n;
    size -= static_cast<size_t>(n);
  }
}

void TcpChannel::ReadAll(std::uint8_t* data, size_t size,
                         std::chrono::steady_clock::time_point deadline) {
  size_t done = 0;
  while (done < size) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw TransportError("timed out waiting for peer");
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (ready < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("poll");
    }
    if (ready == 0) continue;
    const ssize_t n = ::recv(fd_, data + done, size - done, 0);
    if (n == 0) throw ConnectionClosed("peer closed the TCP connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      ThrowErrno("recv");
    }
    done += static_cast<size_t>(n);
  }
}

void TcpChannel::Send(const WireMessage& message) {
  const auto frame = EncodeFrame(message);
  WriteAll(frame.data(), frame.size());
}

WireMessage TcpChannel::Receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::uint8_t header[kFrameHeaderBytes];
  ReadAll(header, sizeof(header), deadline);
  const FrameHeader h = DecodeHeader(header);
  std::vector<std::uint8_t> payload(h.payload_bytes);
  ReadAll(payload.data(), payload.size(), deadline);
  return {h.tag, DecodePayload(payload)};
}

WireMessage TcpChannel::SendReceive(const WireMessage& message,
                                    std::chrono::milliseconds timeout) {
  const auto frame = EncodeFrame(message);
  // Small frames fit in the socket buffer; large ones need a concurrent
  // writer or both peers could block in send().
  if (frame.size() <= 64 * 1024) {
    WriteAll(frame.data(), frame.size());
    return Receive(timeout);
  }
  std::exception_ptr send_error;
  std::thread writer([&] {
    try {
      WriteAll(frame.data(), frame.size());
    } catch (...) {
      send_error = std::current_exception();
    }
  });
  WireMessage reply;
  try {
    reply = Receive(timeout);
  } catch (...) {
    ::shutdown(fd_, SHUT_RDWR);
    writer.join();
    throw;
  }
  writer.join();
  if (send_error) std::rethrow_exception(send_error);
  return reply;
}

TcpListener::TcpListener(const Endpoint& endpoint) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) ThrowErrno("socket");
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = Resolve(endpoint);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    ThrowErrno("bind");
  }
  if (::listen(fd_, 8) != 0) ThrowErrno("listen");
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpListener::Accept(
    std::chrono::milliseconds timeout) {
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
  if (ready <= 0) throw TransportError("timed out waiting for a connection");
  const int fd = ::accept(fd_, nullptr, nullptr);
  if (fd < 0) ThrowErrno("accept");
  return std::make_unique<TcpChannel>(fd);
}

}  // namespace shareformer

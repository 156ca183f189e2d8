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
#include <span>
#include <vector>

namespace shareformer {

// Frame layout, all little-endian:
//   u32 payload length in bytes | u8 tag | payload (u64 words)
enum class MessageTag : std::uint8_t {
  kData = 1,            // [step, ring elements...] between the two parties
  kHello = 2,           // [protocol version, config hash]
  kDealerRequest = 3,   // [party, request words...]
  kDealerResponse = 4,  // [ring elements...]
  kAbort = 5,           // [] peer gave up; the receiver fails fast
};

inline constexpr size_t kFrameHeaderBytes = 5;
inline constexpr std::uint32_t kMaxPayloadBytes = 1u << 30;
inline constexpr std::uint64_t kWireProtocolVersion = 1;

struct WireMessage {
  MessageTag tag = MessageTag::kData;
  std::vector<std::uint64_t> payload;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

struct FrameHeader {
  std::uint32_t payload_bytes = 0;
  MessageTag tag = MessageTag::kData;
};

bool IsKnownTag(std::uint8_t tag);

std::vector<std::uint8_t> EncodeFrame(const WireMessage& message);

// Throws TransportError for unknown tags, oversize frames, or payload
// lengths that are not a whole number of words.
FrameHeader DecodeHeader(std::span<const std::uint8_t> header);
std::vector<std::uint64_t> DecodePayload(std::span<const std::uint8_t> bytes);
// Whole frame; the length prefix must match the remaining bytes exactly.
WireMessage DecodeFrame(std::span<const std::uint8_t> frame);

// 64-bit FNV-1a, used for transcript and configuration fingerprints.
class Fingerprint {
 public:
  void Update(std::span<const std::uint8_t> bytes);
  void Update(std::uint64_t word);
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace shareformer

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

#include "shareformer/transport/wire.h"

#include "shareformer/common/errors.h"

namespace shareformer {

bool IsKnownTag(std::uint8_t tag) { return tag >= 1 && tag <= 5; }

std::vector<std::uint8_t> EncodeFrame(const WireMessage& message) {
  const size_t payload_bytes = message.payload.size() * 8;
  if (payload_bytes > kMaxPayloadBytes) {
    throw ContractViolation("frame payload exceeds the maximum frame size");
  }
  std::vector<std::uint8_t> out(kFrameHeaderBytes + payload_bytes);
  const auto len = static_cast<std::uint32_t>(payload_bytes);
  for (int i = 0; i < 4; ++i)
    out[i] = static_cast<std::uint8_t>(len >> (8 * i));
  out[4] = static_cast<std::uint8_t>(message.tag);
  std::uint8_t* p = out.data() + kFrameHeaderBytes;
  for (std::uint64_t w : message.payload) {
    for (int i = 0; i < 8; ++i) *p++ = static_cast<std::uint8_t>(w >> (8 * i));
  }
  return out;
}

FrameHeader DecodeHeader(std::span<const std::uint8_t> header) {
  if (header.size() < kFrameHeaderBytes) {
    throw ProtocolError("truncated frame header");
  }
  FrameHeader h;
  for (int i = 3; i >= 0; --i)
    h.payload_bytes = (h.payload_bytes << 8) | header[i];
  if (!IsKnownTag(header[4])) {
    throw ProtocolError(
        internal::StrCat("unknown message tag ", static_cast<int>(header[4])));
  }
  if (h.payload_bytes > kMaxPayloadBytes || h.payload_bytes % 8 != 0) {
    throw ProtocolError(
        internal::StrCat("invalid payload length ", h.payload_bytes));
  }
  h.tag = static_cast<MessageTag>(header[4]);
  return h;
}

std::vector<std::uint64_t> DecodePayload(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 8 != 0) throw ProtocolError("partial payload word");
  std::vector<std::uint64_t> words(bytes.size() / 8);
  for (size_t w = 0; w < words.size(); ++w) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[8 * w + i];
    words[w] = v;
  }
  return words;
}

WireMessage DecodeFrame(std::span<const std::uint8_t> frame) {
  const FrameHeader h = DecodeHeader(frame);
  if (frame.size() - kFrameHeaderBytes != h.payload_bytes) {
    throw ProtocolError(internal::StrCat("length prefix says ", h.payload_bytes,
                                         " bytes but frame carries ",
                                         frame.size() - kFrameHeaderBytes));
  }
  return {h.tag, DecodePayload(frame.subspan(kFrameHeaderBytes))};
}

void Fingerprint::Update(std::span<const std::uint8_t> bytes) {
  for (std::uint8_t b : bytes) {
    state_ ^= b;
    state_ *= 0x100000001b3ULL;
  }
}

void Fingerprint::Update(std::uint64_t word) {
  std::uint8_t bytes[8];
  for (int i = 0; i < 8; ++i)
    bytes[i] = static_cast<std::uint8_t>(word >> (8 * i));
  Update(bytes);
}

}  // namespace shareformer

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

#include "shareformer/sharing/prg.h"

#include <sodium.h>

#include <cstring>
#include <mutex>

#include "shareformer/common/errors.h"

namespace shareformer {
namespace {

void EnsureSodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw Error("libsodium initialisation failed");
  });
}

void StoreLe64(unsigned char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

RingElement LoadLe64(const unsigned char* in) {
  RingElement v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

constexpr char kKeyDomain[] = "shareformer.prg.v1";

}  // namespace

Prg::Prg(std::uint64_t seed, std::uint64_t index, std::uint32_t stream) {
  EnsureSodium();
  unsigned char seed_bytes[8];
  StoreLe64(seed_bytes, seed);
  crypto_generichash_state state;
  crypto_generichash_init(&state, nullptr, 0, key_.size());
  crypto_generichash_update(&state,
                            reinterpret_cast<const unsigned char*>(kKeyDomain),
                            sizeof(kKeyDomain) - 1);
  crypto_generichash_update(&state, seed_bytes, sizeof(seed_bytes));
  crypto_generichash_final(&state, key_.data(), key_.size());

  StoreLe64(nonce_.data(), index);
  for (int i = 0; i < 4; ++i) {
    nonce_[8 + i] = static_cast<unsigned char>(stream >> (8 * i));
  }
}

void Prg::Fill(std::span<RingElement> out) {
  size_t pos = 0;
  // Drain whatever is buffered first so interleaved Next/Fill stay consistent.
  while (pos < out.size() && buffer_pos_ < buffer_.size()) {
    out[pos++] = buffer_[buffer_pos_++];
  }
  const size_t remaining = out.size() - pos;
  const size_t blocks = remaining / 8;  // 64-byte ChaCha blocks
  if (blocks > 0) {
    std::vector<unsigned char> bytes(blocks * 64, 0);
    crypto_stream_chacha20_ietf_xor_ic(bytes.data(), bytes.data(), bytes.size(),
                                       nonce_.data(), block_counter_,
                                       key_.data());
    block_counter_ += static_cast<std::uint32_t>(blocks);
    for (size_t i = 0; i < blocks * 8; ++i) {
      out[pos++] = LoadLe64(bytes.data() + 8 * i);
    }
  }
  while (pos < out.size()) out[pos++] = Next();
}

RingElement Prg::Next() {
  if (buffer_pos_ == buffer_.size()) Refill();
  return buffer_[buffer_pos_++];
}

std::vector<RingElement> Prg::Draw(size_t n) {
  std::vector<RingElement> out(n);
  Fill(out);
  return out;
}

void Prg::Refill() {
  unsigned char bytes[64 * 8] = {};
  crypto_stream_chacha20_ietf_xor_ic(bytes, bytes, sizeof(bytes), nonce_.data(),
                                     block_counter_, key_.data());
  block_counter_ += 8;
  for (size_t i = 0; i < buffer_.size(); ++i) {
    buffer_[i] = LoadLe64(bytes + 8 * i);
  }
  buffer_pos_ = 0;
}

}  // namespace shareformer

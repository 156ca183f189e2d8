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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shareformer/kd/train.h"
#include "shareformer/nn/model_config.h"
#include "shareformer/nn/weights.h"
#include "shareformer/transport/latency_model.h"
#include "shareformer/transport/ledger.h"

namespace shareformer::cli {

using Json = nlohmann::ordered_json;

// Both parties derive the dealer seed and the shared input-mask key from the
// single --seed, so a run is reproducible from (config, seed).
struct SeedPlan {
  std::uint64_t dealer_seed = 0;
  std::uint64_t input_seed = 0;
  static SeedPlan From(std::uint64_t seed);
};

std::string Hex(std::uint64_t v);

Json ToJson(const NetworkParams& net);
// Totals and per-label counters with their simulated time estimates.
Json LedgerReport(const CommLedger& ledger, const NetworkParams& net);

void WriteReport(const Json& report, const std::string& path);

// Replays the two-party addition of 1 and 2 with fixed masks. Returns true
// when every intermediate value and both reveals are as expected.
bool DemoAdd(std::ostream& out);

struct BenchOptions {
  std::string function = "softmax";  // gelu, softmax, matmul or forward
  int seq = 16;
  ModelConfig model;
  std::uint64_t seed = 1;
  NetworkParams net;
};

// Runs every variant of the function in-process and reports counts,
// estimated times and ratios against the exact variant.
Json Bench(const BenchOptions& options);

struct InferOptions {
  std::string party = "local";  // "1", "2" or "local"
  std::string peer = "127.0.0.1:7300";
  std::string dealer;  // host:port of a dealer process; empty embeds one
  std::uint64_t seed = 1;
  ModelConfig config;
  std::optional<TransformerWeights> weights;  // required for "2" and "local"
  std::vector<int> tokens;                    // required for "1" and "local"
  int seq = 0;                                // public sequence length
  int length = 0;                             // public count of unpadded tokens
  NetworkParams net;
  std::chrono::milliseconds timeout{std::chrono::seconds(60)};
};

struct InferInput {
  std::vector<int> tokens;
  int length = 0;
};
InferInput LoadInferInput(const std::string& path);

// Covers the model configuration, the public input shape and the seed.
std::uint64_t InferConfigHash(const ModelConfig& config, int seq, int length,
                              std::uint64_t seed);

Json Infer(const InferOptions& options);

void ServeDealer(const std::string& listen, std::uint64_t seed, int connections,
                 std::chrono::milliseconds timeout);

struct ProfileOptions {
  ModelConfig model;
  int seq = 0;  // 0 selects model.max_seq
  std::uint64_t seed = 1;
  std::optional<TransformerWeights> weights;  // random when absent
  NetworkParams net;
};

Json Profile(const ProfileOptions& options);

kd::AblationConfig AblationConfigFromJson(std::string_view text);
Json ToJson(const kd::AblationConfig& config);

struct DistillOptions {
  kd::AblationConfig config;
  std::string out_dir;  // teacher.sfw and student.sfw; empty skips writing
};

// Renders the "ablation" rows of a distill report.
std::string FormatAblationTable(const Json& rows);
Json Distill(const DistillOptions& options);

}  // namespace shareformer::cli

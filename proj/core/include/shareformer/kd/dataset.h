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
#include <string>
#include <string_view>
#include <vector>

#include "shareformer/kd/model.h"

namespace shareformer::kd {

inline constexpr int kClsToken = 0;
inline constexpr int kPadToken = 1;

// Synthetic sequence classification. Content tokens t >= classes belong to
// group t % classes and the label is the group of the last real token, so a
// model must locate the end of a variable-length sequence.
//
// The pretraining split is a larger disjoint sample from the same
// generator. Only the teacher sees it, standing in for the pretrained
// weights a model provider starts from; students use the task split alone.
struct ToyTaskParams {
  std::uint64_t seed = 2026;
  int train_size = 2000;
  int test_size = 500;
  int pretrain_size = 20000;
  int vocab = 64;
  int seq = 16;
  int classes = 4;
  int min_length = 8;  // including the leading class token
};

struct Example {
  std::vector<int> tokens;  // padded to seq, tokens[0] == kClsToken
  int length = 0;
  int label = 0;
};

struct Dataset {
  ToyTaskParams params;
  std::vector<Example> train;
  std::vector<Example> test;
  std::vector<Example> pretrain;
};

// Labelling rule over tokens[1, length).
int ToyLabel(std::span<const int> tokens, int length, int classes);

Dataset MakeToyDataset(const ToyTaskParams& params);

Batch MakeBatch(std::span<const Example> examples,
                std::span<const size_t> indices, int seq);
Batch MakeBatch(std::span<const Example> examples, int seq);

std::string ToJson(const ToyTaskParams& params);
ToyTaskParams ToyTaskParamsFromJson(std::string_view text);

}  // namespace shareformer::kd

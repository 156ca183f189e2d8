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

#include "shareformer/kd/dataset.h"

#include <numeric>
#include <random>

#include "json.hpp"
#include "shareformer/common/errors.h"

namespace shareformer::kd {

int ToyLabel(std::span<const int> tokens, int length, int classes) {
  SF_ENFORCE(length >= 2 && static_cast<size_t>(length) <= tokens.size(),
             "sequence needs at least one content token");
  const int last = tokens[length - 1];
  SF_ENFORCE(last >= classes, "token ", last, " is not a content token");
  return last % classes;
}

Dataset MakeToyDataset(const ToyTaskParams& p) {
  SF_ENFORCE(
      p.classes >= 2 && p.vocab >= 2 * p.classes && p.vocab % p.classes == 0,
      "vocab must be a multiple of classes with room for content tokens");
  SF_ENFORCE(p.classes > kPadToken,
             "special tokens must not be content tokens");
  SF_ENFORCE(p.min_length >= 2 && p.min_length <= p.seq, "bad length range");
  SF_ENFORCE(p.train_size >= 1 && p.test_size >= 1 && p.pretrain_size >= 0,
             "bad split sizes");
  std::mt19937_64 rng(p.seed);
  std::uniform_int_distribution<int> content(p.classes, p.vocab - 1);
  std::uniform_int_distribution<int> length(p.min_length, p.seq);

  auto make = [&] {
    Example e;
    e.length = length(rng);
    e.tokens.assign(p.seq, kPadToken);
    e.tokens[0] = kClsToken;
    for (int i = 1; i < e.length; ++i) e.tokens[i] = content(rng);
    e.label = ToyLabel(e.tokens, e.length, p.classes);
    return e;
  };
  Dataset d;
  d.params = p;
  for (int i = 0; i < p.train_size; ++i) d.train.push_back(make());
  for (int i = 0; i < p.test_size; ++i) d.test.push_back(make());
  for (int i = 0; i < p.pretrain_size; ++i) d.pretrain.push_back(make());
  return d;
}

Batch MakeBatch(std::span<const Example> examples,
                std::span<const size_t> indices, int seq) {
  Batch b;
  b.batch = static_cast<int>(indices.size());
  b.seq = seq;
  for (size_t i : indices) {
    SF_ENFORCE(i < examples.size(), "example index out of range");
    const Example& e = examples[i];
    SF_ENFORCE(e.tokens.size() == static_cast<size_t>(seq),
               "example length mismatch");
    b.tokens.insert(b.tokens.end(), e.tokens.begin(), e.tokens.end());
    for (int t = 0; t < seq; ++t) b.keep.push_back(t < e.length ? 1.0 : 0.0);
    b.labels.push_back(e.label);
  }
  return b;
}

Batch MakeBatch(std::span<const Example> examples, int seq) {
  std::vector<size_t> all(examples.size());
  std::iota(all.begin(), all.end(), 0);
  return MakeBatch(examples, all, seq);
}

std::string ToJson(const ToyTaskParams& p) {
  nlohmann::ordered_json j;
  j["classes"] = p.classes;
  j["min_length"] = p.min_length;
  j["pretrain_size"] = p.pretrain_size;
  j["seed"] = p.seed;
  j["seq"] = p.seq;
  j["test_size"] = p.test_size;
  j["train_size"] = p.train_size;
  j["vocab"] = p.vocab;
  return j.dump(2);
}

ToyTaskParams ToyTaskParamsFromJson(std::string_view text) {
  ToyTaskParams p;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    p.classes = j.value("classes", p.classes);
    p.min_length = j.value("min_length", p.min_length);
    p.pretrain_size = j.value("pretrain_size", p.pretrain_size);
    p.seed = j.value("seed", p.seed);
    p.seq = j.value("seq", p.seq);
    p.test_size = j.value("test_size", p.test_size);
    p.train_size = j.value("train_size", p.train_size);
    p.vocab = j.value("vocab", p.vocab);
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("malformed task document: ") +
                            e.what());
  }
  return p;
}

}  // namespace shareformer::kd

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

#include "shareformer/nn/model_config.h"

#include "json.hpp"
#include "shareformer/common/errors.h"
#include "shareformer/transport/wire.h"

namespace shareformer {

std::string_view ToString(GeluVariant v) {
  return v == GeluVariant::kExact ? "exact" : "quad";
}

std::string_view ToString(SoftmaxVariant v) {
  switch (v) {
    case SoftmaxVariant::kExact:
      return "exact";
    case SoftmaxVariant::kTwoRelu:
      return "2relu";
    case SoftmaxVariant::kTwoQuad:
      return "2quad";
  }
  return "?";
}

GeluVariant ParseGeluVariant(std::string_view name) {
  if (name == "exact") return GeluVariant::kExact;
  if (name == "quad") return GeluVariant::kQuad;
  throw ContractViolation(
      internal::StrCat("unknown GeLU variant '", name, "'"));
}

SoftmaxVariant ParseSoftmaxVariant(std::string_view name) {
  if (name == "exact") return SoftmaxVariant::kExact;
  if (name == "2relu" || name == "two_relu") return SoftmaxVariant::kTwoRelu;
  if (name == "2quad" || name == "two_quad") return SoftmaxVariant::kTwoQuad;
  throw ContractViolation(
      internal::StrCat("unknown softmax variant '", name, "'"));
}

std::string ApproximationSpec::Name() const {
  return internal::StrCat(ToString(gelu), "+", ToString(softmax));
}

void ModelConfig::Validate() const {
  SF_ENFORCE(layers >= 0, "layers must be >= 0");
  SF_ENFORCE(hidden >= 1 && heads >= 1 && ffn_mult >= 1 && vocab >= 1 &&
                 max_seq >= 1 && classes >= 1,
             "model dimensions must be >= 1");
  SF_ENFORCE(hidden % heads == 0, "hidden (", hidden,
             ") must be divisible by heads (", heads, ")");
  SF_ENFORCE(approx.two_quad_c >= 0, "two_quad_c must be non-negative");
}

std::string ToJson(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["approx"] = {{"gelu", ToString(c.approx.gelu)},
                 {"softmax", ToString(c.approx.softmax)},
                 {"two_quad_c", c.approx.two_quad_c}};
  j["classes"] = c.classes;
  j["ffn_mult"] = c.ffn_mult;
  j["heads"] = c.heads;
  j["hidden"] = c.hidden;
  j["layers"] = c.layers;
  j["max_seq"] = c.max_seq;
  j["vocab"] = c.vocab;
  return j.dump();
}

ModelConfig ModelConfigFromJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(internal::StrCat("bad model config: ", e.what()));
  }
  ModelConfig c;
  try {
    c.layers = j.value("layers", c.layers);
    c.hidden = j.value("hidden", c.hidden);
    c.heads = j.value("heads", c.heads);
    c.ffn_mult = j.value("ffn_mult", c.ffn_mult);
    c.vocab = j.value("vocab", c.vocab);
    c.max_seq = j.value("max_seq", c.max_seq);
    c.classes = j.value("classes", c.classes);
    if (j.contains("approx")) {
      const auto& a = j["approx"];
      c.approx.gelu = ParseGeluVariant(a.value("gelu", std::string("exact")));
      c.approx.softmax =
          ParseSoftmaxVariant(a.value("softmax", std::string("exact")));
      c.approx.two_quad_c = a.value("two_quad_c", c.approx.two_quad_c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(internal::StrCat("bad model config: ", e.what()));
  }
  c.Validate();
  return c;
}

std::uint64_t HashBytes(std::string_view bytes) {
  Fingerprint f;
  f.Update(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()),
                     bytes.size()));
  return f.value();
}

}  // namespace shareformer

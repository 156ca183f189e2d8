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

#include "shareformer/nn/weights.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "shareformer/common/errors.h"

namespace shareformer {

namespace {

constexpr char kMagic[4] = {'S', 'F', 'M', 'W'};

class Writer {
 public:
  void U32(std::uint32_t v) { Le(v, 4); }
  void U64(std::uint64_t v) { Le(v, 8); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Bytes(const std::string& s) {
    U32(static_cast<std::uint32_t>(s.size()));
    buf.insert(buf.end(), s.begin(), s.end());
  }
  std::string buf;

 private:
  void Le(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i)
      buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
};

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  std::uint32_t U32() { return static_cast<std::uint32_t>(Le(4)); }
  std::uint64_t U64() { return Le(8); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Bytes() {
    const std::uint32_t n = U32();
    Need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string Raw(size_t n) {
    Need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void Need(size_t n) {
    if (data_.size() - pos_ < n) throw Error("weight file is truncated");
  }
  std::uint64_t Le(int n) {
    Need(static_cast<size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    }
    pos_ += static_cast<size_t>(n);
    return v;
  }
  std::string data_;
  size_t pos_ = 0;
};

}  // namespace

std::string LayerParam(int layer, const std::string& suffix) {
  return "layer" + std::to_string(layer) + "." + suffix;
}

std::vector<std::pair<std::string, Shape>> ParameterShapes(
    const ModelConfig& c) {
  c.Validate();
  const size_t h = c.hidden, f = c.ffn_dim();
  std::vector<std::pair<std::string, Shape>> out;
  out.emplace_back("embed.token", Shape{static_cast<size_t>(c.vocab), h});
  out.emplace_back("embed.position", Shape{static_cast<size_t>(c.max_seq), h});
  for (int l = 0; l < c.layers; ++l) {
    for (const char* p : {"q", "k", "v", "o"}) {
      out.emplace_back(LayerParam(l, std::string("attn.") + p + ".weight"),
                       Shape{h, h});
      out.emplace_back(LayerParam(l, std::string("attn.") + p + ".bias"),
                       Shape{1, h});
    }
    out.emplace_back(LayerParam(l, "ln1.gain"), Shape{1, h});
    out.emplace_back(LayerParam(l, "ln1.bias"), Shape{1, h});
    out.emplace_back(LayerParam(l, "ffn.w1"), Shape{h, f});
    out.emplace_back(LayerParam(l, "ffn.b1"), Shape{1, f});
    out.emplace_back(LayerParam(l, "ffn.w2"), Shape{f, h});
    out.emplace_back(LayerParam(l, "ffn.b2"), Shape{1, h});
    out.emplace_back(LayerParam(l, "ln2.gain"), Shape{1, h});
    out.emplace_back(LayerParam(l, "ln2.bias"), Shape{1, h});
  }
  out.emplace_back("head.weight", Shape{h, static_cast<size_t>(c.classes)});
  out.emplace_back("head.bias", Shape{1, static_cast<size_t>(c.classes)});
  return out;
}

void ValidateWeights(const TransformerWeights& weights,
                     const ModelConfig& config) {
  const auto shapes = ParameterShapes(config);
  SF_ENFORCE(weights.size() == shapes.size(), "expected ", shapes.size(),
             " tensors, found ", weights.size());
  for (const auto& [name, shape] : shapes) {
    const auto it = weights.find(name);
    SF_ENFORCE(it != weights.end(), "missing tensor ", name);
    SF_ENFORCE(it->second.shape == shape, "tensor ", name,
               " has the wrong shape");
    SF_ENFORCE(it->second.values.size() == NumElements(shape), "tensor ", name,
               " has the wrong number of values");
    for (double v : it->second.values) {
      SF_ENFORCE(std::isfinite(v), "tensor ", name, " has non-finite values");
    }
  }
}

void SaveWeightFile(const std::string& path, const WeightFile& file) {
  ValidateWeights(file.weights, file.config);
  Writer w;
  w.buf.append(kMagic, 4);
  w.U32(kWeightFileVersion);
  w.Bytes(ToJson(file.config));
  w.U32(static_cast<std::uint32_t>(file.weights.size()));
  for (const auto& [name, shape] : ParameterShapes(file.config)) {
    const RealTensor& t = file.weights.at(name);
    w.Bytes(name);
    w.U32(static_cast<std::uint32_t>(t.shape.size()));
    for (size_t d : t.shape) w.U64(d);
    for (double v : t.values) w.F64(v);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
  if (!out) throw Error("failed to write " + path);
}

WeightFile LoadWeightFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open weight file " + path);
  Reader r(std::string(std::istreambuf_iterator<char>(in), {}));
  if (r.Raw(4) != std::string(kMagic, 4))
    throw Error(path + " is not a weight file");
  const std::uint32_t version = r.U32();
  if (version != kWeightFileVersion) {
    throw Error(internal::StrCat("unsupported weight file version ", version));
  }
  WeightFile file;
  file.config = ModelConfigFromJson(r.Bytes());
  const std::uint32_t count = r.U32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.Bytes();
    RealTensor t;
    const std::uint32_t rank = r.U32();
    if (rank > 8) throw Error("tensor rank too large in " + path);
    for (std::uint32_t d = 0; d < rank; ++d) t.shape.push_back(r.U64());
    const size_t n = NumElements(t.shape);
    if (n > (size_t{1} << 28)) throw Error("tensor too large in " + path);
    t.values.resize(n);
    for (auto& v : t.values) v = r.F64();
    file.weights.emplace(std::move(name), std::move(t));
  }
  if (!r.done()) throw Error("trailing bytes in weight file " + path);
  ValidateWeights(file.weights, file.config);
  return file;
}

}  // namespace shareformer

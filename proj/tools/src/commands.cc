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

#include "commands.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <utility>

#include "shareformer/common/errors.h"
#include "shareformer/kd/dataset.h"
#include "shareformer/kd/model.h"
#include "shareformer/nn/mpc_layers.h"
#include "shareformer/nn/mpc_model.h"
#include "shareformer/protocols/arithmetic.h"
#include "shareformer/protocols/io.h"
#include "shareformer/protocols/local_runner.h"
#include "shareformer/sharing/dealer.h"
#include "shareformer/transport/channel.h"
#include "shareformer/transport/dealer_service.h"
#include "shareformer/transport/peer_link.h"

namespace shareformer::cli {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Json ParseJson(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(internal::StrCat("bad ", what, ": ", e.what()));
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractViolation(internal::StrCat("cannot read ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json CountersJson(const CommCounters& c, const NetworkParams& net) {
  const TimeEstimate t = EstimateTime(c, net);
  Json j;
  j["rounds"] = c.rounds;
  j["bytes"] = c.bytes_sent;
  j["messages"] = c.messages;
  j["local_ops"] = c.local_ops;
  j["estimated_s"] = {{"latency", t.latency_s},
                      {"transfer", t.transfer_s},
                      {"compute", t.compute_s},
                      {"total", t.total_s()}};
  j["comm_fraction"] = t.total_s() > 0 ? t.comm_s() / t.total_s() : 0.0;
  return j;
}

LocalRunOptions RunOptions(std::uint64_t seed) {
  const SeedPlan plan = SeedPlan::From(seed);
  LocalRunOptions o;
  o.dealer_seed = plan.dealer_seed;
  o.input_seed = plan.input_seed;
  return o;
}

std::vector<double> UniformValues(size_t n, std::uint64_t seed, double range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

std::vector<int> RandomTokens(int seq, int vocab, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, vocab - 1);
  std::vector<int> t(seq);
  for (auto& x : t) x = dist(rng);
  return t;
}

// Secret-shares `values` from party 1 and applies `op`; returns party 1's
// ledger.
template <typename Op>
CommLedger RunOnInput(std::uint64_t seed, const Shape& shape,
                      const std::vector<double>& values, Op op) {
  auto out = RunLocal(RunOptions(seed), [&](Session& s) {
    std::vector<RingElement> enc;
    if (s.party() == 1) enc = s.codec().Encode(values);
    const SharedTensor x = ShareInput(s, 1, enc, shape);
    op(s, x);
    return 0;
  });
  return std::move(out[0].ledger);
}

struct Variant {
  std::string name;
  CommLedger ledger;
};

Json VariantTable(const std::vector<Variant>& variants,
                  const NetworkParams& net) {
  Json rows = Json::array();
  Json speedup;
  const CommCounters base = variants.front().ledger.Total();
  const double base_time = EstimateTime(base, net).total_s();
  auto ratio = [](double a, double b) -> Json {
    if (b == 0) return nullptr;
    return a / b;
  };
  for (const auto& v : variants) {
    const CommCounters c = v.ledger.Total();
    Json row = {{"name", v.name}};
    row.update(CountersJson(c, net));
    Json labels;
    for (const auto& [label, counters] : v.ledger.ByTopLevel()) {
      labels[label] = CountersJson(counters, net);
    }
    if (!labels.empty()) row["labels"] = labels;
    rows.push_back(row);
    speedup[v.name] = {
        {"time", ratio(base_time, EstimateTime(c, net).total_s())},
        {"rounds", ratio(static_cast<double>(base.rounds), c.rounds)},
        {"bytes", ratio(static_cast<double>(base.bytes_sent), c.bytes_sent)}};
  }
  return {{"variants", rows}, {"speedup_vs_exact", speedup}};
}

TransformerWeights RandomWeights(const ModelConfig& config,
                                 std::uint64_t seed) {
  return kd::PlainModel::Random(config, seed).weights();
}

// Shares the model from party 2 and the tokens from party 1, runs the
// forward pass and reveals the logits to party 1.
std::optional<std::vector<RingElement>> InferBody(
    Session& s, const ModelConfig& config, const TransformerWeights* weights,
    std::span<const int> tokens, int seq, int length) {
  const SharedModel model =
      ShareModel(s, config, s.party() == 2 ? weights : nullptr, 2);
  const SharedTensor x = ShareTokens(s, config, tokens, seq, 1);
  std::vector<double> keep;
  if (length < seq) {
    keep.assign(seq, 0.0);
    std::fill(keep.begin(), keep.begin() + length, 1.0);
  }
  const SharedTensor logits = Forward(s, model, x, keep);
  Session::Scope scope(s, kScopeOther);
  return RevealTo(s, logits, 1);
}

Json LogitsJson(const std::vector<RingElement>& words,
                const FixedPointCodec& codec) {
  const std::vector<double> logits = codec.Decode(words);
  Json hex = Json::array();
  for (RingElement w : words) hex.push_back(Hex(w));
  const auto best = std::max_element(logits.begin(), logits.end());
  return {{"logits", logits},
          {"logits_ring", hex},
          {"prediction", best - logits.begin()}};
}

}  // namespace

SeedPlan SeedPlan::From(std::uint64_t seed) {
  SeedPlan p;
  p.dealer_seed = seed;
  p.input_seed = HashBytes(internal::StrCat("input-mask-key/", seed));
  return p;
}

std::string Hex(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

Json ToJson(const NetworkParams& net) {
  return {{"round_latency_s", net.round_latency_s},
          {"bandwidth_bits_per_s", net.bandwidth_bits_per_s},
          {"compute_ops_per_s", net.compute_ops_per_s}};
}

Json LedgerReport(const CommLedger& ledger, const NetworkParams& net) {
  const CommCounters total = ledger.Total();
  const double total_s = EstimateTime(total, net).total_s();
  Json labels;
  std::string largest;
  double largest_s = -1;
  for (const auto& [label, counters] : ledger.ByTopLevel()) {
    Json row = CountersJson(counters, net);
    const double t = EstimateTime(counters, net).total_s();
    row["share_of_time"] = total_s > 0 ? t / total_s : 0.0;
    // LayerNorm's Newton inverse square root is our choice of treatment,
    // not part of the reference cost breakdown.
    row["non_paper_cost"] = label == kScopeLayerNorm;
    labels[label] = row;
    if (t > largest_s) {
      largest_s = t;
      largest = label;
    }
  }
  return {{"total", CountersJson(total, net)},
          {"labels", labels},
          {"largest_label", largest}};
}

void WriteReport(const Json& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ContractViolation(internal::StrCat("cannot write ", path));
  out << report.dump(2) << "\n";
}

bool DemoAdd(std::ostream& out) {
  const std::vector<RingElement> x{1}, y{2};
  const std::vector<RingElement> x_mask{FromSigned(-4)}, y_mask{FromSigned(50)};
  const auto [x1, x2] = ShareWithMask(x, {1}, x_mask, /*owner=*/1);
  const auto [y1, y2] = ShareWithMask(y, {1}, y_mask, /*owner=*/2);
  const SharedTensor z1 = AddLocal(x1, y1), z2 = AddLocal(x2, y2);
  const std::array<SharedTensor, 2> sums{z1, z2};
  auto revealed = RunLocal(RunOptions(1), [&](Session& s) {
    return Reveal(s, sums[s.party() - 1]);
  });

  bool ok = true;
  auto row = [&](const std::string& step, std::int64_t p1, std::int64_t p2,
                 std::int64_t want1, std::int64_t want2) {
    const bool good = p1 == want1 && p2 == want2;
    ok = ok && good;
    out << std::left << std::setw(28) << step << std::right << std::setw(8)
        << p1 << std::setw(10) << p2 << (good ? "" : "   MISMATCH") << "\n";
  };
  out << std::left << std::setw(28) << "step" << std::right << std::setw(8)
      << "party 1" << std::setw(10) << "party 2" << "\n";
  row("share of x = 1 (party 1)", ToSigned(x1[0]), ToSigned(x2[0]), -3, 4);
  row("share of y = 2 (party 2)", ToSigned(y1[0]), ToSigned(y2[0]), 50, -48);
  row("local sum x + y", ToSigned(z1[0]), ToSigned(z2[0]), 47, -44);
  row("reveal", ToSigned(revealed[0].value[0]), ToSigned(revealed[1].value[0]),
      3, 3);
  const std::uint64_t rounds = revealed[0].ledger.Total().rounds;
  out << "rounds: " << rounds << "\n";
  ok = ok && rounds == 1;
  out << (ok ? "both parties reveal 3" : "demo FAILED") << "\n";
  return ok;
}

Json Bench(const BenchOptions& o) {
  o.model.Validate();
  SF_ENFORCE(o.seq >= 1, "seq must be positive, got ", o.seq);
  const auto start = Clock::now();
  const size_t seq = o.seq;
  std::vector<Variant> variants;
  Json shape;
  if (o.function == "gelu") {
    const Shape s{seq, static_cast<size_t>(o.model.ffn_dim())};
    const auto values = UniformValues(NumElements(s), o.seed, 4.0);
    for (GeluVariant v : {GeluVariant::kExact, GeluVariant::kQuad}) {
      variants.push_back({std::string(ToString(v)),
                          RunOnInput(o.seed, s, values,
                                     [v](Session& ss, const SharedTensor& x) {
                                       Gelu(ss, x, v);
                                     })});
    }
    shape = s;
  } else if (o.function == "softmax") {
    const Shape s{seq, seq};
    const auto values = UniformValues(NumElements(s), o.seed, 4.0);
    for (SoftmaxVariant v : {SoftmaxVariant::kExact, SoftmaxVariant::kTwoRelu,
                             SoftmaxVariant::kTwoQuad}) {
      ApproximationSpec spec;
      spec.softmax = v;
      spec.two_quad_c = o.model.approx.two_quad_c;
      variants.push_back(
          {std::string(ToString(v)),
           RunOnInput(o.seed, s, values,
                      [spec](Session& ss, const SharedTensor& x) {
                        Softmax(ss, x, spec);
                      })});
    }
    shape = s;
  } else if (o.function == "matmul") {
    const size_t h = o.model.hidden;
    const Shape s{seq, h};
    const auto values = UniformValues(NumElements(s), o.seed, 1.0);
    const auto w = UniformValues(h * h, o.seed + 1, 1.0);
    variants.push_back(
        {"beaver",
         RunOnInput(o.seed, s, values, [&](Session& ss, const SharedTensor& x) {
           std::vector<RingElement> enc;
           if (ss.party() == 2) enc = ss.codec().Encode(w);
           MatMul(ss, x, ShareInput(ss, 2, enc, {h, h}));
         })});
    shape = {s, Shape{h, h}};
  } else if (o.function == "forward") {
    SF_ENFORCE(o.seq <= o.model.max_seq, "seq ", o.seq, " exceeds max_seq ",
               o.model.max_seq);
    const auto tokens = RandomTokens(o.seq, o.model.vocab, o.seed);
    for (const ApproximationSpec& spec :
         {ApproximationSpec::Exact(), ApproximationSpec::QuadTwoRelu(),
          ApproximationSpec::QuadTwoQuad()}) {
      ModelConfig config = o.model;
      config.approx = spec;
      config.approx.two_quad_c = o.model.approx.two_quad_c;
      const TransformerWeights weights = RandomWeights(config, o.seed);
      auto out = RunLocal(RunOptions(o.seed), [&](Session& s) {
        return InferBody(s, config, &weights, tokens, o.seq, o.seq);
      });
      variants.push_back({config.approx.Name(), std::move(out[0].ledger)});
    }
    shape = {{"seq", o.seq}, {"model", ParseJson(ToJson(o.model), "config")}};
  } else {
    throw ContractViolation(
        internal::StrCat("unknown bench function '", o.function,
                         "'; expected gelu, softmax, matmul or forward"));
  }
  Json report;
  report["command"] = "bench";
  report["function"] = o.function;
  report["seed"] = o.seed;
  report["seq"] = o.seq;
  report["shape"] = shape;
  report["config_hash"] = Hex(HashBytes(ToJson(o.model)));
  report["network"] = ToJson(o.net);
  report.update(VariantTable(variants, o.net));
  report["wall_clock_s"] = SecondsSince(start);
  return report;
}

InferInput LoadInferInput(const std::string& path) {
  const Json j = ParseJson(ReadFile(path), "input file");
  InferInput in;
  try {
    in.tokens = j.at("tokens").get<std::vector<int>>();
    in.length = j.value("length", static_cast<int>(in.tokens.size()));
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(internal::StrCat("bad input file: ", e.what()));
  }
  SF_ENFORCE(!in.tokens.empty(), "input file has no tokens");
  SF_ENFORCE(in.length >= 1 && in.length <= static_cast<int>(in.tokens.size()),
             "length ", in.length, " outside [1, ", in.tokens.size(), "]");
  return in;
}

std::uint64_t InferConfigHash(const ModelConfig& config, int seq, int length,
                              std::uint64_t seed) {
  return HashBytes(internal::StrCat(ToJson(config), "|seq=", seq,
                                    "|length=", length, "|seed=", seed));
}

Json Infer(const InferOptions& o) {
  o.config.Validate();
  SF_ENFORCE(o.party == "1" || o.party == "2" || o.party == "local",
             "party must be 1, 2 or local, got '", o.party, "'");
  SF_ENFORCE(o.seq >= 1 && o.seq <= o.config.max_seq, "seq ", o.seq,
             " outside [1, ", o.config.max_seq, "]");
  SF_ENFORCE(o.length >= 1 && o.length <= o.seq, "length ", o.length,
             " outside [1, ", o.seq, "]");
  const bool holds_model = o.party != "1";
  const bool holds_input = o.party != "2";
  SF_ENFORCE(!holds_model || o.weights.has_value(), "party ", o.party,
             " needs model weights");
  SF_ENFORCE(!holds_input || static_cast<int>(o.tokens.size()) == o.seq,
             "party ", o.party, " needs ", o.seq, " input tokens");
  if (holds_model) ValidateWeights(*o.weights, o.config);

  const auto start = Clock::now();
  const SeedPlan plan = SeedPlan::From(o.seed);
  const std::uint64_t hash = InferConfigHash(o.config, o.seq, o.length, o.seed);
  const TransformerWeights* weights = o.weights ? &*o.weights : nullptr;
  const FixedPointCodec codec;

  std::optional<std::vector<RingElement>> logits;
  CommLedger ledger;
  std::uint64_t transcript = 0;
  if (o.party == "local") {
    SF_ENFORCE(o.dealer.empty(), "local runs embed the dealer");
    auto out = RunLocal(RunOptions(o.seed), [&](Session& s) {
      return InferBody(s, o.config, weights, o.tokens, o.seq, o.length);
    });
    logits = std::move(out[0].value);
    ledger = std::move(out[0].ledger);
    transcript = out[0].transcript;
  } else {
    const int party = o.party == "1" ? 1 : 2;
    const Endpoint peer_ep = Endpoint::Parse(o.peer);
    std::unique_ptr<Channel> peer;
    if (party == 1) {
      TcpListener listener(peer_ep);
      peer = listener.Accept(o.timeout);
      if (!peer) {
        throw TransportError(
            internal::StrCat("no peer connected to ", peer_ep.ToString()));
      }
    } else {
      peer = TcpChannel::Connect(peer_ep, o.timeout);
    }
    std::unique_ptr<DealerClient> dealer;
    if (o.dealer.empty()) {
      dealer = std::make_unique<LocalDealer>(plan.dealer_seed, party);
    } else {
      dealer = std::make_unique<RemoteDealer>(
          TcpChannel::Connect(Endpoint::Parse(o.dealer), o.timeout), party,
          o.timeout);
    }
    PeerLink link(*peer, ledger, o.timeout);
    try {
      link.Handshake(hash);
      Session s(party, link, *dealer, codec, plan.input_seed);
      const std::span<const int> tokens =
          party == 1 ? std::span<const int>(o.tokens) : std::span<const int>();
      logits = InferBody(s, o.config, weights, tokens, o.seq, o.length);
    } catch (...) {
      link.Abort();
      throw;
    }
    transcript = link.transcript_hash();
  }

  Json report;
  report["command"] = "infer";
  report["party"] = o.party;
  report["seed"] = o.seed;
  report["config_hash"] = Hex(hash);
  report["config"] = ParseJson(ToJson(o.config), "config");
  report["seq"] = o.seq;
  report["length"] = o.length;
  report["dealer"] = o.dealer.empty() ? "embedded" : o.dealer;
  if (logits) report.update(LogitsJson(*logits, codec));
  report["transcript"] = Hex(transcript);
  report["network"] = ToJson(o.net);
  report["ledger"] = LedgerReport(ledger, o.net);
  report["wall_clock_s"] = SecondsSince(start);
  return report;
}

void ServeDealer(const std::string& listen, std::uint64_t seed, int connections,
                 std::chrono::milliseconds timeout) {
  SF_ENFORCE(connections >= 1, "connections must be positive");
  TcpListener listener(Endpoint::Parse(listen));
  RunDealerServer(listener, SeedPlan::From(seed).dealer_seed, connections,
                  timeout);
}

Json Profile(const ProfileOptions& o) {
  o.model.Validate();
  const int seq = o.seq == 0 ? o.model.max_seq : o.seq;
  const auto start = Clock::now();
  const TransformerWeights weights =
      o.weights ? *o.weights : RandomWeights(o.model, o.seed);
  const auto tokens = RandomTokens(seq, o.model.vocab, o.seed);
  auto out = RunLocal(RunOptions(o.seed), [&](Session& s) {
    return InferBody(s, o.model, &weights, tokens, seq, seq);
  });
  Json report;
  report["command"] = "profile";
  report["seed"] = o.seed;
  report["config_hash"] = Hex(HashBytes(ToJson(o.model)));
  report["config"] = ParseJson(ToJson(o.model), "config");
  report["seq"] = seq;
  report["network"] = ToJson(o.net);
  report["ledger"] = LedgerReport(out[0].ledger, o.net);
  report["wall_clock_s"] = SecondsSince(start);
  return report;
}

kd::AblationConfig AblationConfigFromJson(std::string_view text) {
  const Json j = ParseJson(text, "distillation config");
  kd::AblationConfig c;
  try {
    if (j.contains("task")) {
      c.task = kd::ToyTaskParamsFromJson(j["task"].dump());
    }
    if (j.contains("model")) c.model = ModelConfigFromJson(j["model"].dump());
    if (j.contains("student_spec")) {
      const auto& s = j["student_spec"];
      c.student_spec.gelu = ParseGeluVariant(s.value("gelu", "quad"));
      c.student_spec.softmax = ParseSoftmaxVariant(s.value("softmax", "2quad"));
      c.student_spec.two_quad_c =
          s.value("two_quad_c", c.student_spec.two_quad_c);
    }
    if (j.contains("teacher")) {
      const auto& t = j["teacher"];
      auto& tc = c.teacher;
      tc.pretrain_epochs = t.value("pretrain_epochs", tc.pretrain_epochs);
      tc.pretrain_lr = t.value("pretrain_lr", tc.pretrain_lr);
      tc.finetune_epochs = t.value("finetune_epochs", tc.finetune_epochs);
      tc.finetune_lr = t.value("finetune_lr", tc.finetune_lr);
      tc.batch_size = t.value("batch_size", tc.batch_size);
      tc.gradient_limit = t.value("gradient_limit", tc.gradient_limit);
    }
    if (j.contains("distill")) {
      const auto& d = j["distill"];
      auto& dc = c.distill;
      dc.stage1_lr = d.value("stage1_lr", dc.stage1_lr);
      dc.stage2_lr = d.value("stage2_lr", dc.stage2_lr);
      dc.stage1_epochs = d.value("stage1_epochs", dc.stage1_epochs);
      dc.stage2_epochs = d.value("stage2_epochs", dc.stage2_epochs);
      dc.batch_size = d.value("batch_size", dc.batch_size);
      dc.gradient_limit = d.value("gradient_limit", dc.gradient_limit);
      const std::string init = d.value("init_mode", "teacher_weights");
      SF_ENFORCE(init == "teacher_weights" || init == "random",
                 "init_mode must be teacher_weights or random, got '", init,
                 "'");
      dc.init_mode = init == "random" ? kd::InitMode::kRandom
                                      : kd::InitMode::kTeacherWeights;
      if (d.contains("loss_weights")) {
        const auto& w = d["loss_weights"];
        auto& lw = dc.weights;
        lw.embedding = w.value("embedding", lw.embedding);
        lw.attention = w.value("attention", lw.attention);
        lw.hidden = w.value("hidden", lw.hidden);
        lw.prediction = w.value("prediction", lw.prediction);
      }
    }
    c.baseline_lr = j.value("baseline_lr", c.baseline_lr);
    if (j.contains("seeds")) {
      c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(
        internal::StrCat("bad distillation config: ", e.what()));
  }
  SF_ENFORCE(!c.seeds.empty(), "at least one seed is required");
  SF_ENFORCE(
      c.distill.stage1_lr > 0 && c.distill.stage2_lr > 0 && c.baseline_lr > 0,
      "learning rates must be positive");
  SF_ENFORCE(c.distill.stage1_epochs >= 0 && c.distill.stage2_epochs >= 0,
             "epochs must be non-negative");
  return c;
}

Json ToJson(const kd::AblationConfig& c) {
  Json j;
  j["task"] = ParseJson(kd::ToJson(c.task), "task");
  j["model"] = ParseJson(ToJson(c.model), "model");
  j["student_spec"] = {{"gelu", ToString(c.student_spec.gelu)},
                       {"softmax", ToString(c.student_spec.softmax)},
                       {"two_quad_c", c.student_spec.two_quad_c}};
  const auto& t = c.teacher;
  j["teacher"] = {{"pretrain_epochs", t.pretrain_epochs},
                  {"pretrain_lr", t.pretrain_lr},
                  {"finetune_epochs", t.finetune_epochs},
                  {"finetune_lr", t.finetune_lr},
                  {"batch_size", t.batch_size},
                  {"gradient_limit", t.gradient_limit}};
  const auto& d = c.distill;
  j["distill"] = {
      {"stage1_lr", d.stage1_lr},
      {"stage2_lr", d.stage2_lr},
      {"stage1_epochs", d.stage1_epochs},
      {"stage2_epochs", d.stage2_epochs},
      {"batch_size", d.batch_size},
      {"gradient_limit", d.gradient_limit},
      {"init_mode",
       d.init_mode == kd::InitMode::kRandom ? "random" : "teacher_weights"},
      {"loss_weights",
       {{"embedding", d.weights.embedding},
        {"attention", d.weights.attention},
        {"hidden", d.weights.hidden},
        {"prediction", d.weights.prediction}}}};
  j["baseline_lr"] = c.baseline_lr;
  j["seeds"] = c.seeds;
  j["fixed_teacher"] = c.teacher_weights.has_value();
  return j;
}

std::string FormatAblationTable(const Json& rows) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << std::left << std::setw(10) << "method" << std::right << std::setw(8)
      << "train" << std::setw(8) << "test" << "   test per seed\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(10) << row["method"].get<std::string>()
        << std::right << std::setw(8) << row["train_accuracy"].get<double>()
        << std::setw(8) << row["test_accuracy"].get<double>() << "  ";
    for (double a : row["test_per_seed"]) out << " " << a;
    out << "\n";
  }
  return out.str();
}

Json Distill(const DistillOptions& o) {
  const auto start = Clock::now();
  const kd::AblationResult result = kd::RunAblation(o.config);
  Json rows = Json::array();
  for (const auto& row : result.rows()) {
    rows.push_back({{"method", row.method},
                    {"train_accuracy", row.mean_train()},
                    {"test_accuracy", row.mean_test()},
                    {"train_per_seed", row.train_accuracy},
                    {"test_per_seed", row.test_accuracy}});
  }
  Json report;
  report["command"] = "distill";
  report["seeds"] = o.config.seeds;
  const Json config = ToJson(o.config);
  report["config_hash"] = Hex(HashBytes(config.dump()));
  report["config"] = config;
  report["ablation"] = rows;
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    ModelConfig teacher_config = o.config.model;
    teacher_config.approx = ApproximationSpec::Exact();
    ModelConfig student_config = o.config.model;
    student_config.approx = o.config.student_spec;
    const std::string teacher_path =
        (std::filesystem::path(o.out_dir) / "teacher.sfw").string();
    const std::string student_path =
        (std::filesystem::path(o.out_dir) / "student.sfw").string();
    SaveWeightFile(teacher_path, {teacher_config, result.teacher_weights});
    SaveWeightFile(student_path, {student_config, result.student_weights});
    report["weights"] = {{"teacher", teacher_path}, {"student", student_path}};
  }
  report["wall_clock_s"] = SecondsSince(start);
  return report;
}

}  // namespace shareformer::cli

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

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "shareformer/common/errors.h"

namespace shareformer::cli {
namespace {

struct CommonFlags {
  std::uint64_t seed = 1;
  std::string config;
  double latency_ms = 0.2;
  double bandwidth_gbps = 10.0;
  std::string report;

  NetworkParams net() const {
    SF_ENFORCE(latency_ms > 0 && bandwidth_gbps > 0,
               "network latency and bandwidth must be positive");
    NetworkParams p;
    p.round_latency_s = latency_ms * 1e-3;
    p.bandwidth_bits_per_s = bandwidth_gbps * 1e9;
    return p;
  }
};

void AddCommon(CLI::App* app, CommonFlags& f, bool network) {
  app->add_option("--seed", f.seed, "Seed for the dealer, inputs and weights");
  app->add_option("--config", f.config, "Configuration file (JSON)")
      ->check(CLI::ExistingFile);
  app->add_option("--report", f.report, "Write the JSON report to this path");
  if (network) {
    app->add_option("--net-latency", f.latency_ms,
                    "Simulated round latency in milliseconds");
    app->add_option("--net-bandwidth", f.bandwidth_gbps,
                    "Simulated bandwidth in Gb/s");
  }
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelConfig LoadModelConfig(const CommonFlags& f) {
  return f.config.empty() ? ModelConfig()
                          : ModelConfigFromJson(ReadText(f.config));
}

void Emit(const Json& report, const CommonFlags& f) {
  if (!f.report.empty()) WriteReport(report, f.report);
}

void PrintBenchHeader() {
  std::cout << std::left << std::setw(12) << "variant" << std::right
            << std::setw(8) << "rounds" << std::setw(14) << "bytes"
            << std::setw(14) << "est. time s" << std::setw(10) << "speedup"
            << "\n";
}

void PrintBench(const Json& r) {
  PrintBenchHeader();
  for (const auto& v : r["variants"]) {
    const auto& s = r["speedup_vs_exact"][v["name"].get<std::string>()];
    std::cout << std::left << std::setw(12) << v["name"].get<std::string>()
              << std::right << std::setw(8) << v["rounds"].get<std::uint64_t>()
              << std::setw(14) << v["bytes"].get<std::uint64_t>()
              << std::setw(14) << std::setprecision(6)
              << v["estimated_s"]["total"].get<double>() << std::setw(10)
              << std::setprecision(4) << s["time"].get<double>() << "\n";
  }
}

void PrintLedger(const Json& ledger) {
  std::cout << std::left << std::setw(12) << "label" << std::right
            << std::setw(8) << "rounds" << std::setw(14) << "bytes"
            << std::setw(14) << "est. time s" << std::setw(10) << "share"
            << "\n";
  auto line = [](const std::string& name, const Json& c, double share) {
    std::cout << std::left << std::setw(12) << name << std::right
              << std::setw(8) << c["rounds"].get<std::uint64_t>()
              << std::setw(14) << c["bytes"].get<std::uint64_t>()
              << std::setw(14) << std::setprecision(6)
              << c["estimated_s"]["total"].get<double>() << std::setw(10)
              << std::setprecision(3) << share << "\n";
  };
  bool flagged = false;
  for (const auto& [name, c] : ledger["labels"].items()) {
    const bool extra = c["non_paper_cost"].get<bool>();
    flagged = flagged || extra;
    line(extra ? name + "*" : name, c, c["share_of_time"].get<double>());
  }
  line("Total", ledger["total"], 1.0);
  if (flagged) {
    std::cout
        << "* cost of our LayerNorm treatment (Newton inverse square root),"
           " outside the reference breakdown\n";
  }
  std::cout << "communication fraction: " << std::setprecision(3)
            << ledger["total"]["comm_fraction"].get<double>() << "\n";
}

int Run(int argc, char** argv) {
  CLI::App app{
      "Private transformer inference with MPC-friendly approximations"};
  app.require_subcommand(1);

  auto* demo =
      app.add_subcommand("demo-add", "Replay the two-party addition example");

  CommonFlags bench_flags;
  BenchOptions bench;
  auto* bench_cmd =
      app.add_subcommand("bench", "Count rounds and bytes per variant");
  AddCommon(bench_cmd, bench_flags, true);
  bench_cmd
      ->add_option("function", bench.function,
                   "gelu, softmax, matmul or forward")
      ->required()
      ->check(CLI::IsMember({"gelu", "softmax", "matmul", "forward"}));
  bench_cmd->add_option("--seq", bench.seq, "Sequence length");

  CommonFlags infer_flags;
  std::string party = "local", peer = "127.0.0.1:7300", dealer, weights_path,
              input_path;
  std::optional<int> seq, length;
  int connections = 2;
  int timeout_s = 60;
  auto* infer = app.add_subcommand("infer", "Run private inference");
  AddCommon(infer, infer_flags, true);
  infer
      ->add_option("--party", party,
                   "1 (input owner), 2 (model owner), dealer or local")
      ->check(CLI::IsMember({"1", "2", "dealer", "local"}));
  infer->add_option("--peer", peer,
                    "Party 1 listens here and party 2 connects");
  infer->add_option(
      "--dealer", dealer,
      "Dealer host:port; the dealer listens there. Empty embeds one");
  infer->add_option("--weights", weights_path, "Weight file (model owner)")
      ->check(CLI::ExistingFile);
  infer->add_option("--input", input_path, "Token file (input owner)")
      ->check(CLI::ExistingFile);
  infer->add_option("--seq", seq, "Public sequence length");
  infer->add_option("--length", length, "Public count of unpadded tokens");
  infer->add_option("--connections", connections, "Dealer: sessions to serve");
  infer->add_option("--timeout", timeout_s, "Network timeout in seconds");

  CommonFlags dealer_flags;
  std::string dealer_listen = "127.0.0.1:7301";
  auto* dealer_cmd =
      app.add_subcommand("dealer", "Serve correlated randomness");
  AddCommon(dealer_cmd, dealer_flags, false);
  dealer_cmd->add_option("--dealer", dealer_listen, "Listen address host:port");
  dealer_cmd->add_option("--connections", connections, "Sessions to serve");
  dealer_cmd->add_option("--timeout", timeout_s, "Idle timeout in seconds");

  CommonFlags distill_flags;
  std::string out_dir, teacher_path;
  std::optional<int> seed_count;
  auto* distill =
      app.add_subcommand("distill", "Distill a student and run the ablation");
  AddCommon(distill, distill_flags, false);
  distill->add_option("--out", out_dir,
                      "Directory for teacher.sfw and student.sfw");
  distill
      ->add_option("--teacher", teacher_path,
                   "Use these teacher weights instead of training one")
      ->check(CLI::ExistingFile);
  distill->add_option("--seeds", seed_count,
                      "Number of seeds starting at --seed");

  CommonFlags profile_flags;
  std::string profile_weights;
  std::optional<int> profile_seq;
  auto* profile = app.add_subcommand(
      "profile", "Per-function cost breakdown of a forward pass");
  AddCommon(profile, profile_flags, true);
  profile
      ->add_option("--weights", profile_weights,
                   "Weight file; random when absent")
      ->check(CLI::ExistingFile);
  profile->add_option("--seq", profile_seq, "Sequence length");

  CLI11_PARSE(app, argc, argv);

  if (demo->parsed()) return DemoAdd(std::cout) ? 0 : 1;

  if (bench_cmd->parsed()) {
    bench.model = LoadModelConfig(bench_flags);
    bench.seed = bench_flags.seed;
    bench.net = bench_flags.net();
    const Json r = Bench(bench);
    PrintBench(r);
    Emit(r, bench_flags);
    return 0;
  }

  if (dealer_cmd->parsed() || (infer->parsed() && party == "dealer")) {
    const CommonFlags& f = dealer_cmd->parsed() ? dealer_flags : infer_flags;
    const std::string listen = dealer_cmd->parsed() ? dealer_listen : dealer;
    SF_ENFORCE(!listen.empty(), "the dealer needs --dealer host:port");
    std::cerr << "dealer listening on " << listen << "\n";
    ServeDealer(listen, f.seed, connections, std::chrono::seconds(timeout_s));
    return 0;
  }

  if (infer->parsed()) {
    InferOptions o;
    o.party = party;
    o.peer = peer;
    o.dealer = dealer;
    o.seed = infer_flags.seed;
    o.net = infer_flags.net();
    o.timeout = std::chrono::seconds(timeout_s);
    if (!weights_path.empty()) {
      WeightFile file = LoadWeightFile(weights_path);
      if (!infer_flags.config.empty()) {
        SF_ENFORCE(LoadModelConfig(infer_flags) == file.config,
                   "--config disagrees with the weight file");
      }
      o.config = file.config;
      if (party != "1") o.weights = std::move(file.weights);
    } else {
      SF_ENFORCE(!infer_flags.config.empty(),
                 "infer needs --weights or --config");
      o.config = LoadModelConfig(infer_flags);
    }
    if (!input_path.empty()) {
      const InferInput in = LoadInferInput(input_path);
      SF_ENFORCE(!seq || *seq == static_cast<int>(in.tokens.size()),
                 "--seq disagrees with the input file");
      SF_ENFORCE(!length || *length == in.length,
                 "--length disagrees with the input file");
      o.tokens = in.tokens;
      o.seq = static_cast<int>(in.tokens.size());
      o.length = in.length;
    } else {
      SF_ENFORCE(party == "2", "party ", party, " needs --input");
      o.seq = seq.value_or(o.config.max_seq);
      o.length = length.value_or(o.seq);
    }
    const Json r = Infer(o);
    if (r.contains("logits")) {
      std::cout << "logits:";
      for (double v : r["logits"])
        std::cout << " " << std::setprecision(8) << v;
      std::cout << "\nprediction: " << r["prediction"].get<int>() << "\n";
    }
    std::cout << "transcript: " << r["transcript"].get<std::string>() << "\n";
    PrintLedger(r["ledger"]);
    Emit(r, infer_flags);
    return 0;
  }

  if (distill->parsed()) {
    DistillOptions o;
    if (!distill_flags.config.empty()) {
      o.config = AblationConfigFromJson(ReadText(distill_flags.config));
    }
    if (distill->count("--seed") > 0 || seed_count) {
      const int n =
          seed_count.value_or(static_cast<int>(o.config.seeds.size()));
      SF_ENFORCE(n >= 1, "--seeds must be positive");
      o.config.seeds.clear();
      for (int i = 0; i < n; ++i)
        o.config.seeds.push_back(distill_flags.seed + i);
    }
    if (!teacher_path.empty()) {
      WeightFile file = LoadWeightFile(teacher_path);
      ModelConfig expected = o.config.model;
      expected.approx = ApproximationSpec::Exact();
      SF_ENFORCE(file.config == expected,
                 "teacher weights do not match the configured model");
      o.config.teacher_weights = std::move(file.weights);
    }
    o.out_dir = out_dir;
    const Json r = Distill(o);
    std::cout << FormatAblationTable(r["ablation"]);
    Emit(r, distill_flags);
    return 0;
  }

  if (profile->parsed()) {
    ProfileOptions o;
    o.model = LoadModelConfig(profile_flags);
    if (!profile_weights.empty()) {
      WeightFile file = LoadWeightFile(profile_weights);
      if (profile_flags.config.empty()) o.model = file.config;
      SF_ENFORCE(file.config == o.model,
                 "--config disagrees with the weight file");
      o.weights = std::move(file.weights);
    }
    o.seq = profile_seq.value_or(0);
    o.seed = profile_flags.seed;
    o.net = profile_flags.net();
    const Json r = Profile(o);
    PrintLedger(r["ledger"]);
    std::cout << "largest label: "
              << r["ledger"]["largest_label"].get<std::string>() << "\n";
    Emit(r, profile_flags);
    return 0;
  }
  return 1;
}

}  // namespace
}  // namespace shareformer::cli

int main(int argc, char** argv) {
  try {
    return shareformer::cli::Run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace shareformer {

struct CommCounters {
  std::uint64_t rounds = 0;
  std::uint64_t bytes_sent = 0;  // payload only, framing excluded
  std::uint64_t messages = 0;
  std::uint64_t local_ops = 0;  // local ring multiply-accumulates
  std::chrono::nanoseconds wall_time{0};

  CommCounters& operator+=(const CommCounters& other);
  friend CommCounters operator-(CommCounters a, const CommCounters& b);
};

// Per-scope accounting of communication. Traffic is attributed to the
// innermost open scope; scope paths are '/'-joined labels. Traffic outside
// every scope is reported under "Other".
class CommLedger {
 public:
  static constexpr std::string_view kOtherLabel = "Other";

  CommLedger();

  void PushScope(std::string_view label);
  // Throws ContractViolation when no scope is open.
  void PopScope();
  size_t depth() const { return stack_.size(); }
  const std::string& current_path() const { return path_; }

  // One synchronous exchange with the peer.
  void RecordRound(std::uint64_t bytes_sent, std::uint64_t messages = 1);
  void RecordLocalOps(std::uint64_t ops);

  CommCounters Total() const;
  // Counters of `path` plus all nested scopes below it.
  CommCounters Inclusive(std::string_view path) const;
  // Exclusive counters keyed by full path ("" is the unscoped root).
  std::map<std::string, CommCounters> Exclusive() const;
  // Inclusive counters per top-level label; the root maps to "Other".
  std::map<std::string, CommCounters> ByTopLevel() const;

  // RAII scope.
  class Scope {
   public:
    Scope(CommLedger& ledger, std::string_view label) : ledger_(ledger) {
      ledger_.PushScope(label);
    }
    ~Scope() { ledger_.PopScope(); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    CommLedger& ledger_;
  };

 private:
  void ChargeWallTime();

  std::vector<size_t> stack_;  // lengths of path_ before each push
  std::string path_;
  std::map<std::string, CommCounters> counters_;
  std::chrono::steady_clock::time_point last_event_;
};

}  // namespace shareformer

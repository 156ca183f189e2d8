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

#include "shareformer/transport/ledger.h"

#include "shareformer/common/errors.h"

namespace shareformer {

CommCounters& CommCounters::operator+=(const CommCounters& other) {
  rounds += other.rounds;
  bytes_sent += other.bytes_sent;
  messages += other.messages;
  local_ops += other.local_ops;
  wall_time += other.wall_time;
  return *this;
}

CommCounters operator-(CommCounters a, const CommCounters& b) {
  a.rounds -= b.rounds;
  a.bytes_sent -= b.bytes_sent;
  a.messages -= b.messages;
  a.local_ops -= b.local_ops;
  a.wall_time -= b.wall_time;
  return a;
}

CommLedger::CommLedger() : last_event_(std::chrono::steady_clock::now()) {}

void CommLedger::ChargeWallTime() {
  const auto now = std::chrono::steady_clock::now();
  counters_[path_].wall_time += now - last_event_;
  last_event_ = now;
}

void CommLedger::PushScope(std::string_view label) {
  SF_ENFORCE(!label.empty() && label.find('/') == std::string_view::npos,
             "scope labels must be non-empty and must not contain '/'");
  ChargeWallTime();
  stack_.push_back(path_.size());
  if (!path_.empty()) path_ += '/';
  path_ += label;
}

void CommLedger::PopScope() {
  SF_ENFORCE(!stack_.empty(), "end_scope without a matching scope");
  ChargeWallTime();
  path_.resize(stack_.back());
  stack_.pop_back();
}

void CommLedger::RecordRound(std::uint64_t bytes_sent, std::uint64_t messages) {
  auto& c = counters_[path_];
  c.rounds += 1;
  c.bytes_sent += bytes_sent;
  c.messages += messages;
}

void CommLedger::RecordLocalOps(std::uint64_t ops) {
  counters_[path_].local_ops += ops;
}

CommCounters CommLedger::Total() const {
  CommCounters total;
  for (const auto& [path, c] : counters_) total += c;
  return total;
}

CommCounters CommLedger::Inclusive(std::string_view path) const {
  CommCounters total;
  for (const auto& [p, c] : counters_) {
    if (p == path ||
        (p.size() > path.size() && p.compare(0, path.size(), path) == 0 &&
         p[path.size()] == '/')) {
      total += c;
    }
  }
  return total;
}

std::map<std::string, CommCounters> CommLedger::Exclusive() const {
  return counters_;
}

std::map<std::string, CommCounters> CommLedger::ByTopLevel() const {
  std::map<std::string, CommCounters> out;
  for (const auto& [p, c] : counters_) {
    const std::string top =
        p.empty() ? std::string(kOtherLabel) : p.substr(0, p.find('/'));
    out[top] += c;
  }
  return out;
}

}  // namespace shareformer

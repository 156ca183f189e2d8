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

#include <map>
#include <string>

#include "shareformer/transport/ledger.h"

namespace shareformer {

// Simulated network used to turn ledger counts into time estimates.
struct NetworkParams {
  double round_latency_s = 0.2e-3;
  double bandwidth_bits_per_s = 10e9;
  // Throughput assumed for local ring multiply-accumulates.
  double compute_ops_per_s = 1e9;
};

struct TimeEstimate {
  double latency_s = 0;   // rounds * round latency
  double transfer_s = 0;  // bytes / bandwidth
  double compute_s = 0;   // local ops / compute throughput

  double comm_s() const { return latency_s + transfer_s; }
  double total_s() const { return comm_s() + compute_s; }
};

// Throws ContractViolation for non-positive parameters.
TimeEstimate EstimateTime(const CommCounters& counters,
                          const NetworkParams& params);

// time(label) = rounds * latency + bytes / bandwidth (+ modelled compute),
// keyed by top-level label, plus a "Total" entry.
std::map<std::string, TimeEstimate> SimulatedLatencyReport(
    const CommLedger& ledger, const NetworkParams& params);

}  // namespace shareformer

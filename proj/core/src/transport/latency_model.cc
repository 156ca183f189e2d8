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

#include "shareformer/transport/latency_model.h"

#include "shareformer/common/errors.h"

namespace shareformer {

TimeEstimate EstimateTime(const CommCounters& counters,
                          const NetworkParams& params) {
  SF_ENFORCE(params.round_latency_s > 0 && params.bandwidth_bits_per_s > 0 &&
                 params.compute_ops_per_s > 0,
             "network parameters must be positive");
  TimeEstimate t;
  t.latency_s = static_cast<double>(counters.rounds) * params.round_latency_s;
  t.transfer_s = static_cast<double>(counters.bytes_sent) * 8.0 /
                 params.bandwidth_bits_per_s;
  t.compute_s =
      static_cast<double>(counters.local_ops) / params.compute_ops_per_s;
  return t;
}

std::map<std::string, TimeEstimate> SimulatedLatencyReport(
    const CommLedger& ledger, const NetworkParams& params) {
  std::map<std::string, TimeEstimate> out;
  for (const auto& [label, counters] : ledger.ByTopLevel()) {
    out[label] = EstimateTime(counters, params);
  }
  out["Total"] = EstimateTime(ledger.Total(), params);
  return out;
}

}  // namespace shareformer

// Copyright 2026 The beliefbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefbench/agent.hpp"
#include "beliefbench/experiment.hpp"
#include "beliefbench/persona_bank.hpp"

namespace beliefbench {

// Orchestrates one run: writes the manifest before the first agent call,
// appends every transcript record to transcript.partial.jsonl as it is
// produced, and on success writes the sorted transcript plus result files.
class ExperimentRunner {
 public:
  ExperimentRunner(ExperimentConfig config, Agent& agent, const PersonaBank& bank,
                   Clock clock = utc_now);

  std::vector<BeliefRecord> run_elicitation();
  PopulationResult run_population();
  std::map<ConditioningMode, PopulationResult> run_conditioning(
      const std::vector<ConditioningMode>& modes);
  IndividualResult run_individual();
  std::map<std::int64_t, PopulationResult> run_endowment_ablation(const std::vector<int>& endowments);

  const ExperimentConfig& config() const { return config_; }
  const GatewayStats& last_stats() const { return stats_; }

 private:
  class Session;

  ExperimentConfig config_;
  Agent& agent_;
  const PersonaBank& bank_;
  Clock clock_;
  GatewayStats stats_;
};

// Wires an agent from a config: the mock policy when config.mock, otherwise
// the HTTP client. Either is wrapped by CachingAgent.
struct AgentStack {
  std::unique_ptr<Agent> inner;
  std::unique_ptr<CachingAgent> gateway;
};
AgentStack make_agent_stack(const ExperimentConfig& config);

PersonaBank load_configured_bank(const ExperimentConfig& config);

std::filesystem::path default_data_dir();

struct AuditReport {
  std::vector<std::string> checked;
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

// Recomputes every result file (and any report emitted into <run>/report)
// from manifest.json and transcript.jsonl and compares byte for byte. Also
// re-parses every raw response against its recorded parse.
AuditReport replay_audit(const std::filesystem::path& run_dir);

}  // namespace beliefbench

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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefbench/agent.hpp"
#include "beliefbench/beliefs.hpp"
#include "beliefbench/game.hpp"
#include "beliefbench/perturbation.hpp"
#include "beliefbench/persona_bank.hpp"
#include "beliefbench/prompts.hpp"

namespace beliefbench {

enum class ConditioningMode { none, self, weak, strong };

std::string_view to_string(ConditioningMode mode);
ConditioningMode conditioning_mode_from_string(std::string_view text);

enum class RunKind { elicit, population, conditioning, individual, ablation };

std::string_view to_string(RunKind kind);
RunKind run_kind_from_string(std::string_view text);

// The nine test-split attributes analysed by default.
const std::vector<std::string>& default_attributes();

struct ExperimentConfig {
  // Agent.
  bool mock = false;
  std::optional<std::filesystem::path> mock_policy;
  std::string endpoint;
  std::string model_id;
  std::string api_key_env = "AGENT_API_KEY";
  SamplingParams sampling;
  int max_attempts = 3;
  int parallelism = 4;
  std::optional<std::filesystem::path> cache_dir;

  // Experiment.
  ElicitationStrategy strategy = ElicitationStrategy::CtxTr;
  std::vector<ConditioningMode> modes = {ConditioningMode::none, ConditioningMode::self,
                                         ConditioningMode::weak, ConditioningMode::strong};
  double weak_rho = 0.80;
  double strong_rho = 0.20;
  GameConfig game;
  std::size_t n_personas = 50;
  std::vector<std::string> attributes = default_attributes();
  std::vector<int> archetypes = {1, 3, 5};
  std::vector<int> endowments = {10, 44, 100};
  std::uint64_t seed = 7;
  HistoryMode history_mode = HistoryMode::with_history;
  int group_size = 100;

  std::filesystem::path output_dir = "runs/default";
  std::optional<std::filesystem::path> bank;
  std::optional<std::filesystem::path> specs;

  void validate() const;

  // Paths are left out: they do not affect results and differ across hosts.
  nlohmann::ordered_json to_json() const;
  std::string digest() const;

  // Fields absent from `j` keep the values already in `base`.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base);
  static ExperimentConfig load(const std::filesystem::path& path);
  static ExperimentConfig load(const std::filesystem::path& path, ExperimentConfig base);

 private:
  // Relative paths in `j` resolve against `base_dir`.
  static ExperimentConfig load_from_json_at(const nlohmann::json& j, ExperimentConfig base,
                                            const std::filesystem::path& base_dir);
};

PerturbationSpec perturbation_for(const ExperimentConfig& config, ConditioningMode mode);

// One line of transcript.jsonl.
struct TranscriptRecord {
  std::string run_id;
  std::string stage;  // elicit | simulate | forecast
  std::string persona_id;
  std::optional<std::string> attribute;
  std::optional<int> round;
  std::optional<std::string> archetype;
  std::optional<std::string> mode;
  std::optional<std::int64_t> endowment_cents;
  std::map<std::string, std::string> persona_attributes;
  std::string prompt_digest;
  std::string prompt;
  std::string raw_response;
  std::string parse_status;  // parsed | excluded
  nlohmann::json parsed_value;
  std::optional<std::string> reason;

  nlohmann::ordered_json to_json() const;
  static TranscriptRecord from_json(const nlohmann::json& j);
  // Total order used when the transcript is finalised.
  std::string sort_key() const;
};

std::vector<TranscriptRecord> read_transcript(const std::filesystem::path& path);

struct AttributeOutcome {
  std::string attribute;
  std::vector<std::string> levels;
  std::optional<BeliefRecord> belief;                  // as elicited
  std::optional<std::vector<std::string>> reference;   // ranking ρ is measured against
  std::vector<std::pair<std::string, double>> level_means;
  std::vector<std::pair<std::string, int>> level_counts;
  std::optional<std::vector<std::string>> behavioral_ranking;
  std::optional<double> behavior_eta2;
  bool degenerate = false;
  std::optional<double> rho;
  std::optional<double> delta_eta2;
  std::optional<double> rho_vs_elicited;
  int n_included = 0;
  int n_excluded = 0;
  std::string missing_reason;

  bool missing() const { return !missing_reason.empty(); }
};

struct PopulationResult {
  std::string model_id;
  std::string strategy;
  std::string mode = "none";
  std::int64_t endowment_cents = 1000;
  std::vector<AttributeOutcome> attributes;
  std::optional<double> median_rho;
  std::optional<double> median_delta_eta2;

  nlohmann::ordered_json to_json() const;
  static PopulationResult from_json(const nlohmann::json& j);
};

struct RoundCell {
  int round = 0;
  std::optional<double> mae;
  int n_trajectories = 0;
};

struct ArchetypeSeries {
  std::string archetype;
  std::vector<RoundCell> rounds;
  std::optional<double> overall_mae;
};

struct Trajectory {
  std::string persona_id;
  std::string archetype;
  std::vector<int> forecasts;  // dollars, one per completed round
  std::vector<int> actuals;
  std::optional<int> voided_at_round;
  std::string void_reason;
  std::optional<double> mae;
};

struct IndividualResult {
  std::string model_id;
  std::string budget_mode;
  std::string history_mode;
  std::vector<ArchetypeSeries> archetypes;
  std::vector<Trajectory> trajectories;
  std::optional<double> overall_mae;

  nlohmann::ordered_json to_json() const;
  static IndividualResult from_json(const nlohmann::json& j);
};

using ResultFiles = std::map<std::string, std::string>;

// Rebuilds every result file of a run from its manifest and transcript
// alone. Raw responses are re-parsed; the runner writes exactly what this
// returns, and the replay audit compares it against what is on disk.
ResultFiles assemble_results(const nlohmann::json& manifest,
                             std::span<const TranscriptRecord> records);

// Shortest round-trip decimal for a double.
std::string format_number(double value);

std::string population_csv(const PopulationResult& result);
std::string individual_csv(const IndividualResult& result);
std::string trajectories_csv(const IndividualResult& result);

}  // namespace beliefbench

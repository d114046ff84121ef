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

#include <span>
#include <string>
#include <string_view>

#include "beliefbench/beliefs.hpp"
#include "beliefbench/game.hpp"
#include "beliefbench/money.hpp"
#include "beliefbench/persona_bank.hpp"

namespace beliefbench {

enum class HistoryMode { with_history, without_history };

std::string_view to_string(HistoryMode mode);
HistoryMode history_mode_from_string(std::string_view text);

inline constexpr std::string_view kNoHistorySentinel = "(no previous rounds)";
inline constexpr std::string_view kFinalDecisionMarker = "Finally, I will give";

// "Round k: you sent $s; it became $3s; the other player returned $r." per
// record, or the sentinel when empty.
std::string render_history(std::span<const RoundRecord> rounds);

std::string build_population_roleplay(const Persona& persona, Money initial_amount,
                                      std::string_view prior_block);

std::string build_individual_roleplay(const Persona& persona, int round_number, int total_rounds,
                                      Money budget, std::string_view history_block,
                                      std::string_view prior_block);

std::string build_population_elicitation(ElicitationStrategy strategy,
                                         const AttributeSpec& attribute, Money endowment,
                                         int group_size = 100);

// The Trustee description shown in forecast prompts. M1, M3 and M5 use the
// bundled prose verbatim; other caps use a generic block.
std::string archetype_description(const TrusteeArchetype& archetype);

std::string build_individual_forecast(const Persona& persona,
                                      std::string_view archetype_description, int timestep,
                                      int total_rounds, std::string_view history_block,
                                      Money endowment = Money::from_dollars(10),
                                      HistoryMode mode = HistoryMode::with_history);

// "For <Attribute>: <L1>s are more interpersonal trusting than <L2>s, and ..."
// one paragraph per belief, separated by blank lines.
std::string build_prior_block(std::span<const BeliefRecord> beliefs);

// Canonical output schemas, shared by the prompt builders and the parsers.
std::string ranking_schema(std::string_view attribute);
std::string dollar_schema(const AttributeSpec& attribute);
std::string forecast_schema();
std::string format_instructions(std::string_view schema);
std::string react_format_instructions();

}  // namespace beliefbench

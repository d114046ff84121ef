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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "beliefbench/money.hpp"

namespace beliefbench {

enum class BudgetMode { reset, carryover };
enum class Granularity { whole_dollar, cent };

std::string_view to_string(BudgetMode mode);
BudgetMode budget_mode_from_string(std::string_view text);
std::string_view to_string(Granularity granularity);
Granularity granularity_from_string(std::string_view text);

struct GameConfig {
  Money endowment = Money::from_dollars(10);
  int rounds = 6;
  BudgetMode budget_mode = BudgetMode::reset;
  Granularity granularity = Granularity::whole_dollar;

  void validate() const;
};

// Trustee that returns min(cap, 3 * sent).
struct TrusteeArchetype {
  Money cap;

  static TrusteeArchetype with_cap_dollars(int dollars);
  // "M1", "M3", "M2.50", ...
  std::string label() const;
};

struct RoundRecord {
  int round = 0;  // 1-based
  Money budget;   // opening budget of the round
  Money sent;
  Money tripled;
  Money returned;
  Money trustor_payoff;
  Money trustee_payoff;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct GameState {
  GameConfig config;
  std::vector<RoundRecord> history;
  Money current_budget;

  static GameState start(const GameConfig& config);
  bool active() const { return static_cast<int>(history.size()) < config.rounds; }
  int next_round() const { return static_cast<int>(history.size()) + 1; }
};

struct SendViolation {
  std::string reason;
};

Money trustee_return(const TrusteeArchetype& archetype, Money sent);

std::optional<SendViolation> validate_send(const GameState& state, Money send);

// Throws GameError on any send violation.
std::pair<GameState, RoundRecord> play_round(const GameState& state, Money send,
                                             const TrusteeArchetype& archetype);

using TrustorPolicy = std::function<Money(int round, const GameState& state)>;

// Exactly config.rounds records. A violation at round k throws GameError
// whose message starts with "round k:".
std::vector<RoundRecord> play_game(const GameConfig& config, const TrusteeArchetype& archetype,
                                   const TrustorPolicy& policy);

}  // namespace beliefbench

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

#include "beliefbench/game.hpp"

#include <fmt/format.h>

#include "beliefbench/error.hpp"

namespace beliefbench {

std::string_view to_string(BudgetMode mode) {
  return mode == BudgetMode::reset ? "reset" : "carryover";
}

BudgetMode budget_mode_from_string(std::string_view text) {
  if (text == "reset") return BudgetMode::reset;
  if (text == "carryover") return BudgetMode::carryover;
  throw ConfigError(fmt::format("unknown budget mode \"{}\"", text));
}

std::string_view to_string(Granularity granularity) {
  return granularity == Granularity::whole_dollar ? "whole-dollar" : "cent";
}

Granularity granularity_from_string(std::string_view text) {
  if (text == "whole-dollar") return Granularity::whole_dollar;
  if (text == "cent") return Granularity::cent;
  throw ConfigError(fmt::format("unknown trustor granularity \"{}\"", text));
}

void GameConfig::validate() const {
  if (endowment.cents() <= 0) throw GameError("endowment must be positive");
  if (rounds < 1) throw GameError(fmt::format("rounds must be >= 1, got {}", rounds));
}

TrusteeArchetype TrusteeArchetype::with_cap_dollars(int dollars) {
  if (dollars <= 0) throw GameError(fmt::format("archetype cap must be positive, got {}", dollars));
  return TrusteeArchetype{Money::from_dollars(dollars)};
}

std::string TrusteeArchetype::label() const { return "M" + cap.to_string(); }

GameState GameState::start(const GameConfig& config) {
  config.validate();
  return GameState{config, {}, config.endowment};
}

Money trustee_return(const TrusteeArchetype& archetype, Money sent) {
  return min(archetype.cap, sent * 3);
}

std::optional<SendViolation> validate_send(const GameState& state, Money send) {
  if (!state.active()) {
    return SendViolation{fmt::format("game over after {} rounds", state.config.rounds)};
  }
  if (send > state.current_budget) {
    return SendViolation{fmt::format("send ${} exceeds budget ${}", send.to_string(),
                                     state.current_budget.to_string())};
  }
  if (state.config.granularity == Granularity::whole_dollar && !send.is_whole_dollars()) {
    return SendViolation{fmt::format("send ${} is not a whole-dollar amount", send.to_string())};
  }
  return std::nullopt;
}

std::pair<GameState, RoundRecord> play_round(const GameState& state, Money send,
                                             const TrusteeArchetype& archetype) {
  if (auto v = validate_send(state, send)) throw GameError(v->reason);
  RoundRecord rec;
  rec.round = state.next_round();
  rec.budget = state.current_budget;
  rec.sent = send;
  rec.tripled = send * 3;
  rec.returned = trustee_return(archetype, send);
  rec.trustor_payoff = rec.budget - send + rec.returned;
  rec.trustee_payoff = rec.tripled - rec.returned;

  GameState next = state;
  next.history.push_back(rec);
  next.current_budget =
      state.config.budget_mode == BudgetMode::reset ? state.config.endowment : rec.trustor_payoff;
  return {std::move(next), rec};
}

std::vector<RoundRecord> play_game(const GameConfig& config, const TrusteeArchetype& archetype,
                                   const TrustorPolicy& policy) {
  GameState state = GameState::start(config);
  while (state.active()) {
    const int round = state.next_round();
    const Money send = policy(round, state);
    if (auto v = validate_send(state, send)) {
      throw GameError(fmt::format("round {}: {}", round, v->reason));
    }
    state = play_round(state, send, archetype).first;
  }
  return state.history;
}

}  // namespace beliefbench

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

#include <doctest.h>

#include "beliefbench/game.hpp"
#include "oracles.hpp"

using namespace beliefbench;

namespace {

Money cents(std::int64_t c) { return Money::from_cents(c); }

}  // namespace

TEST_SUITE("game") {
  TEST_CASE("archetype worked examples") {
    struct Case {
      int cap;
      std::int64_t sent;
      std::int64_t returned;
    };
    const Case cases[] = {
        {1, 100, 100}, {1, 500, 100}, {1, 25, 75},   {3, 100, 300}, {3, 500, 300},
        {3, 75, 225},  {5, 100, 300}, {5, 500, 500}, {5, 150, 450},
    };
    for (const auto& c : cases) {
      CAPTURE(c.cap);
      CAPTURE(c.sent);
      const auto archetype = TrusteeArchetype::with_cap_dollars(c.cap);
      CHECK(trustee_return(archetype, cents(c.sent)) == cents(c.returned));
    }
  }

  TEST_CASE("return matches min(cap, 3s) for every cent up to $20") {
    for (int cap : {1, 3, 5}) {
      const auto archetype = TrusteeArchetype::with_cap_dollars(cap);
      for (std::int64_t s = 0; s <= 2000; ++s) {
        REQUIRE(trustee_return(archetype, cents(s)).cents() ==
                oracle::tripled_capped_cents(cap * 100, s));
      }
    }
  }

  TEST_CASE("labels") {
    CHECK(TrusteeArchetype::with_cap_dollars(3).label() == "M3");
    CHECK(TrusteeArchetype{cents(250)}.label() == "M2.50");
    CHECK_THROWS_AS(TrusteeArchetype::with_cap_dollars(0), GameError);
  }

  TEST_CASE("money is non-negative and formats without a sign") {
    CHECK_THROWS_AS(Money::from_cents(-1), GameError);
    CHECK_THROWS_AS(Money::from_dollars(1) - Money::from_dollars(2), GameError);
    CHECK(Money::from_cents(450).to_string() == "4.50");
    CHECK(Money::from_cents(1000).to_string() == "10");
    CHECK(Money::from_cents(5).to_string() == "0.05");
  }

  TEST_CASE("round accounting") {
    GameConfig config;
    const auto state = GameState::start(config);
    const auto [next, rec] = play_round(state, Money::from_dollars(4), TrusteeArchetype::with_cap_dollars(5));
    CHECK(rec.round == 1);
    CHECK(rec.tripled == Money::from_dollars(12));
    CHECK(rec.returned == Money::from_dollars(5));
    CHECK(rec.trustor_payoff == Money::from_dollars(11));
    CHECK(rec.trustee_payoff == Money::from_dollars(7));
    CHECK(next.current_budget == Money::from_dollars(10));
    CHECK(next.next_round() == 2);
  }

  TEST_CASE("carryover budget follows trustor payoff") {
    GameConfig config;
    config.budget_mode = BudgetMode::carryover;
    config.rounds = 3;
    const auto m1 = TrusteeArchetype::with_cap_dollars(1);
    const auto records = play_game(config, m1, [](int, const GameState& s) { return min(Money::from_dollars(5), s.current_budget); });
    REQUIRE(records.size() == 3);
    CHECK(records[0].budget == Money::from_dollars(10));
    CHECK(records[1].budget == Money::from_dollars(6));
    CHECK(records[2].budget == Money::from_dollars(2));
    CHECK(records[2].sent == Money::from_dollars(2));
  }

  TEST_CASE("send validation") {
    GameConfig config;
    config.rounds = 1;
    auto state = GameState::start(config);
    CHECK_FALSE(validate_send(state, Money::from_dollars(10)).has_value());
    CHECK(validate_send(state, Money::from_dollars(11)).value().reason == "send $11 exceeds budget $10");
    CHECK(validate_send(state, cents(150)).value().reason == "send $1.50 is not a whole-dollar amount");
    config.granularity = Granularity::cent;
    CHECK_FALSE(validate_send(GameState::start(config), cents(150)).has_value());
    state = play_round(state, Money{}, TrusteeArchetype::with_cap_dollars(3)).first;
    CHECK(validate_send(state, Money{}).value().reason == "game over after 1 rounds");
  }

  TEST_CASE("play_game names the failing round") {
    GameConfig config;
    const auto m3 = TrusteeArchetype::with_cap_dollars(3);
    try {
      play_game(config, m3, [](int round, const GameState&) {
        return Money::from_dollars(round == 4 ? 12 : 1);
      });
      FAIL("expected GameError");
    } catch (const GameError& e) {
      CHECK(std::string(e.what()).rfind("round 4:", 0) == 0);
    }
  }

  TEST_CASE("config validation and enum strings") {
    GameConfig config;
    config.rounds = 0;
    CHECK_THROWS_AS(config.validate(), GameError);
    CHECK(budget_mode_from_string("carryover") == BudgetMode::carryover);
    CHECK(to_string(Granularity::whole_dollar) == "whole-dollar");
    CHECK_THROWS_AS(budget_mode_from_string("forever"), ConfigError);
  }
}

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

#include <fstream>

#include "beliefbench/error.hpp"
#include "beliefbench/runner.hpp"
#include "scenarios.hpp"

using namespace beliefbench;
using namespace beliefbench::testing;

namespace {

const std::vector<std::string> kLevels3 = {"High", "Low", "Moderate"};

std::vector<std::vector<double>> ordered_groups(const std::map<std::string, std::vector<double>>& g,
                                                const std::vector<std::string>& levels) {
  std::vector<std::vector<double>> out;
  for (const auto& l : levels) out.push_back(g.at(l));
  return out;
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("population run matches the hand-computed policy effect") {
    const auto dir = scratch("runner_population");
    const auto bank = bundled_bank();
    MockStack stack(bundled_policy());
    ExperimentRunner runner(mock_config(dir), stack.gateway, bank, fixed_clock);
    const auto result = runner.run_population();

    const auto& c = outcome(result, "conscientiousness");
    CHECK(c.rho.value() == 1.0);
    const auto groups = hand_groups(dir, "conscientiousness", 10.0);
    const double eta = oracle::eta_squared(ordered_groups(groups, kLevels3));
    CHECK(std::abs(c.behavior_eta2.value() - eta) <= 1e-12);
    CHECK(c.delta_eta2.value() == doctest::Approx(std::abs(eta - 0.10)).epsilon(1e-12));
    CHECK(c.n_included == 50);
    CHECK(outcome(result, "openness_to_experience").rho.value() == 1.0);
    CHECK(result.median_rho.has_value());

    for (const char* f : {"manifest.json", "transcript.jsonl", "counts.json", "population.json", "population.csv",
                          "beliefs.json"}) {
      CHECK(std::filesystem::exists(dir / f));
    }
    CHECK_FALSE(std::filesystem::exists(dir / "transcript.partial.jsonl"));
    const auto counts = nlohmann::json::parse(slurp(dir / "counts.json"));
    CHECK(counts["records"] == 59);
    CHECK(counts["exclusions"] == 0);
    CHECK(replay_audit(dir).ok());
  }

  TEST_CASE("two runs are byte-identical") {
    const auto a = scratch("runner_det_a");
    const auto b = scratch("runner_det_b");
    const auto bank = bundled_bank();
    for (const auto& dir : {a, b}) {
      MockStack stack(bundled_policy());
      ExperimentRunner(mock_config(dir), stack.gateway, bank, fixed_clock).run_population();
    }
    CHECK(tree(a) == tree(b));
  }

  TEST_CASE("parallelism does not change results") {
    const auto a = scratch("runner_par_a");
    const auto b = scratch("runner_par_b");
    const auto bank = bundled_bank();
    auto ca = mock_config(a);
    ca.parallelism = 1;
    auto cb = mock_config(b);
    cb.parallelism = 8;
    MockStack sa(bundled_policy());
    MockStack sb(bundled_policy());
    ExperimentRunner(ca, sa.gateway, bank, fixed_clock).run_population();
    ExperimentRunner(cb, sb.gateway, bank, fixed_clock).run_population();
    auto ta = tree(a);
    auto tb = tree(b);
    ta.erase("manifest.json");
    tb.erase("manifest.json");
    CHECK(ta == tb);
  }

  TEST_CASE("a reversed belief gives rho -1") {
    const auto dir = scratch("runner_reversed");
    auto policy = bundled_policy();
    policy.beliefs["conscientiousness"].ranking = {"Low", "Moderate", "High"};
    MockStack stack(policy);
    const auto bank = bundled_bank();
    const auto result = ExperimentRunner(mock_config(dir), stack.gateway, bank, fixed_clock).run_population();
    CHECK(outcome(result, "conscientiousness").rho.value() == -1.0);
  }

  TEST_CASE("constant behaviour is degenerate and excluded from medians") {
    const auto dir = scratch("runner_constant");
    auto policy = bundled_policy();
    policy.effects.clear();
    MockStack stack(policy);
    const auto bank = bundled_bank();
    const auto result = ExperimentRunner(mock_config(dir), stack.gateway, bank, fixed_clock).run_population();
    for (const auto& a : result.attributes) {
      CAPTURE(a.attribute);
      CHECK(a.degenerate);
      CHECK(a.behavior_eta2.value() == 0.0);
      CHECK(a.delta_eta2.value() == doctest::Approx(a.belief->omnibus_eta2));
    }
    CHECK_FALSE(result.median_rho.has_value());
    CHECK(slurp(dir / "population.csv").find(",median,NA,NA,450,0,") != std::string::npos);
  }

  TEST_CASE("missing attributes carry reasons") {
    const auto dir = scratch("runner_missing");
    auto policy = bundled_policy();
    policy.beliefs["conscientiousness"].ranking = {"High", "Low"};
    MockStack stack(policy);
    const auto bank = bundled_bank();
    auto config = mock_config(dir);
    config.n_personas = 2;
    const auto result = ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_population();
    CHECK(outcome(result, "conscientiousness").missing_reason ==
          "belief excluded: not a permutation of declared levels");
    CHECK_FALSE(outcome(result, "conscientiousness").rho.has_value());
    CHECK(outcome(result, "family_structure_at_16").missing_reason.rfind("levels without observations: ", 0) == 0);
    CHECK(replay_audit(dir).ok());
  }

  TEST_CASE("obeying agents track every imposed ranking") {
    const auto bank = bundled_bank();
    for (const auto& attribute : default_attributes()) {
      CAPTURE(attribute);
      const auto dir = scratch("runner_obey");
      MockStack stack(bundled_policy());
      auto config = mock_config(dir);
      config.attributes = {attribute};
      const auto results = ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_conditioning(
          {ConditioningMode::self, ConditioningMode::weak, ConditioningMode::strong});
      for (const auto& [mode, r] : results) {
        CAPTURE(to_string(mode));
        CHECK(outcome(r, attribute).rho.value() == 1.0);
      }
    }
  }

  TEST_CASE("ignoring agents report the composed correlation") {
    const auto dir = scratch("runner_ignore");
    auto policy = bundled_policy();
    policy.prior_mode = PriorMode::ignore;
    MockStack stack(policy);
    const auto bank = bundled_bank();
    const auto results = ExperimentRunner(mock_config(dir), stack.gateway, bank, fixed_clock).run_conditioning(
        {ConditioningMode::none, ConditioningMode::weak, ConditioningMode::strong});
    const auto& none = results.at(ConditioningMode::none);
    for (auto mode : {ConditioningMode::weak, ConditioningMode::strong}) {
      const double target = mode == ConditioningMode::weak ? 0.80 : 0.20;
      for (const auto& a : results.at(mode).attributes) {
        CAPTURE(a.attribute);
        const auto& base = outcome(none, a.attribute);
        REQUIRE(a.reference.has_value());
        const auto& elicited = a.belief->ranking_descending;
        CHECK(std::abs(std::abs(oracle::spearman(*a.reference, elicited) - target) -
                       oracle::min_distance_to_target(elicited, target)) <= 1e-12);
        const auto hand = hand_ranking(hand_groups(dir, a.attribute, 10.0), a.levels);
        CHECK(*base.behavioral_ranking == hand);
        CHECK(a.rho.value() == doctest::Approx(oracle::spearman(*a.reference, hand)).epsilon(1e-12));
      }
    }
    const auto& c = outcome(results.at(ConditioningMode::weak), "conscientiousness");
    CHECK(c.rho.value() == 1.0);
    CHECK(outcome(results.at(ConditioningMode::strong), "conscientiousness").rho.value() == 0.5);
  }

  TEST_CASE("individual fixture schedule") {
    const auto dir = scratch("runner_individual_fixture");
    auto policy = bundled_policy();
    policy.forecast_schedule = {0, 3, 3, 0, 0, 0};
    policy.actual_schedule = {2, 3, 5, 0, 0, 1};
    MockStack stack(policy);
    const auto bank = bundled_bank();
    auto config = mock_config(dir);
    config.n_personas = 5;
    const auto r = ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_individual();
    REQUIRE(r.overall_mae.has_value());
    CHECK(std::abs(*r.overall_mae - 5.0 / 6.0) <= 1e-12);
    CHECK(r.trajectories.size() == 15);
    const auto& m3 = r.archetypes.at(1);
    CHECK(m3.archetype == "M3");
    CHECK(m3.rounds.at(0).mae.value() == 2.0);
    CHECK(m3.rounds.at(1).mae.value() == 0.0);
    CHECK(m3.rounds.at(5).n_trajectories == 5);
    CHECK(replay_audit(dir).ok());
  }

  TEST_CASE("self-consistent agent has zero error everywhere") {
    const auto dir = scratch("runner_individual_zero");
    MockStack stack(bundled_policy());
    const auto bank = bundled_bank();
    auto config = mock_config(dir);
    config.n_personas = 10;
    const auto r = ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_individual();
    for (const auto& s : r.archetypes) {
      for (const auto& cell : s.rounds) {
        CHECK(cell.mae.value() == 0.0);
        CHECK(cell.n_trajectories == 10);
      }
    }
    CHECK(r.overall_mae.value() == 0.0);
  }

  TEST_CASE("an excluded action voids the trajectory") {
    const auto dir = scratch("runner_individual_void");
    auto policy = bundled_policy();
    policy.forecast_schedule = {0, 3, 3, 0, 0, 0};
    policy.actual_schedule = {2, 3, 5, 0, 0, 1};
    MockStack stack(policy);
    const auto bank = bundled_bank();
    auto config = mock_config(dir);
    config.n_personas = 2;
    config.archetypes = {3};
    ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_individual();

    auto records = read_transcript(dir / "transcript.jsonl");
    const std::string victim = records.front().persona_id;
    for (auto& r : records) {
      if (r.persona_id == victim && r.stage == "simulate" && r.round == 3) r.raw_response = "I refuse to say.";
    }
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    const auto files = assemble_results(manifest, records);
    const auto result = IndividualResult::from_json(nlohmann::json::parse(files.at("individual.json")));
    REQUIRE(result.trajectories.size() == 2);
    const auto& voided = result.trajectories[0].persona_id == victim ? result.trajectories[0] : result.trajectories[1];
    CHECK(voided.voided_at_round == 3);
    CHECK(voided.void_reason == "simulation excluded: no numeric decision");
    CHECK_FALSE(voided.mae.has_value());
    CHECK(result.archetypes[0].rounds[0].n_trajectories == 1);
    CHECK(std::abs(result.overall_mae.value() - 5.0 / 6.0) <= 1e-12);
  }

  TEST_CASE("carryover games keep the budget in prompts") {
    const auto dir = scratch("runner_carryover");
    MockStack stack(bundled_policy());
    const auto bank = bundled_bank();
    auto config = mock_config(dir);
    config.n_personas = 3;
    config.game.budget_mode = BudgetMode::carryover;
    config.archetypes = {1};
    const auto r = ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_individual();
    CHECK(r.budget_mode == "carryover");
    CHECK(replay_audit(dir).ok());
  }

  TEST_CASE("endowment ablation keeps rankings under proportional scaling") {
    const auto dir = scratch("runner_ablation");
    MockStack stack(bundled_policy());
    const auto bank = bundled_bank();
    const auto results =
        ExperimentRunner(mock_config(dir), stack.gateway, bank, fixed_clock).run_endowment_ablation({10, 44, 100});
    REQUIRE(results.size() == 3);
    for (const char* f : {"population_E10.csv", "population_E44.csv", "population_E100.csv", "ablation.json"}) {
      CHECK(std::filesystem::exists(dir / f));
    }
    const auto& base = results.at(1000);
    for (const auto& [cents, r] : results) {
      for (std::size_t i = 0; i < r.attributes.size(); ++i) {
        CHECK(r.attributes[i].rho == base.attributes[i].rho);
        CHECK(r.attributes[i].behavioral_ranking == base.attributes[i].behavioral_ranking);
      }
    }
  }

  TEST_CASE("replay audit detects tampering") {
    const auto dir = scratch("runner_tamper");
    MockStack stack(bundled_policy());
    const auto bank = bundled_bank();
    auto config = mock_config(dir);
    config.attributes = {"conscientiousness", "openness_to_experience"};
    ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_population();
    REQUIRE(replay_audit(dir).ok());

    const auto csv = slurp(dir / "population.csv");
    std::ofstream(dir / "population.csv") << csv.substr(0, csv.size() - 2) << "9\n";
    const auto edited = replay_audit(dir);
    CHECK_FALSE(edited.ok());
    CHECK(edited.mismatches.front().find("population.csv") != std::string::npos);
    std::ofstream(dir / "population.csv") << csv;
    REQUIRE(replay_audit(dir).ok());

    auto transcript = slurp(dir / "transcript.jsonl");
    const auto at = transcript.find("Finally, I will give ");
    REQUIRE(at != std::string::npos);
    const auto digit = at + std::string("Finally, I will give ").size();
    transcript[digit] = transcript[digit] == '0' ? '1' : '0';
    std::ofstream(dir / "transcript.jsonl") << transcript;
    const auto reparsed = replay_audit(dir);
    CHECK_FALSE(reparsed.ok());
  }

  TEST_CASE("a warm cache reproduces the run without agent calls") {
    const auto cache = scratch("runner_cache");
    const auto a = scratch("runner_cache_a");
    const auto b = scratch("runner_cache_b");
    const auto bank = bundled_bank();
    {
      MockStack stack(bundled_policy(), cache);
      ExperimentRunner(mock_config(a), stack.gateway, bank, fixed_clock).run_population();
      CHECK(stack.gateway.stats().inner_calls == 59);
    }
    MockStack warm(bundled_policy(), cache);
    ExperimentRunner(mock_config(b), warm.gateway, bank, fixed_clock).run_population();
    CHECK(warm.gateway.stats().inner_calls == 0);
    auto ta = tree(a);
    auto tb = tree(b);
    CHECK(nlohmann::json::parse(tb.at("counts.json"))["cache_hits"] == 59);
    ta.erase("counts.json");
    tb.erase("counts.json");
    CHECK(ta == tb);
  }

  TEST_CASE("an output directory belongs to one run") {
    const auto dir = scratch("runner_clash");
    const auto bank = bundled_bank();
    MockStack stack(bundled_policy());
    auto config = mock_config(dir);
    config.attributes = {"conscientiousness"};
    ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_population();
    CHECK_NOTHROW(ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_population());
    config.seed = 8;
    CHECK_THROWS_AS(ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_population(), Error);
  }

  TEST_CASE("undeclared attributes are configuration errors") {
    const auto dir = scratch("runner_undeclared");
    const auto bank = bundled_bank();
    MockStack stack(bundled_policy());
    auto config = mock_config(dir);
    config.attributes = {"shoe_size"};
    CHECK_THROWS_AS(ExperimentRunner(config, stack.gateway, bank, fixed_clock).run_population(), ConfigError);
  }
}

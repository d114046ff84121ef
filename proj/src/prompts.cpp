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

#include "beliefbench/prompts.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "beliefbench/error.hpp"
#include "beliefbench/prompt_template.hpp"

namespace beliefbench {

using ojson = nlohmann::ordered_json;

std::string_view to_string(HistoryMode mode) {
  return mode == HistoryMode::with_history ? "with-history" : "without-history";
}

HistoryMode history_mode_from_string(std::string_view text) {
  if (text == "with-history") return HistoryMode::with_history;
  if (text == "without-history") return HistoryMode::without_history;
  throw ConfigError(fmt::format("unknown history mode \"{}\"", text));
}

std::string render_history(std::span<const RoundRecord> rounds) {
  if (rounds.empty()) return std::string(kNoHistorySentinel);
  std::string out;
  for (const auto& r : rounds) {
    if (!out.empty()) out.push_back('\n');
    out += fmt::format("Round {}: you sent ${}; it became ${}; the other player returned ${}.",
                       r.round, r.sent.to_string(), r.tripled.to_string(), r.returned.to_string());
  }
  return out;
}

namespace {

void require_round(int round, int total, std::string_view what) {
  if (total < 1 || round < 1 || round > total) {
    throw TemplateError(fmt::format("{}: round {} outside 1..{}", what, round, total));
  }
}

std::string game_context(Money endowment) {
  return builtin_template("game_context").render({{"endowment", endowment.to_string()}});
}

std::string numbered_levels(const AttributeSpec& attribute) {
  std::string out;
  for (std::size_t i = 0; i < attribute.levels.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out += fmt::format("{}. {}", i + 1, attribute.levels[i]);
  }
  return out;
}

ojson string_field(std::string_view title, std::string_view description) {
  return ojson{{"title", title}, {"description", description}, {"type", "string"}};
}

ojson label_field(std::string_view title, std::string_view description) {
  ojson f = string_field(title, description);
  f["enum"] = {"small", "medium", "large"};
  return f;
}

ojson ranking_field() {
  return ojson{{"title", "Ranking Descending"},
               {"description", "every listed value, from highest to lowest"},
               {"type", "array"},
               {"items", {{"type", "string"}}}};
}

ojson wrap_attribute(std::string_view attribute, ojson inner) {
  ojson props = ojson::object();
  props[std::string(attribute)] = std::move(inner);
  return ojson{{"properties", std::move(props)}, {"required", {attribute}}};
}

}  // namespace

std::string ranking_schema(std::string_view attribute) {
  ojson props = ojson::object();
  props["ranking_descending"] = ranking_field();
  props["omnibus_effect_size"] =
      label_field("Omnibus Effect Size", "eta-squared of the attribute on interpersonal trust");
  props["contrast_effect_size"] =
      label_field("Contrast Effect Size", "eta-squared explained by the specific ordering");
  props["ordering_explanation"] = string_field("Ordering Explanation", "reasoning for the ordering");
  props["omnibus_effect_size_explanation"] =
      string_field("Omnibus Effect Size Explanation", "reasoning for the omnibus effect size");
  props["contrast_effect_size_explanation"] =
      string_field("Contrast Effect Size Explanation", "reasoning for the contrast effect size");
  ojson inner{{"title", display_name(attribute)},
              {"type", "object"},
              {"properties", std::move(props)},
              {"required", {"ranking_descending", "omnibus_effect_size", "contrast_effect_size",
                            "ordering_explanation"}}};
  return wrap_attribute(attribute, std::move(inner)).dump();
}

std::string dollar_schema(const AttributeSpec& attribute) {
  ojson level_props = ojson::object();
  for (const auto& level : attribute.levels) {
    level_props[level] = ojson{
        {"type", "object"},
        {"properties",
         {{"mean", {{"title", "Mean"}, {"description", "average dollars sent"}, {"type", "number"}}},
          {"sd", {{"title", "Sd"}, {"description", "standard deviation of dollars sent"}, {"type", "number"}}}}},
        {"required", {"mean", "sd"}}};
  }
  ojson props = ojson::object();
  props["ranking_descending"] = ranking_field();
  props["mean_sd_explanation"] = string_field("Mean Sd Explanation", "reasoning for the estimates");
  props["mean_sd_level_stats"] = ojson{{"title", "Mean Sd Level Stats"},
                                       {"type", "object"},
                                       {"properties", std::move(level_props)}};
  ojson inner{{"title", display_name(attribute.name)},
              {"type", "object"},
              {"properties", std::move(props)},
              {"required", {"mean_sd_level_stats"}}};
  return wrap_attribute(attribute.name, std::move(inner)).dump();
}

std::string forecast_schema() {
  ojson props = ojson::object();
  props["send_amount"] = ojson{{"title", "Send Amount"},
                               {"description", "whole-dollar amount you will send in this round"},
                               {"type", "integer"},
                               {"minimum", 0}};
  props["explanation"] = string_field("Explanation", "reasoning for this specific decision");
  return ojson{{"properties", std::move(props)}, {"required", {"send_amount", "explanation"}}}.dump();
}

std::string format_instructions(std::string_view schema) {
  return builtin_template("format_instructions").render({{"schema", std::string(schema)}});
}

std::string react_format_instructions() {
  return "Respond using exactly this format:\n"
         "THOUGHT: <your reasoning as this persona>\n"
         "ACTION: <the whole-dollar amount you transfer this round>\n"
         "OBSERVATION: <what you expect the other player to do>";
}

std::string build_population_roleplay(const Persona& persona, Money initial_amount,
                                      std::string_view prior_block) {
  if (initial_amount.cents() <= 0) throw TemplateError("initial amount must be positive");
  return builtin_template("population_roleplay")
      .render({{"initial_amount", initial_amount.to_string()},
               {"persona_details", render_persona_text(persona)},
               {"theoretical_props", std::string(prior_block)}});
}

std::string build_individual_roleplay(const Persona& persona, int round_number, int total_rounds,
                                      Money budget, std::string_view history_block,
                                      std::string_view prior_block) {
  require_round(round_number, total_rounds, "individual role-play");
  return builtin_template("individual_roleplay")
      .render({{"persona", render_persona_text(persona)},
               {"round_number", std::to_string(round_number)},
               {"total_rounds", std::to_string(total_rounds)},
               {"remaining_amount", budget.to_string()},
               {"round_history", std::string(history_block)},
               {"theoretical_props", std::string(prior_block)},
               {"format_instructions", react_format_instructions()}});
}

std::string build_population_elicitation(ElicitationStrategy strategy,
                                         const AttributeSpec& attribute, Money endowment,
                                         int group_size) {
  if (attribute.levels.size() < 2) {
    throw TemplateError(fmt::format("attribute {}: elicitation needs at least 2 levels", attribute.name));
  }
  switch (strategy) {
    case ElicitationStrategy::NoCtxTr:
      return builtin_template("elicit_noctx_tr")
          .render({{"attribute", attribute.name},
                   {"level_list", numbered_levels(attribute)},
                   {"format_instructions", format_instructions(ranking_schema(attribute.name))}});
    case ElicitationStrategy::CtxTr:
      return builtin_template("elicit_ctx_tr")
          .render({{"attribute", attribute.name},
                   {"level_list", numbered_levels(attribute)},
                   {"game_context", game_context(endowment)},
                   {"format_instructions", format_instructions(ranking_schema(attribute.name))}});
    case ElicitationStrategy::CtxDollar: {
      std::string inline_levels;
      for (const auto& level : attribute.levels) {
        if (!inline_levels.empty()) inline_levels += ", ";
        inline_levels += level;
      }
      return builtin_template("elicit_ctx_dollar")
          .render({{"attribute", attribute.name},
                   {"game_context", game_context(endowment)},
                   {"level_inline", inline_levels},
                   {"group_size", std::to_string(group_size)},
                   {"format_instructions", format_instructions(dollar_schema(attribute))}});
    }
  }
  throw TemplateError("unknown elicitation strategy");
}

std::string archetype_description(const TrusteeArchetype& archetype) {
  const auto cents = archetype.cap.cents();
  if (cents == 100) return std::string(builtin_resource("archetype_m1"));
  if (cents == 300) return std::string(builtin_resource("archetype_m3"));
  if (cents == 500) return std::string(builtin_resource("archetype_m5"));

  const Money cap = archetype.cap;
  auto example = [&](Money sent) {
    return fmt::format("- If Player A sends ${}, you receive ${}. You return ${}.", sent.to_string(),
                       (sent * 3).to_string(), min(cap, sent * 3).to_string());
  };
  const Money small = Money::from_cents(std::max<std::int64_t>(1, cents / 4));
  const std::string examples = example(Money::from_dollars(1)) + "\n" +
                               example(Money::from_dollars(5)) + "\n" + example(small);
  return builtin_template("archetype_generic").render({{"cap", cap.to_string()}, {"examples", examples}});
}

std::string build_individual_forecast(const Persona& persona,
                                      std::string_view archetype_description, int timestep,
                                      int total_rounds, std::string_view history_block,
                                      Money endowment, HistoryMode mode) {
  require_round(timestep, total_rounds, "individual forecast");
  std::string history_section;
  if (mode == HistoryMode::with_history) {
    history_section = fmt::format("\n===== GAME HISTORY =====\n\nPrevious rounds:\n{}\n", history_block);
  }
  return builtin_template("individual_forecast")
      .render({{"persona", render_persona_text(persona)},
               {"simulation_context", game_context(endowment)},
               {"opponent_archetype", std::string(archetype_description)},
               {"history_section", history_section},
               {"total_rounds", std::to_string(total_rounds)},
               {"endowment", endowment.to_string()},
               {"timestep", std::to_string(timestep)},
               {"format_instructions", format_instructions(forecast_schema())}});
}

std::string build_prior_block(std::span<const BeliefRecord> beliefs) {
  std::string out = "Follow the following correlations while making your decision:";
  for (const auto& belief : beliefs) {
    const auto& r = belief.ranking_descending;
    if (r.size() < 2) {
      throw TemplateError(fmt::format("belief for {}: incomplete ranking ({} levels)",
                                      belief.attribute, r.size()));
    }
    std::string chain;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      if (i > 0) chain += ", and ";
      chain += fmt::format("{}s are more interpersonal trusting than {}s", r[i], r[i + 1]);
    }
    out += fmt::format("\n\nFor {}: {}.", display_name(belief.attribute), chain);
  }
  return out;
}

}  // namespace beliefbench

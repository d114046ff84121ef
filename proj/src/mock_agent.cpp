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

#include "beliefbench/mock_agent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "beliefbench/digest.hpp"
#include "beliefbench/persona_bank.hpp"
#include "beliefbench/rng.hpp"

namespace beliefbench {

namespace {

constexpr std::string_view kPopulationMarker = "===== YOUR CHARACTER PROFILE =====";
constexpr std::string_view kIndividualMarker = "YOU ARE PLAYING A MULTI-ROUND TRUST GAME";
constexpr std::string_view kForecastMarker = "You are currently in round ";
constexpr std::string_view kRankingMarker = "You are a researcher studying interpersonal trust.";
constexpr std::string_view kDollarMarker = "Imagine an experiment where we control for various factors";
constexpr std::string_view kPriorHeader = "Follow the following correlations while making your decision:";
constexpr std::string_view kChainLink = " are more interpersonal trusting than ";

bool contains(std::string_view text, std::string_view needle) {
  return text.find(needle) != std::string_view::npos;
}

// Text between `open` and the next `close`, or nullopt.
std::optional<std::string_view> between(std::string_view text, std::string_view open, std::string_view close) {
  const auto a = text.find(open);
  if (a == std::string_view::npos) return std::nullopt;
  const auto start = a + open.size();
  const auto b = text.find(close, start);
  if (b == std::string_view::npos) return std::nullopt;
  return text.substr(start, b - start);
}

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.push_back(text.substr(pos));
      return out;
    }
    out.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
}

double parse_amount(std::string_view prompt, std::string_view lead) {
  const auto at = prompt.find(lead);
  if (at == std::string_view::npos) throw MockError(fmt::format("prompt lacks \"{}\"", lead));
  std::size_t i = at + lead.size();
  std::size_t j = i;
  while (j < prompt.size() && (std::isdigit(static_cast<unsigned char>(prompt[j])) || prompt[j] == '.')) ++j;
  if (j == i) throw MockError(fmt::format("no amount after \"{}\"", lead));
  return std::stod(std::string(prompt.substr(i, j - i)));
}

int parse_int_after(std::string_view prompt, std::string_view lead) {
  return static_cast<int>(parse_amount(prompt, lead));
}

// Persona lines "Display Name: Level" keyed by display name.
std::map<std::string, std::string> parse_persona(std::string_view block) {
  std::map<std::string, std::string> out;
  for (auto line : split(block, "\n")) {
    const auto colon = line.find(": ");
    if (colon == std::string_view::npos) continue;
    out.emplace(std::string(line.substr(0, colon)), std::string(line.substr(colon + 2)));
  }
  return out;
}

// Imposed rankings keyed by display name; labels keep their plural "s".
std::map<std::string, std::vector<std::string>> parse_prior(std::string_view prompt) {
  std::map<std::string, std::vector<std::string>> out;
  const auto at = prompt.find(kPriorHeader);
  if (at == std::string_view::npos) return out;
  auto rest = prompt.substr(at + kPriorHeader.size());
  const auto end = rest.find("\n\n=====");
  if (end != std::string_view::npos) rest = rest.substr(0, end);
  for (auto para : split(rest, "\n\n")) {
    if (!para.starts_with("For ")) continue;
    const auto colon = para.find(": ");
    if (colon == std::string_view::npos) continue;
    std::string_view chain = para.substr(colon + 2);
    if (chain.ends_with(".")) chain.remove_suffix(1);
    std::vector<std::string> order;
    for (auto pair : split(chain, ", and ")) {
      const auto link = pair.find(kChainLink);
      if (link == std::string_view::npos) break;
      if (order.empty()) order.emplace_back(pair.substr(0, link));
      order.emplace_back(pair.substr(link + kChainLink.size()));
    }
    if (order.size() >= 2) out.emplace(std::string(para.substr(4, colon - 4)), std::move(order));
  }
  return out;
}

struct Context {
  std::map<std::string, std::string> persona;
  double endowment = 10.0;
  double budget = 10.0;
};

double whole(double x) { return std::floor(x + 0.5); }

double policy_send(const MockPolicy& policy, const Context& ctx, std::string_view prompt) {
  if (policy.prior_mode == PriorMode::obey) {
    const auto prior = parse_prior(prompt);
    double score = 0.0;
    int used = 0;
    for (const auto& [display, order] : prior) {
      const auto level = ctx.persona.find(display);
      if (level == ctx.persona.end()) continue;
      const auto it = std::find(order.begin(), order.end(), level->second + "s");
      if (it == order.end()) continue;
      const double k = static_cast<double>(order.size());
      score += (k - 1.0 - static_cast<double>(it - order.begin())) / (k - 1.0);
      ++used;
    }
    if (used > 0) return std::clamp(whole(ctx.endowment * score / used), 0.0, ctx.budget);
  }
  double send = policy.base;
  for (const auto& [attribute, levels] : policy.effects) {
    const auto level = ctx.persona.find(display_name(attribute));
    if (level == ctx.persona.end()) continue;
    const auto effect = levels.find(level->second);
    if (effect != levels.end()) send += effect->second;
  }
  if (policy.proportional) send *= ctx.endowment / 10.0;
  return std::clamp(whole(send), 0.0, ctx.budget);
}

const std::vector<std::string_view> kFillers = {
    "I weigh what my profile suggests about how I treat strangers.",
    "People like me tend to think a fair exchange is worth the risk.",
    "I consider both my caution and the chance of a good return.",
    "My background shapes how far I am willing to rely on others.",
    "I balance keeping money safe against the benefit of cooperation.",
};

std::string_view filler(Rng& rng) { return kFillers[rng.uniform(kFillers.size())]; }

std::string maybe_fence(Rng& rng, const std::string& json) {
  return rng.uniform(2) == 0 ? json : "```json\n" + json + "\n```";
}

std::string ranking_answer(const MockPolicy& policy, std::string_view prompt, Rng& rng) {
  auto name = between(prompt, "For the trait \"", "\"");
  if (!name) name = between(prompt, "For the attribute \"", "\"");
  if (!name) throw MockError("ranking elicitation without an attribute name");
  const std::string attribute(*name);
  const auto list = between(prompt, "values:\n", "\n\n");
  if (!list) throw MockError("ranking elicitation without a level list");
  std::vector<std::string> declared;
  for (auto line : split(*list, "\n")) {
    const auto dot = line.find(". ");
    if (dot != std::string_view::npos) declared.emplace_back(line.substr(dot + 2));
  }
  std::vector<std::string> ranking = declared;
  std::string label = "small";
  if (const auto it = policy.beliefs.find(attribute); it != policy.beliefs.end()) {
    ranking = it->second.ranking;
    label = it->second.omnibus_label;
  }
  nlohmann::ordered_json inner{
      {"ranking_descending", ranking},
      {"omnibus_effect_size", label},
      {"contrast_effect_size", label},
      {"ordering_explanation", std::string(filler(rng))},
      {"omnibus_effect_size_explanation", std::string(filler(rng))},
      {"contrast_effect_size_explanation", std::string(filler(rng))}};
  nlohmann::ordered_json root;
  root[attribute] = std::move(inner);
  return "Here is my assessment.\n\n" + maybe_fence(rng, root.dump(2));
}

std::string dollar_answer(const MockPolicy& policy, std::string_view prompt, Rng& rng) {
  const auto name = between(prompt, "while examining the effect of ", ". Your task");
  if (!name) throw MockError("dollar elicitation without an attribute name");
  const std::string attribute(*name);
  const auto inline_levels = between(prompt, "For each level of " + attribute + " (", ") listed below");
  if (!inline_levels) throw MockError("dollar elicitation without a level list");
  std::vector<std::string> declared;
  for (auto l : split(*inline_levels, ", ")) declared.emplace_back(l);
  const double endowment = parse_amount(prompt, "YOU HAVE BEEN GIVEN $");

  std::vector<std::string> ranking = declared;
  const MockBelief* belief = nullptr;
  if (const auto it = policy.beliefs.find(attribute); it != policy.beliefs.end()) {
    belief = &it->second;
    ranking = belief->ranking;
  }
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  for (const auto& level : declared) {
    if (belief && belief->level_stats) {
      const auto s = belief->level_stats->find(level);
      if (s != belief->level_stats->end()) {
        stats[level] = {{"mean", s->second.mean}, {"sd", s->second.sd}};
        continue;
      }
    }
    const auto pos = std::find(ranking.begin(), ranking.end(), level) - ranking.begin();
    const double k = static_cast<double>(ranking.size());
    const double score = k > 1 ? (k - 1.0 - static_cast<double>(pos)) / (k - 1.0) : 0.5;
    const double mean = std::floor(endowment * (0.3 + 0.4 * score) * 2.0 + 0.5) / 2.0;
    stats[level] = {{"mean", mean}, {"sd", 2.0}};
  }
  nlohmann::ordered_json root;
  root[attribute] = {{"mean_sd_level_stats", std::move(stats)},
                     {"mean_sd_explanation", std::string(filler(rng))}};
  return "Estimates follow.\n\n" + maybe_fence(rng, root.dump(2));
}

int schedule_or(const std::vector<int>& schedule, int round, double fallback, double budget) {
  if (round >= 1 && static_cast<std::size_t>(round) <= schedule.size()) {
    return static_cast<int>(std::clamp(static_cast<double>(schedule[round - 1]), 0.0, budget));
  }
  return static_cast<int>(fallback);
}

}  // namespace

MockPolicy MockPolicy::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {"seed", "base", "effects", "proportional", "prior_mode",
                                                 "beliefs", "actual_schedule", "forecast_schedule"};
  if (!j.is_object()) throw MockError("mock policy must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw MockError(fmt::format("unknown mock policy field \"{}\"", key));
    }
  }
  try {
    MockPolicy p;
    p.seed = j.value("seed", std::uint64_t{0});
    p.base = j.value("base", 5.0);
    if (j.contains("effects")) p.effects = j["effects"].get<std::map<std::string, std::map<std::string, double>>>();
    p.proportional = j.value("proportional", false);
    const std::string mode = j.value("prior_mode", "ignore");
    if (mode == "obey") p.prior_mode = PriorMode::obey;
    else if (mode == "ignore") p.prior_mode = PriorMode::ignore;
    else throw MockError(fmt::format("unknown prior_mode \"{}\"", mode));
    if (j.contains("beliefs")) {
      for (const auto& [attribute, b] : j["beliefs"].items()) {
        MockBelief belief;
        belief.ranking = b.at("ranking").get<std::vector<std::string>>();
        belief.omnibus_label = b.value("omnibus", "small");
        if (b.contains("level_stats")) {
          std::map<std::string, LevelStats> stats;
          for (const auto& [level, s] : b["level_stats"].items()) {
            stats[level] = LevelStats{s.at("mean").get<double>(), s.at("sd").get<double>()};
          }
          belief.level_stats = std::move(stats);
        }
        p.beliefs.emplace(attribute, std::move(belief));
      }
    }
    p.actual_schedule = j.value("actual_schedule", std::vector<int>{});
    p.forecast_schedule = j.value("forecast_schedule", std::vector<int>{});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw MockError(fmt::format("malformed mock policy: {}", e.what()));
  }
}

MockPolicy MockPolicy::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MockError(fmt::format("cannot open mock policy {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  const auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw MockError(fmt::format("{}: not valid JSON", path.string()));
  return from_json(j);
}

nlohmann::ordered_json MockPolicy::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["base"] = base;
  j["effects"] = effects;
  j["proportional"] = proportional;
  j["prior_mode"] = prior_mode == PriorMode::obey ? "obey" : "ignore";
  nlohmann::ordered_json bs = nlohmann::ordered_json::object();
  for (const auto& [attribute, b] : beliefs) {
    nlohmann::ordered_json entry{{"ranking", b.ranking}, {"omnibus", b.omnibus_label}};
    if (b.level_stats) {
      nlohmann::ordered_json stats = nlohmann::ordered_json::object();
      for (const auto& [level, s] : *b.level_stats) stats[level] = {{"mean", s.mean}, {"sd", s.sd}};
      entry["level_stats"] = std::move(stats);
    }
    bs[attribute] = std::move(entry);
  }
  j["beliefs"] = std::move(bs);
  j["actual_schedule"] = actual_schedule;
  j["forecast_schedule"] = forecast_schedule;
  return j;
}

std::string MockPolicy::digest() const { return sha256_hex(to_json().dump()); }

std::string mock_complete(const MockPolicy& policy, std::string_view prompt) {
  Rng rng(policy.seed ^ fnv1a64(prompt));

  if (contains(prompt, kPopulationMarker)) {
    Context ctx;
    ctx.persona = parse_persona(between(prompt, std::string(kPopulationMarker) + "\n\n", "\n\n").value_or(""));
    ctx.endowment = ctx.budget = parse_amount(prompt, "YOU HAVE EXACTLY $");
    const int send = static_cast<int>(policy_send(policy, ctx, prompt));
    return fmt::format("BELIEF: {}\nDESIRE: {}\nINTENTION: {}\nFinally, I will give {} dollars.",
                       filler(rng), filler(rng), filler(rng), send);
  }
  if (contains(prompt, kIndividualMarker)) {
    Context ctx;
    ctx.persona = parse_persona(between(prompt, "following persona:\n\n", "\n\n=====").value_or(""));
    ctx.budget = parse_amount(prompt, "YOU HAVE EXACTLY $");
    ctx.endowment = ctx.budget;
    const int round = parse_int_after(prompt, "THIS IS ROUND ");
    const int send = schedule_or(policy.actual_schedule, round, policy_send(policy, ctx, prompt), ctx.budget);
    return fmt::format("THOUGHT: {}\nACTION: send {} dollars\nOBSERVATION: {}", filler(rng), send, filler(rng));
  }
  if (contains(prompt, kForecastMarker)) {
    Context ctx;
    ctx.persona = parse_persona(between(prompt, "following persona:\n\n", "\n\nConsider").value_or(""));
    ctx.endowment = ctx.budget = parse_amount(prompt, "you are given $");
    const int round = parse_int_after(prompt, kForecastMarker);
    const int send = schedule_or(policy.forecast_schedule, round, policy_send(policy, ctx, prompt), ctx.budget);
    nlohmann::ordered_json j{{"send_amount", send}, {"explanation", std::string(filler(rng))}};
    return maybe_fence(rng, j.dump(2));
  }
  if (contains(prompt, kRankingMarker)) return ranking_answer(policy, prompt, rng);
  if (contains(prompt, kDollarMarker)) return dollar_answer(policy, prompt, rng);
  throw MockError("unrecognized prompt shape");
}

MockAgent::MockAgent(MockPolicy policy, SamplingParams params)
    : policy_(std::move(policy)), params_(params), model_id_("mock:" + policy_.digest().substr(0, 16)) {
  params_.validate();
}

std::string MockAgent::complete(const std::string& prompt) { return mock_complete(policy_, prompt); }

}  // namespace beliefbench

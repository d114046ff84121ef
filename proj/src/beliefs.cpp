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

#include "beliefbench/beliefs.hpp"

#include <fmt/format.h>

#include "beliefbench/error.hpp"

namespace beliefbench {

std::string_view to_string(ElicitationStrategy strategy) {
  switch (strategy) {
    case ElicitationStrategy::NoCtxTr: return "NoCtxTr";
    case ElicitationStrategy::CtxTr: return "CtxTr";
    case ElicitationStrategy::CtxDollar: return "CtxDollar";
  }
  return "CtxTr";
}

ElicitationStrategy strategy_from_string(std::string_view text) {
  if (text == "NoCtxTr" || text == "NoCtx+Tr") return ElicitationStrategy::NoCtxTr;
  if (text == "CtxTr" || text == "Ctx+Tr") return ElicitationStrategy::CtxTr;
  if (text == "CtxDollar" || text == "Ctx+$") return ElicitationStrategy::CtxDollar;
  throw ConfigError(fmt::format("unknown elicitation strategy \"{}\"", text));
}

nlohmann::ordered_json to_json(const BeliefRecord& belief) {
  nlohmann::ordered_json j;
  j["attribute"] = belief.attribute;
  j["ranking_descending"] = belief.ranking_descending;
  j["omnibus_eta2"] = belief.omnibus_eta2;
  j["contrast_eta2"] = belief.contrast_eta2 ? nlohmann::ordered_json(*belief.contrast_eta2)
                                            : nlohmann::ordered_json(nullptr);
  if (belief.level_stats) {
    nlohmann::ordered_json stats = nlohmann::ordered_json::object();
    for (const auto& [level, s] : *belief.level_stats) {
      stats[level] = {{"mean", s.mean}, {"sd", s.sd}};
    }
    j["level_stats"] = std::move(stats);
  } else {
    j["level_stats"] = nullptr;
  }
  j["strategy"] = belief.strategy;
  j["raw_digest"] = belief.raw_digest;
  j["perturbation"] = belief.perturbation;
  return j;
}

BeliefRecord belief_from_json(const nlohmann::json& j) {
  BeliefRecord b;
  b.attribute = j.at("attribute").get<std::string>();
  b.ranking_descending = j.at("ranking_descending").get<std::vector<std::string>>();
  b.omnibus_eta2 = j.at("omnibus_eta2").get<double>();
  if (j.contains("contrast_eta2") && !j["contrast_eta2"].is_null()) {
    b.contrast_eta2 = j["contrast_eta2"].get<double>();
  }
  if (j.contains("level_stats") && !j["level_stats"].is_null()) {
    std::map<std::string, LevelStats> stats;
    for (const auto& [level, s] : j["level_stats"].items()) {
      stats[level] = LevelStats{s.at("mean").get<double>(), s.at("sd").get<double>()};
    }
    b.level_stats = std::move(stats);
  }
  b.strategy = j.value("strategy", "");
  b.raw_digest = j.value("raw_digest", "");
  b.perturbation = j.value("perturbation", "");
  return b;
}

}  // namespace beliefbench

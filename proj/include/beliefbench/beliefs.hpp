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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace beliefbench {

enum class ElicitationStrategy { NoCtxTr, CtxTr, CtxDollar };

std::string_view to_string(ElicitationStrategy strategy);
ElicitationStrategy strategy_from_string(std::string_view text);

struct LevelStats {
  double mean = 0.0;
  double sd = 0.0;

  friend bool operator==(const LevelStats&, const LevelStats&) = default;
};

// One elicited (or imposed) belief about one attribute.
struct BeliefRecord {
  std::string attribute;
  std::vector<std::string> ranking_descending;
  double omnibus_eta2 = 0.0;
  std::optional<double> contrast_eta2;
  std::optional<std::map<std::string, LevelStats>> level_stats;
  // Provenance.
  std::string strategy;
  std::string raw_digest;
  std::string perturbation;  // empty unless an imposed prior

  friend bool operator==(const BeliefRecord&, const BeliefRecord&) = default;
};

nlohmann::ordered_json to_json(const BeliefRecord& belief);
BeliefRecord belief_from_json(const nlohmann::json& j);

}  // namespace beliefbench

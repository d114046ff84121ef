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

// Fixture inputs for the prompt goldens.

#include <string>
#include <vector>

#include "beliefbench/prompts.hpp"

namespace beliefbench::testing {

inline Persona fixture_persona() {
  return Persona{"fixture",
                 {{"age", "30-44"}, {"conscientiousness", "High"}, {"us_citizenship_status", "A U.S. citizen"}},
                 Split::test};
}

inline AttributeSpec activity_level() {
  AttributeSpec s;
  s.name = "general_activity_level";
  s.kind = AttributeKind::categorical;
  s.levels = {"Lightly active", "Moderately active", "Sedentary", "Unstructured", "Very active"};
  for (const auto& l : s.levels) s.split_tags[l] = {Split::test};
  return s;
}

inline BeliefRecord ranked(std::string attribute, std::vector<std::string> ranking) {
  BeliefRecord b;
  b.attribute = std::move(attribute);
  b.ranking_descending = std::move(ranking);
  return b;
}

inline std::vector<BeliefRecord> sample_prior() {
  return {
      ranked("age", {"30-44", "45-64", "18-29", "65+"}),
      ranked("political_views",
             {"Slightly liberal", "Slightly conservative", "Extremely liberal", "Extremely conservative"}),
      ranked("same_residence_since_16", {"Same city", "Same state, different city", "Different state"}),
      ranked("family_structure_at_16", {"1", "2", "3", "4", "5", "6"}),
      ranked("work_status", {"Retired", "Other", "Keeping house", "In school"}),
      ranked("religion", {"Orthodox-Christian", "Protestant", "Jewish", "Muslim/Islam", "None"}),
      ranked("us_citizenship_status", {"A U.S. citizen", "Not a U.S. citizen"}),
      ranked("highest_degree_received",
             {"Graduate", "Bachelor's", "Associate/junior college", "High school", "Less than high school"}),
      ranked("conscientiousness", {"High", "Moderate", "Low"}),
      ranked("openness_to_experience", {"High", "Moderate", "Low"}),
  };
}

inline const std::string kRound1History = "Round 1: you sent $4; it became $12; the other player returned $3.";

}  // namespace beliefbench::testing

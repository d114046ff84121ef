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

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "beliefbench/beliefs.hpp"
#include "beliefbench/money.hpp"
#include "beliefbench/persona_bank.hpp"

namespace beliefbench {

template <typename T>
struct ParseOutcome {
  enum class Status { parsed, excluded };

  Status status = Status::excluded;
  std::optional<T> value;
  std::string reason;  // always set when excluded

  static ParseOutcome ok(T v) { return {Status::parsed, std::move(v), {}}; }
  static ParseOutcome exclude(std::string why) { return {Status::excluded, std::nullopt, std::move(why)}; }

  bool parsed() const { return status == Status::parsed; }
};

// Exclusion reasons shared with transcripts and reports.
inline constexpr std::string_view kNoNumericDecision = "no numeric decision";
inline constexpr std::string_view kBoundViolation = "bound violation";

// Scans for "$?digits" candidates and returns the first one in [0, max_amount]
// whole dollars. A first candidate that breaks the constraints (too large,
// negative, or fractional) excludes the response unless the text carries a
// "Finally, I will give" clause, in which case scanning continues.
ParseOutcome<Money> extract_transfer(std::string_view text, Money max_amount);

// small -> 0.035, medium -> 0.10, large -> 0.20 (case-insensitive). Throws
// Error on any other label.
// Forecast answers carry a JSON "send_amount"; free text falls back to extract_transfer.
ParseOutcome<Money> parse_forecast(std::string_view text, Money max_amount);

double label_to_eta(std::string_view label);

ParseOutcome<BeliefRecord> parse_ranking_belief(
    std::string_view text, const AttributeSpec& attribute,
    ElicitationStrategy strategy = ElicitationStrategy::CtxTr);

// Ranking is derived from the reported means (ties in declared order) and the
// omnibus effect from the summary ANOVA with n_per_group per level.
ParseOutcome<BeliefRecord> parse_dollar_belief(std::string_view text,
                                               const AttributeSpec& attribute, Money endowment,
                                               int n_per_group = 100);

// Locates the first parseable JSON object in free text (code fences and
// surrounding prose allowed).
std::optional<nlohmann::json> find_json_object(std::string_view text);

}  // namespace beliefbench

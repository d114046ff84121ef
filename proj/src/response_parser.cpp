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

#include "beliefbench/response_parser.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "beliefbench/digest.hpp"
#include "beliefbench/error.hpp"
#include "beliefbench/prompts.hpp"
#include "beliefbench/stats.hpp"

namespace beliefbench {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct Candidate {
  std::int64_t dollars = 0;
  bool valid = false;
};

// Candidates follow \$?(\d+). A candidate is invalid when signed, fractional or above the bound.
std::vector<Candidate> scan_candidates(std::string_view text, Money max_amount) {
  std::vector<Candidate> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && is_digit(text[i])) ++i;
    const std::string_view digits = text.substr(start, i - start);
    std::size_t lead = start;
    if (lead > 0 && text[lead - 1] == '$') --lead;
    const bool negative = lead > 0 && text[lead - 1] == '-';
    bool fractional = false;
    if (i + 1 < text.size() && text[i] == '.' && is_digit(text[i + 1])) {
      fractional = true;
      ++i;
      while (i < text.size() && is_digit(text[i])) ++i;
    }
    Candidate c;
    const auto first_nonzero = digits.find_first_not_of('0');
    const std::size_t significant = first_nonzero == std::string_view::npos ? 0 : digits.size() - first_nonzero;
    if (significant <= 12) {
      for (char d : digits) c.dollars = c.dollars * 10 + (d - '0');
      c.valid = !negative && !fractional && c.dollars * 100 <= max_amount.cents();
    }
    out.push_back(c);
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

const nlohmann::json& belief_object(const nlohmann::json& root, const std::string& attribute) {
  if (root.contains(attribute) && root[attribute].is_object()) return root[attribute];
  return root;
}

// Returns an error string when the ranking is not a permutation of the declared levels.
std::optional<std::string> read_ranking(const nlohmann::json& inner, const AttributeSpec& attribute,
                                        std::vector<std::string>& ranking) {
  const auto it = inner.find("ranking_descending");
  if (it == inner.end() || !it->is_array()) return "missing ranking_descending";
  for (const auto& entry : *it) {
    if (!entry.is_string()) return "ranking entry is not a string";
    ranking.push_back(trim(entry.get<std::string>()));
  }
  std::set<std::string> got(ranking.begin(), ranking.end());
  std::set<std::string> want(attribute.levels.begin(), attribute.levels.end());
  if (got.size() != ranking.size() || got != want) return "not a permutation of declared levels";
  return std::nullopt;
}

// Label or numeric effect size. Returns nullopt and sets error on failure.
std::optional<double> read_effect(const nlohmann::json& value, std::string& error) {
  if (value.is_string()) {
    try {
      return label_to_eta(value.get<std::string>());
    } catch (const Error& e) {
      error = e.what();
      return std::nullopt;
    }
  }
  if (value.is_number()) {
    const double v = value.get<double>();
    if (std::isfinite(v) && v >= 0.0 && v <= 1.0) return v;
    error = fmt::format("effect size {} outside [0, 1]", v);
    return std::nullopt;
  }
  error = "effect size is neither a label nor a number";
  return std::nullopt;
}

}  // namespace

ParseOutcome<Money> extract_transfer(std::string_view text, Money max_amount) {
  if (max_amount.cents() <= 0) throw GameError("extract_transfer: max amount must be positive");
  const auto candidates = scan_candidates(text, max_amount);
  if (candidates.empty()) return ParseOutcome<Money>::exclude(std::string(kNoNumericDecision));
  if (candidates.front().valid) return ParseOutcome<Money>::ok(Money::from_dollars(candidates.front().dollars));
  if (text.find(kFinalDecisionMarker) != std::string_view::npos) {
    for (const auto& c : candidates) {
      if (c.valid) return ParseOutcome<Money>::ok(Money::from_dollars(c.dollars));
    }
  }
  return ParseOutcome<Money>::exclude(std::string(kBoundViolation));
}

ParseOutcome<Money> parse_forecast(std::string_view text, Money max_amount) {
  if (max_amount.cents() <= 0) throw GameError("parse_forecast: max amount must be positive");
  const auto root = find_json_object(text);
  if (!root || !root->contains("send_amount")) return extract_transfer(text, max_amount);
  const auto& v = (*root)["send_amount"];
  if (v.is_number_integer() || v.is_number_unsigned()) {
    const auto dollars = v.get<std::int64_t>();
    if (dollars < 0 || dollars * 100 > max_amount.cents()) return ParseOutcome<Money>::exclude(std::string(kBoundViolation));
    return ParseOutcome<Money>::ok(Money::from_dollars(dollars));
  }
  if (v.is_string()) return extract_transfer(v.get<std::string>(), max_amount);
  return ParseOutcome<Money>::exclude("send_amount is not a whole-dollar integer");
}

double label_to_eta(std::string_view label) {
  std::string lower = trim(label);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "small") return 0.035;
  if (lower == "medium") return 0.10;
  if (lower == "large") return 0.20;
  throw Error(fmt::format("unknown effect-size label \"{}\"", label));
}

std::optional<nlohmann::json> find_json_object(std::string_view text) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos; open = text.find('{', open + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = open; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        auto parsed = nlohmann::json::parse(text.substr(open, i - open + 1), nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) return parsed;
        break;
      }
    }
  }
  return std::nullopt;
}

ParseOutcome<BeliefRecord> parse_ranking_belief(std::string_view text, const AttributeSpec& attribute,
                                                ElicitationStrategy strategy) {
  using Out = ParseOutcome<BeliefRecord>;
  const auto root = find_json_object(text);
  if (!root) return Out::exclude("unparseable object");
  const auto& inner = belief_object(*root, attribute.name);

  BeliefRecord b;
  b.attribute = attribute.name;
  if (auto err = read_ranking(inner, attribute, b.ranking_descending)) return Out::exclude(*err);

  const auto omnibus = inner.find("omnibus_effect_size");
  if (omnibus == inner.end()) return Out::exclude("missing omnibus_effect_size");
  std::string error;
  const auto eta = read_effect(*omnibus, error);
  if (!eta) return Out::exclude(error);
  b.omnibus_eta2 = *eta;

  const auto contrast = inner.find("contrast_effect_size");
  if (contrast != inner.end() && !contrast->is_null()) {
    const auto c = read_effect(*contrast, error);
    if (!c) return Out::exclude(error);
    b.contrast_eta2 = *c;
  }
  b.strategy = std::string(to_string(strategy));
  b.raw_digest = sha256_hex(text);
  return Out::ok(std::move(b));
}

ParseOutcome<BeliefRecord> parse_dollar_belief(std::string_view text, const AttributeSpec& attribute,
                                               Money endowment, int n_per_group) {
  using Out = ParseOutcome<BeliefRecord>;
  const auto root = find_json_object(text);
  if (!root) return Out::exclude("unparseable object");
  const auto& inner = belief_object(*root, attribute.name);
  const auto stats_it = inner.find("mean_sd_level_stats");
  if (stats_it == inner.end() || !stats_it->is_object()) return Out::exclude("missing mean_sd_level_stats");

  for (const auto& [key, value] : stats_it->items()) {
    if (!attribute.has_level(trim(key))) return Out::exclude(fmt::format("unknown level \"{}\"", key));
  }
  std::map<std::string, std::string> by_trimmed;
  for (const auto& [key, value] : stats_it->items()) by_trimmed[trim(key)] = key;

  const double max_dollars = endowment.as_dollars();
  std::map<std::string, LevelStats> stats;
  std::vector<double> means;
  std::vector<double> sds;
  for (const auto& level : attribute.levels) {
    const auto key = by_trimmed.find(level);
    if (key == by_trimmed.end()) return Out::exclude(fmt::format("missing level stats for \"{}\"", level));
    const auto& entry = (*stats_it)[key->second];
    if (!entry.is_object() || !entry.contains("mean") || !entry.contains("sd") ||
        !entry["mean"].is_number() || !entry["sd"].is_number()) {
      return Out::exclude(fmt::format("malformed level stats for \"{}\"", level));
    }
    const double mean = entry["mean"].get<double>();
    const double sd = entry["sd"].get<double>();
    if (!std::isfinite(sd) || sd < 0.0) return Out::exclude(fmt::format("negative sd for \"{}\"", level));
    if (!std::isfinite(mean) || mean < 0.0 || mean > max_dollars) {
      return Out::exclude(fmt::format("mean for \"{}\" outside [0, {}]", level, endowment.to_string()));
    }
    stats[level] = LevelStats{mean, sd};
    means.push_back(mean);
    sds.push_back(sd);
  }

  std::vector<std::size_t> order(attribute.levels.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] > means[b]; });

  BeliefRecord b;
  b.attribute = attribute.name;
  for (auto i : order) b.ranking_descending.push_back(attribute.levels[i]);
  try {
    b.omnibus_eta2 = eta_squared_from_summary(means, sds, n_per_group).eta2;
  } catch (const StatsError& e) {
    return Out::exclude(e.what());
  }
  b.level_stats = std::move(stats);
  b.strategy = std::string(to_string(ElicitationStrategy::CtxDollar));
  b.raw_digest = sha256_hex(text);
  return Out::ok(std::move(b));
}

}  // namespace beliefbench

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

#include "beliefbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "beliefbench/error.hpp"

namespace beliefbench {

Ranking::Ranking(std::vector<std::string> levels) : levels_(std::move(levels)) {
  if (levels_.size() < 2) {
    throw StatsError(fmt::format("ranking needs at least 2 levels, got {}", levels_.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& l : levels_) {
    if (!seen.insert(l).second) throw StatsError(fmt::format("duplicate level \"{}\" in ranking", l));
  }
}

std::size_t Ranking::position(std::string_view label) const {
  const auto it = std::find(levels_.begin(), levels_.end(), label);
  if (it == levels_.end()) throw StatsError(fmt::format("level \"{}\" not in ranking", label));
  return static_cast<std::size_t>(it - levels_.begin());
}

Ranking Ranking::reversed() const {
  return Ranking(std::vector<std::string>(levels_.rbegin(), levels_.rend()));
}

double spearman(const Ranking& a, const Ranking& b) {
  if (a.size() != b.size()) {
    throw StatsError(fmt::format("spearman: rankings have {} and {} levels", a.size(), b.size()));
  }
  std::int64_t sum_d2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& label = a.levels()[i];
    const auto it = std::find(b.levels().begin(), b.levels().end(), label);
    if (it == b.levels().end()) {
      throw StatsError(fmt::format("spearman: level \"{}\" missing from second ranking", label));
    }
    const auto d = static_cast<std::int64_t>(i) - (it - b.levels().begin());
    sum_d2 += d * d;
  }
  const auto k = static_cast<std::int64_t>(a.size());
  return 1.0 - 6.0 * static_cast<double>(sum_d2) / static_cast<double>(k * (k * k - 1));
}

EffectSize eta_squared_from_values(const GroupedValues& groups) {
  std::size_t nonempty = 0;
  double total = 0.0;
  std::size_t count = 0;
  bool constant = true;
  std::optional<double> first;
  for (const auto& [level, xs] : groups.groups) {
    if (!xs.empty()) ++nonempty;
    for (double x : xs) {
      if (!std::isfinite(x)) throw StatsError(fmt::format("non-finite observation in group {}", level));
      if (first && x != *first) constant = false;
      if (!first) first = x;
      total += x;
      ++count;
    }
  }
  if (nonempty < 2) throw StatsError(fmt::format("eta-squared needs 2 non-empty groups, got {}", nonempty));
  if (constant) return EffectSize{0.0, true};

  const double grand = total / static_cast<double>(count);
  double ss_between = 0.0;
  double ss_total = 0.0;
  for (const auto& [level, xs] : groups.groups) {
    if (xs.empty()) continue;
    const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    ss_between += static_cast<double>(xs.size()) * (m - grand) * (m - grand);
    for (double x : xs) ss_total += (x - grand) * (x - grand);
  }
  if (ss_total <= 0.0) return EffectSize{0.0, true};
  return EffectSize{std::clamp(ss_between / ss_total, 0.0, 1.0), false};
}

EffectSize eta_squared_from_summary(std::span<const double> means, std::span<const double> sds, int n) {
  if (n < 2) throw StatsError(fmt::format("eta-squared from summary needs n >= 2, got {}", n));
  if (means.size() != sds.size()) {
    throw StatsError(fmt::format("{} means but {} standard deviations", means.size(), sds.size()));
  }
  if (means.size() < 2) throw StatsError("eta-squared from summary needs at least 2 groups");
  for (double sd : sds) {
    if (!(sd >= 0.0) || !std::isfinite(sd)) throw StatsError(fmt::format("invalid standard deviation {}", sd));
  }
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
  double ss_between = 0.0;
  double ss_within = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    ss_between += n * (means[i] - grand) * (means[i] - grand);
    ss_within += (n - 1) * sds[i] * sds[i];
  }
  const double ss_total = ss_between + ss_within;
  if (ss_total <= 0.0) return EffectSize{0.0, true};
  return EffectSize{std::clamp(ss_between / ss_total, 0.0, 1.0), false};
}

Ranking behavioral_ranking(const GroupedValues& groups) {
  std::vector<std::string> empty;
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < groups.groups.size(); ++i) {
    const auto& xs = groups.groups[i].second;
    if (xs.empty()) {
      empty.push_back(groups.groups[i].first);
      continue;
    }
    keyed.emplace_back(std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size()), i);
  }
  if (!empty.empty()) {
    throw StatsError(fmt::format("levels without observations: {}", fmt::join(empty, ", ")));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::string> levels;
  for (const auto& [mean, i] : keyed) levels.push_back(groups.groups[i].first);
  return Ranking(std::move(levels));
}

double effect_discrepancy(const EffectSize& belief, const EffectSize& behavior) {
  return std::abs(belief.eta2 - behavior.eta2);
}

double mae(std::span<const double> forecasts, std::span<const double> actuals) {
  if (forecasts.size() != actuals.size()) {
    throw StatsError(fmt::format("mae: {} forecasts but {} actuals", forecasts.size(), actuals.size()));
  }
  if (forecasts.empty()) throw StatsError("mae of empty series");
  double sum = 0.0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) sum += std::abs(forecasts[i] - actuals[i]);
  return sum / static_cast<double>(forecasts.size());
}

double mae(std::span<const Money> forecasts, std::span<const Money> actuals) {
  if (forecasts.size() != actuals.size()) {
    throw StatsError(fmt::format("mae: {} forecasts but {} actuals", forecasts.size(), actuals.size()));
  }
  if (forecasts.empty()) throw StatsError("mae of empty series");
  std::int64_t cents = 0;
  for (std::size_t i = 0; i < forecasts.size(); ++i) {
    cents += std::abs(forecasts[i].cents() - actuals[i].cents());
  }
  return static_cast<double>(cents) / 100.0 / static_cast<double>(forecasts.size());
}

double median(std::vector<double> values) {
  if (values.empty()) throw StatsError("median of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

}  // namespace beliefbench

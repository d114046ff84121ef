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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "beliefbench/money.hpp"

namespace beliefbench {

// An ordering of distinct level labels, highest first.
class Ranking {
 public:
  explicit Ranking(std::vector<std::string> levels);

  const std::vector<std::string>& levels() const { return levels_; }
  std::size_t size() const { return levels_.size(); }
  // Throws StatsError when the label is absent.
  std::size_t position(std::string_view label) const;
  Ranking reversed() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::string> levels_;
};

// Observations per level, in declared level order.
struct GroupedValues {
  std::vector<std::pair<std::string, std::vector<double>>> groups;
};

struct EffectSize {
  double eta2 = 0.0;
  bool degenerate = false;  // SS_total == 0
};

// Spearman correlation between two orderings of the same label set.
double spearman(const Ranking& a, const Ranking& b);

// One-way ANOVA eta-squared, SS_between / SS_total. Zero total variance gives
// eta2 = 0 with the degenerate flag.
EffectSize eta_squared_from_values(const GroupedValues& groups);

// Eta-squared from per-level means and SDs with n observations per level;
// the within-group sum uses (n - 1) * sd^2.
EffectSize eta_squared_from_summary(std::span<const double> means, std::span<const double> sds,
                                    int n);

// Levels by group mean, descending; ties keep declared order.
Ranking behavioral_ranking(const GroupedValues& groups);

double effect_discrepancy(const EffectSize& belief, const EffectSize& behavior);

double mae(std::span<const double> forecasts, std::span<const double> actuals);
double mae(std::span<const Money> forecasts, std::span<const Money> actuals);

double median(std::vector<double> values);

}  // namespace beliefbench

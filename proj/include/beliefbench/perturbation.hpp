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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beliefbench/beliefs.hpp"
#include "beliefbench/stats.hpp"

namespace beliefbench {

enum class SearchMode {
  exact,       // exhaustive for K <= kMaxExactLevels, hill-climb above
  hill_climb,  // always hill-climb
};

inline constexpr int kMaxExactLevels = 8;

struct PerturbationSpec {
  double target_rho = 1.0;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::exact;
  std::string label;  // e.g. "weak", recorded in belief provenance

  void validate() const;
  std::string describe() const;
};

// Every Spearman value reachable by a permutation of k labels, ascending.
std::vector<double> achievable_rhos(int k);

// A permutation of `original` whose Spearman correlation with it is as close
// as possible to the target. Among minimisers, the choice depends only on
// (original, spec).
Ranking perturb_ranking(const Ranking& original, const PerturbationSpec& spec);

// Rankings replaced, effect sizes untouched, provenance updated. Each
// attribute draws from its own seed stream derived from spec.seed.
std::vector<BeliefRecord> build_perturbed_prior_set(std::span<const BeliefRecord> beliefs,
                                                    const PerturbationSpec& spec);

}  // namespace beliefbench

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

#include "beliefbench/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "beliefbench/error.hpp"
#include "beliefbench/rng.hpp"

namespace beliefbench {

namespace {

constexpr double kTieEpsilon = 1e-12;

std::int64_t sum_d2(const std::vector<std::size_t>& perm) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    const auto d = static_cast<std::int64_t>(perm[i]) - static_cast<std::int64_t>(i);
    s += d * d;
  }
  return s;
}

double rho_of(std::int64_t d2, std::size_t k) {
  const auto kk = static_cast<std::int64_t>(k);
  return 1.0 - 6.0 * static_cast<double>(d2) / static_cast<double>(kk * (kk * kk - 1));
}

Ranking permuted(const Ranking& original, const std::vector<std::size_t>& perm) {
  std::vector<std::string> levels;
  levels.reserve(perm.size());
  for (auto i : perm) levels.push_back(original.levels()[i]);
  return Ranking(std::move(levels));
}

std::vector<std::size_t> exhaustive(std::size_t k, double target, Rng& rng) {
  std::vector<std::size_t> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> best;
  double best_dist = INFINITY;
  do {
    const double dist = std::abs(rho_of(sum_d2(perm), k) - target);
    if (dist < best_dist - kTieEpsilon) {
      best_dist = dist;
      best.clear();
      best.push_back(perm);
    } else if (dist <= best_dist + kTieEpsilon) {
      best.push_back(perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best[rng.uniform(best.size())];
}

std::vector<std::size_t> hill_climb(std::size_t k, double target, Rng& rng) {
  std::vector<std::size_t> current(k);
  std::iota(current.begin(), current.end(), 0);
  double current_dist = std::abs(rho_of(sum_d2(current), k) - target);
  auto best = current;
  double best_dist = current_dist;
  const std::size_t iterations = 10 * k * k;
  for (std::size_t it = 0; it < iterations && best_dist > kTieEpsilon; ++it) {
    const auto i = rng.uniform(k);
    auto j = rng.uniform(k - 1);
    if (j >= i) ++j;
    std::swap(current[i], current[j]);
    const double dist = std::abs(rho_of(sum_d2(current), k) - target);
    if (dist <= current_dist + kTieEpsilon) {
      current_dist = dist;
      if (dist < best_dist - kTieEpsilon) {
        best_dist = dist;
        best = current;
      }
    } else {
      std::swap(current[i], current[j]);
    }
  }
  return best;
}

}  // namespace

void PerturbationSpec::validate() const {
  if (!std::isfinite(target_rho) || target_rho < -1.0 || target_rho > 1.0) {
    throw ConfigError(fmt::format("perturbation target rho {} outside [-1, 1]", target_rho));
  }
}

std::string PerturbationSpec::describe() const {
  return fmt::format("{}(target_rho={}, seed={}, mode={})", label.empty() ? "perturbed" : label,
                     target_rho, seed, mode == SearchMode::exact ? "exact" : "hill-climb");
}

std::vector<double> achievable_rhos(int k) {
  if (k < 2 || k > kMaxExactLevels) {
    throw StatsError(fmt::format("achievable_rhos supports 2..{} levels, got {}", kMaxExactLevels, k));
  }
  std::vector<std::size_t> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::int64_t> sums;
  do {
    sums.insert(sum_d2(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<double> out;
  for (auto it = sums.rbegin(); it != sums.rend(); ++it) out.push_back(rho_of(*it, perm.size()));
  return out;
}

Ranking perturb_ranking(const Ranking& original, const PerturbationSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t k = original.size();
  const bool exact = spec.mode == SearchMode::exact && k <= static_cast<std::size_t>(kMaxExactLevels);
  return permuted(original, exact ? exhaustive(k, spec.target_rho, rng) : hill_climb(k, spec.target_rho, rng));
}

std::vector<BeliefRecord> build_perturbed_prior_set(std::span<const BeliefRecord> beliefs,
                                                    const PerturbationSpec& spec) {
  if (beliefs.empty()) throw StatsError("cannot perturb an empty belief set");
  spec.validate();
  std::vector<BeliefRecord> out;
  out.reserve(beliefs.size());
  for (const auto& belief : beliefs) {
    PerturbationSpec per_attribute = spec;
    per_attribute.seed = spec.seed ^ fnv1a64(belief.attribute);
    BeliefRecord b = belief;
    b.ranking_descending = perturb_ranking(Ranking(belief.ranking_descending), per_attribute).levels();
    b.perturbation = spec.describe();
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace beliefbench

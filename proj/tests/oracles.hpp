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

// Independent reference computations. None of these call into the library
// under test beyond its plain data types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace beliefbench::oracle {

// One-way ANOVA over raw observations, accumulated in long double with an
// explicit grand mean pass.
inline double eta_squared(const std::vector<std::vector<double>>& groups) {
  long double total = 0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    for (double x : g) total += x;
    n += g.size();
  }
  const long double grand = total / static_cast<long double>(n);
  long double ss_total = 0;
  long double ss_between = 0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    long double sum = 0;
    for (double x : g) sum += x;
    const long double mean = sum / static_cast<long double>(g.size());
    ss_between += static_cast<long double>(g.size()) * (mean - grand) * (mean - grand);
    for (double x : g) ss_total += (x - grand) * (x - grand);
  }
  if (ss_total == 0) return 0.0;
  return static_cast<double>(ss_between / ss_total);
}

// Summary ANOVA written out term by term.
inline double eta_squared_summary(const std::vector<double>& means, const std::vector<double>& sds,
                                  int n) {
  const double k = static_cast<double>(means.size());
  double grand = 0;
  for (double m : means) grand += m;
  grand /= k;
  double between = 0;
  double within = 0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    between += n * (means[i] - grand) * (means[i] - grand);
    within += (n - 1) * sds[i] * sds[i];
  }
  return between / (between + within);
}

// 1 - 6 sum d^2 / (K (K^2 - 1)) over rank positions.
inline double spearman(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::string, long long> pos;
  for (std::size_t i = 0; i < b.size(); ++i) pos[b[i]] = static_cast<long long>(i);
  long long d2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const long long d = static_cast<long long>(i) - pos.at(a[i]);
    d2 += d * d;
  }
  const double k = static_cast<double>(a.size());
  return 1.0 - 6.0 * static_cast<double>(d2) / (k * (k * k - 1.0));
}

// Smallest |rho - target| over every permutation of `labels`.
inline double min_distance_to_target(std::vector<std::string> labels, double target) {
  const std::vector<std::string> original = labels;
  std::sort(labels.begin(), labels.end());
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, std::fabs(spearman(labels, original) - target));
  } while (std::next_permutation(labels.begin(), labels.end()));
  return best;
}

inline std::int64_t tripled_capped_cents(std::int64_t cap_cents, std::int64_t sent_cents) {
  const std::int64_t tripled = sent_cents + sent_cents + sent_cents;
  return tripled < cap_cents ? tripled : cap_cents;
}

// Seeded random inputs for the equivalence checks.
struct GroupedDataset {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> groups;
};

inline GroupedDataset random_grouped_dataset(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> n_groups(2, 6);
  std::uniform_int_distribution<int> n_obs(2, 10);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  GroupedDataset d;
  const int k = n_groups(gen);
  for (int g = 0; g < k; ++g) {
    d.labels.push_back("g" + std::to_string(g));
    const double mu = shift(gen);
    std::vector<double> xs(static_cast<std::size_t>(n_obs(gen)));
    for (double& x : xs) x = mu + noise(gen);
    d.groups.push_back(std::move(xs));
  }
  return d;
}

inline std::vector<std::string> labels_of_size(int k) {
  std::vector<std::string> out;
  for (int i = 0; i < k; ++i) out.push_back("L" + std::to_string(i));
  return out;
}

inline std::vector<std::string> shuffled(std::vector<std::string> v, std::mt19937_64& gen) {
  std::shuffle(v.begin(), v.end(), gen);
  return v;
}

}  // namespace beliefbench::oracle

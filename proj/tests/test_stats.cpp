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

#include <doctest.h>

#include <random>

#include "beliefbench/error.hpp"
#include "beliefbench/stats.hpp"
#include "oracles.hpp"

using namespace beliefbench;

namespace {

GroupedValues to_grouped(const oracle::GroupedDataset& d) {
  GroupedValues gv;
  for (std::size_t i = 0; i < d.labels.size(); ++i) gv.groups.emplace_back(d.labels[i], d.groups[i]);
  return gv;
}

}  // namespace

TEST_SUITE("stats") {
  TEST_CASE("summary ANOVA reproduces the recorded dollar belief") {
    const std::vector<double> means = {6.5, 5.5, 4.5, 3.5};
    const std::vector<double> sds = {2.5, 2.2, 1.8, 1.5};
    const auto e = eta_squared_from_summary(means, sds, 100);
    CHECK(e.eta2 == doctest::Approx(0.23348992724453868).epsilon(1e-12));
    CHECK(e.eta2 == doctest::Approx(oracle::eta_squared_summary(means, sds, 100)).epsilon(1e-12));
    CHECK_FALSE(e.degenerate);
  }

  TEST_CASE("summary ANOVA input checks") {
    const std::vector<double> two = {1.0, 2.0};
    const std::vector<double> neg = {1.0, -0.5};
    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS(eta_squared_from_summary(two, two, 1), StatsError);
    CHECK_THROWS_AS(eta_squared_from_summary(two, neg, 10), StatsError);
    CHECK_THROWS_AS(eta_squared_from_summary(two, one, 10), StatsError);
    const std::vector<double> same = {3.0, 3.0};
    const std::vector<double> zero = {0.0, 0.0};
    CHECK(eta_squared_from_summary(same, zero, 10).degenerate);
  }

  TEST_CASE("eta-squared matches the two-pass oracle on random data") {
    std::mt19937_64 gen(20260101);
    for (int i = 0; i < 1000; ++i) {
      const auto d = oracle::random_grouped_dataset(gen);
      const auto e = eta_squared_from_values(to_grouped(d));
      REQUIRE(std::abs(e.eta2 - oracle::eta_squared(d.groups)) <= 1e-9);
    }
  }

  TEST_CASE("eta-squared examples and invariances") {
    GroupedValues separated{{{"a", {1, 1}}, {"b", {3, 3}}}};
    CHECK(eta_squared_from_values(separated).eta2 == doctest::Approx(1.0));
    GroupedValues flat{{{"a", {1, 3}}, {"b", {1, 3}}}};
    CHECK(eta_squared_from_values(flat).eta2 == doctest::Approx(0.0));
    GroupedValues constant{{{"a", {2, 2}}, {"b", {2, 2}}}};
    const auto c = eta_squared_from_values(constant);
    CHECK(c.degenerate);
    CHECK(c.eta2 == 0.0);

    std::mt19937_64 gen(5);
    for (int i = 0; i < 50; ++i) {
      auto d = oracle::random_grouped_dataset(gen);
      const double base = eta_squared_from_values(to_grouped(d)).eta2;
      auto affine = d;
      for (auto& g : affine.groups)
        for (double& x : g) x = 3.5 * x - 11.0;
      CHECK(eta_squared_from_values(to_grouped(affine)).eta2 == doctest::Approx(base).epsilon(1e-9));
      std::reverse(d.groups.begin(), d.groups.end());
      CHECK(eta_squared_from_values(to_grouped(d)).eta2 == doctest::Approx(base).epsilon(1e-12));
    }
  }

  TEST_CASE("eta-squared rejects too few groups") {
    GroupedValues one{{{"a", {1, 2}}, {"b", {}}}};
    CHECK_THROWS_AS(eta_squared_from_values(one), StatsError);
  }

  TEST_CASE("spearman matches the definitional formula") {
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<int> k_dist(3, 8);
    for (int i = 0; i < 1000; ++i) {
      const auto labels = oracle::labels_of_size(k_dist(gen));
      const auto a = oracle::shuffled(labels, gen);
      const auto b = oracle::shuffled(labels, gen);
      REQUIRE(std::abs(spearman(Ranking(a), Ranking(b)) - oracle::spearman(a, b)) <= 1e-12);
    }
  }

  TEST_CASE("spearman examples") {
    const Ranking r({"A", "B", "C", "D", "E"});
    CHECK(spearman(r, r) == 1.0);
    CHECK(spearman(r, r.reversed()) == -1.0);
    CHECK(spearman(r, Ranking({"B", "A", "C", "D", "E"})) == doctest::Approx(0.9));
    CHECK_THROWS_AS(spearman(r, Ranking({"A", "B", "C", "D", "F"})), StatsError);
    CHECK_THROWS_AS(spearman(r, Ranking({"A", "B"})), StatsError);
  }

  TEST_CASE("ranking construction") {
    CHECK_THROWS_AS(Ranking({"A"}), StatsError);
    CHECK_THROWS_AS(Ranking({"A", "A"}), StatsError);
    CHECK(Ranking({"x", "y", "z"}).position("z") == 2);
    CHECK_THROWS_AS(Ranking({"x", "y"}).position("w"), StatsError);
  }

  TEST_CASE("behavioral ranking orders by mean and keeps declared order on ties") {
    GroupedValues gv{{{"Low", {1, 1}}, {"High", {3, 5}}, {"Mid", {2}}, {"Also", {2, 2}}}};
    CHECK(behavioral_ranking(gv).levels() == std::vector<std::string>{"High", "Mid", "Also", "Low"});
    GroupedValues gap{{{"a", {1}}, {"b", {}}, {"c", {}}}};
    try {
      behavioral_ranking(gap);
      FAIL("expected StatsError");
    } catch (const StatsError& e) {
      CHECK(std::string(e.what()) == "levels without observations: b, c");
    }
  }

  TEST_CASE("mae and median") {
    const std::vector<double> f = {0, 3, 3, 0, 0, 0};
    const std::vector<double> a = {2, 3, 5, 0, 0, 1};
    CHECK(std::abs(mae(f, a) - 5.0 / 6.0) <= 1e-12);
    std::vector<Money> fm, am;
    for (double x : f) fm.push_back(Money::from_dollars(static_cast<int>(x)));
    for (double x : a) am.push_back(Money::from_dollars(static_cast<int>(x)));
    CHECK(std::abs(mae(fm, am) - 5.0 / 6.0) <= 1e-12);
    CHECK(mae(f, f) == 0.0);
    // Triangle inequality on a third series.
    const std::vector<double> c = {1, 1, 1, 1, 1, 1};
    CHECK(mae(f, a) <= mae(f, c) + mae(c, a) + 1e-12);
    CHECK_THROWS_AS(mae(std::span<const double>{}, std::span<const double>{}), StatsError);
    CHECK(median({3, 1, 2}) == 2.0);
    CHECK(median({4, 1, 2, 3}) == 2.5);
    CHECK_THROWS_AS(median({}), StatsError);
  }

  TEST_CASE("effect discrepancy is absolute") {
    CHECK(effect_discrepancy({0.1, false}, {0.9, false}) == doctest::Approx(0.8));
    CHECK(effect_discrepancy({0.9, false}, {0.1, false}) == doctest::Approx(0.8));
  }
}

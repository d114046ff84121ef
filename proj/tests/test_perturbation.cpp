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

#include <algorithm>
#include <cmath>

#include "beliefbench/error.hpp"
#include "beliefbench/perturbation.hpp"
#include "oracles.hpp"

using namespace beliefbench;

namespace {

bool same_labels(std::vector<std::string> a, std::vector<std::string> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_SUITE("perturbation") {
  TEST_CASE("achieved rho is the exhaustive minimum distance to target") {
    for (int k = 3; k <= 7; ++k) {
      const auto labels = oracle::labels_of_size(k);
      for (double target : {0.20, 0.80}) {
        for (std::uint64_t seed : {1ULL, 7ULL, 99ULL}) {
          CAPTURE(k);
          CAPTURE(target);
          const PerturbationSpec spec{target, seed, SearchMode::exact, "t"};
          const auto out = perturb_ranking(Ranking(labels), spec);
          REQUIRE(same_labels(out.levels(), labels));
          const double achieved = oracle::spearman(out.levels(), labels);
          CHECK(std::abs(std::abs(achieved - target) - oracle::min_distance_to_target(labels, target)) <=
                1e-12);
        }
      }
    }
  }

  TEST_CASE("five levels reach 0.80 exactly") {
    const Ranking r({"a", "b", "c", "d", "e"});
    const auto out = perturb_ranking(r, {0.80, 3, SearchMode::exact, "weak"});
    CHECK(spearman(out, r) == doctest::Approx(0.80).epsilon(1e-15));
  }

  TEST_CASE("choice among minimisers depends only on the spec") {
    const Ranking r({"a", "b", "c", "d", "e", "f"});
    const PerturbationSpec spec{0.2, 42, SearchMode::exact, "strong"};
    CHECK(perturb_ranking(r, spec) == perturb_ranking(r, spec));
    bool varied = false;
    for (std::uint64_t seed = 0; seed < 20 && !varied; ++seed) {
      varied = !(perturb_ranking(r, {0.2, seed, SearchMode::exact, ""}) == perturb_ranking(r, spec));
    }
    CHECK(varied);
  }

  TEST_CASE("hill climb returns a permutation and gets close") {
    const auto labels = oracle::labels_of_size(10);
    const auto out = perturb_ranking(Ranking(labels), {0.5, 11, SearchMode::hill_climb, ""});
    CHECK(same_labels(out.levels(), labels));
    CHECK(std::abs(oracle::spearman(out.levels(), labels) - 0.5) < 0.1);
  }

  TEST_CASE("achievable rhos") {
    CHECK(achievable_rhos(2) == std::vector<double>{-1.0, 1.0});
    const auto r3 = achievable_rhos(3);
    CHECK(r3 == std::vector<double>{-1.0, -0.5, 0.5, 1.0});
    const auto r5 = achievable_rhos(5);
    CHECK(std::is_sorted(r5.begin(), r5.end()));
    CHECK(r5.size() == 21);
    CHECK_THROWS_AS(achievable_rhos(1), StatsError);
  }

  TEST_CASE("prior sets keep effect sizes and record provenance") {
    BeliefRecord b;
    b.attribute = "conscientiousness";
    b.ranking_descending = {"High", "Moderate", "Low"};
    b.omnibus_eta2 = 0.1;
    b.strategy = "CtxTr";
    BeliefRecord c = b;
    c.attribute = "openness_to_experience";
    const std::vector<BeliefRecord> set = {b, c};
    const PerturbationSpec spec{-1.0, 5, SearchMode::exact, "strong"};
    const auto out = build_perturbed_prior_set(set, spec);
    REQUIRE(out.size() == 2);
    CHECK(out[0].ranking_descending == std::vector<std::string>{"Low", "Moderate", "High"});
    CHECK(out[0].omnibus_eta2 == 0.1);
    CHECK(out[0].perturbation == "strong(target_rho=-1, seed=5, mode=exact)");
    CHECK(out[1].attribute == "openness_to_experience");
  }

  TEST_CASE("target outside [-1, 1] is rejected") {
    CHECK_THROWS_AS(perturb_ranking(Ranking({"a", "b"}), {1.5, 0, SearchMode::exact, ""}), ConfigError);
  }
}

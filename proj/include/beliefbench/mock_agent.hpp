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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "beliefbench/agent.hpp"
#include "beliefbench/beliefs.hpp"
#include "beliefbench/error.hpp"

namespace beliefbench {

class MockError : public Error {
 public:
  using Error::Error;
};

// A scripted belief for one attribute.
struct MockBelief {
  std::vector<std::string> ranking;
  std::string omnibus_label = "small";
  std::optional<std::map<std::string, LevelStats>> level_stats;
};

enum class PriorMode {
  ignore,  // prior blocks have no effect on sends
  obey,    // sends follow the imposed rankings when a prior block is present
};

// Deterministic stand-in for a language agent. It reads only the prompt:
// persona lines, the endowment, round numbers and any prior block.
struct MockPolicy {
  std::uint64_t seed = 0;
  // Send in dollars = base + sum of per-attribute level effects, clamped to
  // [0, budget]. With `proportional`, amounts are relative to a $10 endowment
  // and scale with the one in the prompt.
  double base = 5.0;
  std::map<std::string, std::map<std::string, double>> effects;
  bool proportional = false;
  PriorMode prior_mode = PriorMode::ignore;
  std::map<std::string, MockBelief> beliefs;
  // Optional fixed per-round sends for multi-round play (index = round - 1).
  std::vector<int> actual_schedule;
  std::vector<int> forecast_schedule;

  static MockPolicy from_json(const nlohmann::json& j);
  static MockPolicy load(const std::filesystem::path& path);
  nlohmann::ordered_json to_json() const;
  std::string digest() const;
};

// Throws MockError when the prompt is not a recognisable harness prompt.
std::string mock_complete(const MockPolicy& policy, std::string_view prompt);

class MockAgent : public Agent {
 public:
  explicit MockAgent(MockPolicy policy, SamplingParams params = {});

  std::string complete(const std::string& prompt) override;
  std::string model_id() const override { return model_id_; }
  const SamplingParams& params() const override { return params_; }

 private:
  MockPolicy policy_;
  SamplingParams params_;
  std::string model_id_;
};

}  // namespace beliefbench

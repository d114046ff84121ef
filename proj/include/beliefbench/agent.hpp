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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "beliefbench/error.hpp"

namespace beliefbench {

struct SamplingParams {
  double temperature = 0.05;
  double top_p = 1.0;
  int top_k = 0;  // 0 disables
  int max_tokens = 1024;

  void validate() const;
};

nlohmann::ordered_json to_json(const SamplingParams& params);
SamplingParams sampling_from_json(const nlohmann::json& j);

struct AgentEndpoint {
  std::string base_url;
  std::string model_id;
  std::string auth_token_env = "AGENT_API_KEY";
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{250};
};

// Network or 5xx/429 failures that survived every retry.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts) : Error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

// Non-retryable status or a body that is not a chat completion.
class WireError : public Error {
 public:
  using Error::Error;
};

// A single-shot text generator.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string model_id() const = 0;
  virtual const SamplingParams& params() const = 0;
};

// SHA-256 over a canonical serialisation of (model, prompt, params).
std::string cache_key(std::string_view model_id, std::string_view prompt,
                      const SamplingParams& params);

nlohmann::ordered_json chat_request_body(std::string_view model_id, std::string_view prompt,
                                         const SamplingParams& params);

// OpenAI-compatible POST {base_url}/chat/completions.
class HttpAgent : public Agent {
 public:
  HttpAgent(AgentEndpoint endpoint, SamplingParams params, RetryPolicy retry = {});

  std::string complete(const std::string& prompt) override;
  std::string model_id() const override { return endpoint_.model_id; }
  const SamplingParams& params() const override { return params_; }

  // Number of HTTP requests attempted, including retries.
  std::int64_t wire_attempts() const { return wire_attempts_.load(); }

 private:
  AgentEndpoint endpoint_;
  SamplingParams params_;
  RetryPolicy retry_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::atomic<std::int64_t> wire_attempts_{0};
};

// One JSON file per digest: {request, response, timestamp}.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const nlohmann::ordered_json& request,
           const std::string& response, const std::string& timestamp);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct GatewayStats {
  std::int64_t requests = 0;     // complete() calls
  std::int64_t cache_hits = 0;   // served from memory or disk
  std::int64_t inner_calls = 0;  // forwarded to the wrapped agent
};

using Clock = std::function<std::string()>;

// ISO-8601 UTC wall clock.
std::string utc_now();

// Content-addressed cache, in-flight de-duplication and bounded parallelism
// in front of another agent. Safe for concurrent use.
class CachingAgent : public Agent {
 public:
  CachingAgent(Agent& inner, std::optional<std::filesystem::path> cache_dir,
               int max_parallel = 4, Clock clock = utc_now);

  std::string complete(const std::string& prompt) override;
  std::string model_id() const override { return inner_.model_id(); }
  const SamplingParams& params() const override { return inner_.params(); }

  GatewayStats stats() const;

 private:
  void acquire();
  void release();

  Agent& inner_;
  std::optional<ResponseCache> disk_;
  int max_parallel_;
  Clock clock_;

  mutable std::mutex mu_;
  std::condition_variable slot_cv_;
  int in_use_ = 0;
  std::map<std::string, std::shared_future<std::string>> memo_;
  GatewayStats stats_;
};

}  // namespace beliefbench

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

#include "beliefbench/agent.hpp"

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "beliefbench/digest.hpp"

namespace beliefbench {

void SamplingParams::validate() const {
  if (!std::isfinite(temperature) || temperature < 0.0) {
    throw ConfigError(fmt::format("temperature must be non-negative, got {}", temperature));
  }
  if (!std::isfinite(top_p) || top_p <= 0.0 || top_p > 1.0) {
    throw ConfigError(fmt::format("top_p must lie in (0, 1], got {}", top_p));
  }
  if (top_k < 0) throw ConfigError(fmt::format("top_k must be non-negative, got {}", top_k));
  if (max_tokens <= 0) throw ConfigError(fmt::format("max_tokens must be positive, got {}", max_tokens));
}

nlohmann::ordered_json to_json(const SamplingParams& params) {
  return {{"temperature", params.temperature},
          {"top_p", params.top_p},
          {"top_k", params.top_k},
          {"max_tokens", params.max_tokens}};
}

SamplingParams sampling_from_json(const nlohmann::json& j) {
  SamplingParams p;
  p.temperature = j.value("temperature", p.temperature);
  p.top_p = j.value("top_p", p.top_p);
  p.top_k = j.value("top_k", p.top_k);
  p.max_tokens = j.value("max_tokens", p.max_tokens);
  p.validate();
  return p;
}

std::string cache_key(std::string_view model_id, std::string_view prompt, const SamplingParams& params) {
  const nlohmann::ordered_json material{
      {"model", model_id}, {"prompt", prompt}, {"params", to_json(params)}};
  return sha256_hex(material.dump());
}

nlohmann::ordered_json chat_request_body(std::string_view model_id, std::string_view prompt,
                                         const SamplingParams& params) {
  nlohmann::ordered_json body{
      {"model", model_id},
      {"messages", nlohmann::ordered_json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", params.max_tokens}};
  if (params.top_k > 0) body["top_k"] = params.top_k;
  return body;
}

HttpAgent::HttpAgent(AgentEndpoint endpoint, SamplingParams params, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), params_(params), retry_(retry) {
  params_.validate();
  if (endpoint_.base_url.empty()) throw ConfigError("live mode needs a non-empty endpoint URL");
  if (endpoint_.model_id.empty()) throw ConfigError("live mode needs a model id");
  if (retry_.max_attempts < 1) throw ConfigError("retry policy needs at least one attempt");
  const auto scheme_end = endpoint_.base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError(fmt::format("endpoint URL \"{}\" has no scheme", endpoint_.base_url));
  }
  const auto path_start = endpoint_.base_url.find('/', scheme_end + 3);
  scheme_host_port_ = endpoint_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : endpoint_.base_url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

std::string HttpAgent::complete(const std::string& prompt) {
  const std::string body = chat_request_body(endpoint_.model_id, prompt, params_).dump();
  const std::string path = path_prefix_ + "/chat/completions";
  httplib::Headers headers;
  if (const char* token = std::getenv(endpoint_.auth_token_env.c_str()); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(retry_.base_delay * (1 << (attempt - 2)));
    ++wire_attempts_;
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(300, 0);
    const auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw WireError(fmt::format("HTTP {} from {}: {}", res->status, endpoint_.base_url, res->body));
    }
    const auto reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("choices") || !reply["choices"].is_array() ||
        reply["choices"].empty()) {
      throw WireError("malformed chat response: no choices");
    }
    const auto& choice = reply["choices"][0];
    if (!choice.contains("message") || !choice["message"].contains("content") ||
        !choice["message"]["content"].is_string()) {
      throw WireError("malformed chat response: first choice has no message content");
    }
    return choice["message"]["content"].get<std::string>();
  }
  throw TransportError(fmt::format("request to {} failed after {} attempts: {}", endpoint_.base_url,
                                   retry_.max_attempts, last_error),
                       retry_.max_attempts);
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::ifstream in(dir_ / (key + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  const auto entry = nlohmann::json::parse(buf.str(), nullptr, false);
  if (entry.is_discarded() || !entry.contains("response") || !entry["response"].is_string()) {
    return std::nullopt;
  }
  return entry["response"].get<std::string>();
}

void ResponseCache::put(const std::string& key, const nlohmann::ordered_json& request,
                        const std::string& response, const std::string& timestamp) {
  const nlohmann::ordered_json entry{{"request", request}, {"response", response}, {"timestamp", timestamp}};
  const auto final_path = dir_ / (key + ".json");
  auto tmp = final_path;
  tmp += fmt::format(".tmp{}", std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << entry.dump(2) << '\n';
    if (!out) throw Error(fmt::format("cannot write cache entry {}", tmp.string()));
  }
  std::filesystem::rename(tmp, final_path);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CachingAgent::CachingAgent(Agent& inner, std::optional<std::filesystem::path> cache_dir, int max_parallel,
                           Clock clock)
    : inner_(inner), max_parallel_(max_parallel), clock_(std::move(clock)) {
  if (max_parallel_ < 1) throw ConfigError("max_parallel must be at least 1");
  if (cache_dir) disk_.emplace(*cache_dir);
}

void CachingAgent::acquire() {
  std::unique_lock lock(mu_);
  slot_cv_.wait(lock, [&] { return in_use_ < max_parallel_; });
  ++in_use_;
}

void CachingAgent::release() {
  {
    std::lock_guard lock(mu_);
    --in_use_;
  }
  slot_cv_.notify_one();
}

std::string CachingAgent::complete(const std::string& prompt) {
  const std::string key = cache_key(inner_.model_id(), prompt, inner_.params());
  std::promise<std::string> promise;
  std::optional<std::shared_future<std::string>> pending;
  {
    std::lock_guard lock(mu_);
    ++stats_.requests;
    if (const auto it = memo_.find(key); it != memo_.end()) {
      ++stats_.cache_hits;
      pending = it->second;
    } else {
      memo_.emplace(key, promise.get_future().share());
    }
  }
  if (pending) return pending->get();

  try {
    if (disk_) {
      if (auto cached = disk_->get(key)) {
        {
          std::lock_guard lock(mu_);
          ++stats_.cache_hits;
        }
        promise.set_value(*cached);
        return *cached;
      }
    }
    acquire();
    std::string response;
    try {
      response = inner_.complete(prompt);
    } catch (...) {
      release();
      throw;
    }
    release();
    {
      std::lock_guard lock(mu_);
      ++stats_.inner_calls;
    }
    if (disk_) disk_->put(key, chat_request_body(inner_.model_id(), prompt, inner_.params()), response, clock_());
    promise.set_value(response);
    return response;
  } catch (...) {
    promise.set_exception(std::current_exception());
    std::lock_guard lock(mu_);
    memo_.erase(key);
    throw;
  }
}

GatewayStats CachingAgent::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

}  // namespace beliefbench

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

#include "beliefbench/prompt_template.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include <fmt/format.h>

#include "beliefbench/digest.hpp"
#include "beliefbench/error.hpp"

namespace beliefbench {

namespace detail {
struct Resource {
  std::string_view id;
  std::string_view text;
};
extern const Resource kResources[];
extern const std::size_t kResourceCount;
}  // namespace detail

namespace {

bool ident_start(char c) { return c == '_' || std::isalpha(static_cast<unsigned char>(c)); }
bool ident_char(char c) { return c == '_' || std::isalnum(static_cast<unsigned char>(c)); }

}  // namespace

PromptTemplate::PromptTemplate(std::string id, std::string body)
    : id_(std::move(id)), body_(std::move(body)) {
  std::string literal;
  auto flush = [&] {
    if (!literal.empty()) pieces_.push_back({false, std::move(literal)});
    literal.clear();
  };
  for (std::size_t i = 0; i < body_.size();) {
    const char c = body_[i];
    if (c != '$') {
      literal.push_back(c);
      ++i;
      continue;
    }
    if (i + 1 < body_.size() && body_[i + 1] == '$') {
      literal.push_back('$');
      i += 2;
      continue;
    }
    std::string name;
    if (i + 1 < body_.size() && body_[i + 1] == '{') {
      std::size_t close = body_.find('}', i + 2);
      if (close == std::string::npos) {
        throw TemplateError(fmt::format("template {}: unterminated placeholder at offset {}", id_, i));
      }
      name = body_.substr(i + 2, close - i - 2);
      if (name.empty() || !ident_start(name[0]) ||
          !std::all_of(name.begin(), name.end(), ident_char)) {
        throw TemplateError(fmt::format("template {}: invalid placeholder \"${{{}}}\"", id_, name));
      }
      i = close + 1;
    } else {
      std::size_t j = i + 1;
      if (j >= body_.size() || !ident_start(body_[j])) {
        throw TemplateError(fmt::format("template {}: stray '$' at offset {}", id_, i));
      }
      while (j < body_.size() && ident_char(body_[j])) ++j;
      name = body_.substr(i + 1, j - i - 1);
      i = j;
    }
    flush();
    required_.insert(name);
    pieces_.push_back({true, std::move(name)});
  }
  flush();
}

std::string PromptTemplate::digest() const { return sha256_hex(body_); }

std::string PromptTemplate::render(const TemplateVars& vars) const {
  for (const auto& name : required_) {
    if (!vars.contains(name)) {
      throw TemplateError(fmt::format("template {}: missing variable \"{}\"", id_, name));
    }
  }
  for (const auto& [name, value] : vars) {
    if (!required_.contains(name)) {
      throw TemplateError(fmt::format("template {}: extraneous variable \"{}\"", id_, name));
    }
  }
  std::string out;
  out.reserve(body_.size() + 256);
  for (const auto& piece : pieces_) {
    out += piece.is_slot ? vars.at(piece.text) : piece.text;
  }
  return out;
}

std::string render(const PromptTemplate& tmpl, const TemplateVars& vars) { return tmpl.render(vars); }

std::string_view builtin_resource(std::string_view id) {
  for (std::size_t i = 0; i < detail::kResourceCount; ++i) {
    if (detail::kResources[i].id == id) {
      std::string_view text = detail::kResources[i].text;
      if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
      return text;
    }
  }
  throw TemplateError(fmt::format("no built-in resource \"{}\"", id));
}

std::vector<std::string> builtin_resource_ids() {
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < detail::kResourceCount; ++i) ids.emplace_back(detail::kResources[i].id);
  return ids;
}

const PromptTemplate& builtin_template(std::string_view id) {
  static std::mutex mu;
  static std::map<std::string, PromptTemplate, std::less<>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(id);
  if (it == cache.end()) {
    it = cache.emplace(std::string(id), PromptTemplate(std::string(id), std::string(builtin_resource(id))))
             .first;
  }
  return it->second;
}

}  // namespace beliefbench

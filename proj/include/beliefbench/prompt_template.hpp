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

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace beliefbench {

using TemplateVars = std::map<std::string, std::string>;

// A prompt body with "$name" / "${name}" slots and "$$" for a literal dollar
// sign. Any other "$" is rejected when the template is constructed.
class PromptTemplate {
 public:
  PromptTemplate(std::string id, std::string body);

  const std::string& id() const { return id_; }
  const std::string& body() const { return body_; }
  const std::set<std::string>& required_vars() const { return required_; }
  std::string digest() const;

  // vars must name exactly required_vars(); missing and extraneous names are
  // both fatal.
  std::string render(const TemplateVars& vars) const;

 private:
  struct Piece {
    bool is_slot = false;
    std::string text;  // literal text or slot name
  };

  std::string id_;
  std::string body_;
  std::vector<Piece> pieces_;
  std::set<std::string> required_;
};

std::string render(const PromptTemplate& tmpl, const TemplateVars& vars);

// Resources compiled in from templates/*.txt.
std::string_view builtin_resource(std::string_view id);
std::vector<std::string> builtin_resource_ids();
const PromptTemplate& builtin_template(std::string_view id);

}  // namespace beliefbench

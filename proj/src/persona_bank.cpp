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

#include "beliefbench/persona_bank.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "beliefbench/error.hpp"
#include "beliefbench/rng.hpp"

namespace beliefbench {

using nlohmann::json;

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "test";
}

Split split_from_string(std::string_view text) {
  if (text == "train") return Split::train;
  if (text == "val") return Split::val;
  if (text == "test") return Split::test;
  throw BankError(fmt::format("unknown split \"{}\"", text));
}

std::string_view to_string(AttributeKind kind) {
  return kind == AttributeKind::ordinal ? "ordinal" : "categorical";
}

bool AttributeSpec::has_level(std::string_view level) const {
  return std::find(levels.begin(), levels.end(), level) != levels.end();
}

std::size_t AttributeSpec::level_index(std::string_view level) const {
  auto it = std::find(levels.begin(), levels.end(), level);
  if (it == levels.end()) {
    throw BankError(fmt::format("attribute {}: unknown level \"{}\"", name, level));
  }
  return static_cast<std::size_t>(it - levels.begin());
}

bool AttributeSpec::level_in_split(std::string_view level, Split split) const {
  auto it = split_tags.find(std::string(level));
  if (it == split_tags.end()) return false;
  return std::find(it->second.begin(), it->second.end(), split) != it->second.end();
}

AttributeSpec AttributeSpec::restricted_to(Split split) const {
  AttributeSpec out;
  out.name = name;
  out.kind = kind;
  for (const auto& level : levels) {
    if (!level_in_split(level, split)) continue;
    out.levels.push_back(level);
    out.split_tags[level] = split_tags.at(level);
  }
  return out;
}

void AttributeSpec::validate() const {
  if (name.empty()) throw BankError("attribute with empty name");
  if (levels.size() < 2) {
    throw BankError(fmt::format("attribute {}: needs at least 2 levels, has {}", name, levels.size()));
  }
  std::set<std::string> seen;
  for (const auto& level : levels) {
    if (!seen.insert(level).second) {
      throw BankError(fmt::format("attribute {}: duplicate level \"{}\"", name, level));
    }
    auto it = split_tags.find(level);
    if (it == split_tags.end() || it->second.empty()) {
      throw BankError(fmt::format("attribute {}: level \"{}\" has no split tag", name, level));
    }
  }
  for (const auto& [level, tags] : split_tags) {
    if (!seen.contains(level)) {
      throw BankError(fmt::format("attribute {}: split tags for undeclared level \"{}\"", name, level));
    }
  }
}

PersonaBank::PersonaBank(std::vector<AttributeSpec> specs, std::vector<Persona> personas)
    : specs_(std::move(specs)), personas_(std::move(personas)) {
  std::set<std::string> names;
  for (const auto& spec : specs_) {
    spec.validate();
    if (!names.insert(spec.name).second) {
      throw BankError(fmt::format("attribute {} declared twice", spec.name));
    }
  }
  std::set<std::string> ids;
  for (const auto& p : personas_) {
    if (p.id.empty()) throw BankError("persona with empty id");
    if (!ids.insert(p.id).second) throw BankError(fmt::format("persona {}: duplicate id", p.id));
    for (const auto& [attr, level] : p.attributes) {
      const AttributeSpec* spec = find_spec(attr);
      if (spec == nullptr) {
        throw BankError(fmt::format("persona {}: unknown attribute {}", p.id, attr));
      }
      if (!spec->has_level(level)) {
        throw BankError(fmt::format("persona {}: attribute {}: unknown level \"{}\"", p.id, attr, level));
      }
    }
  }
}

const AttributeSpec* PersonaBank::find_spec(std::string_view name) const {
  for (const auto& spec : specs_) {
    if (spec.name == name) return &spec;
  }
  return nullptr;
}

const AttributeSpec& PersonaBank::spec(std::string_view name) const {
  const AttributeSpec* s = find_spec(name);
  if (s == nullptr) throw BankError(fmt::format("unknown attribute {}", name));
  return *s;
}

std::size_t PersonaBank::count(Split split) const {
  return static_cast<std::size_t>(std::count_if(
      personas_.begin(), personas_.end(), [&](const Persona& p) { return p.split == split; }));
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw BankError(fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AttributeSpec spec_from_json(const json& j) {
  AttributeSpec spec;
  spec.name = j.at("name").get<std::string>();
  const std::string kind = j.value("kind", "categorical");
  if (kind == "ordinal") {
    spec.kind = AttributeKind::ordinal;
  } else if (kind == "categorical") {
    spec.kind = AttributeKind::categorical;
  } else {
    throw BankError(fmt::format("attribute {}: unknown kind \"{}\"", spec.name, kind));
  }
  spec.levels = j.at("levels").get<std::vector<std::string>>();
  for (const auto& [level, tags] : j.at("splits").items()) {
    auto& out = spec.split_tags[level];
    for (const auto& t : tags) out.push_back(split_from_string(t.get<std::string>()));
  }
  return spec;
}

}  // namespace

std::vector<AttributeSpec> load_attribute_specs(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw BankError(fmt::format("{}: {}", path.string(), e.what()));
  }
  std::vector<AttributeSpec> specs;
  try {
    for (const auto& a : doc.at("attributes")) specs.push_back(spec_from_json(a));
  } catch (const json::exception& e) {
    throw BankError(fmt::format("{}: malformed attribute spec: {}", path.string(), e.what()));
  }
  return specs;
}

PersonaBank load_bank(const std::filesystem::path& records, const std::filesystem::path& specs_path) {
  auto specs = load_attribute_specs(specs_path);
  std::istringstream lines(read_file(records));
  std::vector<Persona> personas;
  std::string line;
  int lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = fmt::format("{}:{}", records.string(), lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw BankError(fmt::format("{}: malformed record: {}", where, e.what()));
    }
    if (!j.is_object()) throw BankError(fmt::format("{}: malformed record: not an object", where));
    Persona p;
    if (!j.contains("id") || !j["id"].is_string()) {
      throw BankError(fmt::format("{}: malformed record: missing string field \"id\"", where));
    }
    p.id = j["id"].get<std::string>();
    if (!j.contains("split") || !j["split"].is_string()) {
      throw BankError(fmt::format("{}: persona {}: missing field \"split\"", where, p.id));
    }
    try {
      p.split = split_from_string(j["split"].get<std::string>());
    } catch (const BankError& e) {
      throw BankError(fmt::format("{}: persona {}: {}", where, p.id, e.what()));
    }
    if (!j.contains("attributes") || !j["attributes"].is_object()) {
      throw BankError(fmt::format("{}: persona {}: missing object field \"attributes\"", where, p.id));
    }
    for (const auto& [attr, level] : j["attributes"].items()) {
      if (!level.is_string()) {
        throw BankError(fmt::format("{}: persona {}: attribute {}: level must be a string", where, p.id, attr));
      }
      p.attributes[attr] = level.get<std::string>();
    }
    personas.push_back(std::move(p));
  }
  try {
    return PersonaBank(std::move(specs), std::move(personas));
  } catch (const BankError& e) {
    throw BankError(fmt::format("{}: {}", records.string(), e.what()));
  }
}

void write_bank_records(const PersonaBank& bank, std::ostream& out) {
  for (const auto& p : bank.personas()) {
    json j;
    j["id"] = p.id;
    j["split"] = std::string(to_string(p.split));
    j["attributes"] = p.attributes;
    out << j.dump() << '\n';
  }
}

PersonaBank augment_big_five(const PersonaBank& bank, std::uint64_t seed) {
  for (auto name : kBigFive) {
    if (bank.find_spec(name) == nullptr) {
      throw BankError(fmt::format("Big-Five attribute {} is not declared", name));
    }
  }
  const Rng root(seed);
  std::vector<Persona> personas = bank.personas();
  for (auto& p : personas) {
    for (auto name : kBigFive) {
      const std::string key(name);
      if (p.attributes.contains(key)) continue;
      const AttributeSpec& spec = bank.spec(name);
      Rng draw = root.fork(p.id + "\x1f" + key);
      p.attributes[key] = spec.levels[draw.uniform(spec.levels.size())];
    }
  }
  return PersonaBank(bank.specs(), std::move(personas));
}

std::vector<Persona> sample_split(const PersonaBank& bank, Split split, std::size_t n,
                                  std::uint64_t seed) {
  std::vector<Persona> pool;
  for (const auto& p : bank.personas()) {
    if (p.split == split) pool.push_back(p);
  }
  if (n > pool.size()) {
    throw BankError(fmt::format("split {} has {} personas, {} requested", to_string(split),
                                pool.size(), n));
  }
  std::sort(pool.begin(), pool.end(), [](const Persona& a, const Persona& b) { return a.id < b.id; });
  Rng rng(seed);
  rng.shuffle(pool);
  pool.resize(n);
  std::sort(pool.begin(), pool.end(), [](const Persona& a, const Persona& b) { return a.id < b.id; });
  return pool;
}

std::string display_name(std::string_view attribute_name) {
  std::string out;
  bool start = true;
  for (char c : attribute_name) {
    if (c == '_') {
      out.push_back(' ');
      start = true;
      continue;
    }
    out.push_back(start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
    start = false;
  }
  return out;
}

std::string render_persona_text(const Persona& persona) {
  // std::map iteration is already sorted by attribute name.
  std::string out;
  for (const auto& [attr, level] : persona.attributes) {
    if (!out.empty()) out.push_back('\n');
    out += display_name(attr);
    out += ": ";
    out += level;
  }
  return out;
}

}  // namespace beliefbench

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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace beliefbench {

enum class Split { train, val, test };

std::string_view to_string(Split split);
Split split_from_string(std::string_view text);

enum class AttributeKind { categorical, ordinal };

std::string_view to_string(AttributeKind kind);

// One persona attribute with its ordered levels. Level order is the declared
// order and serves as the tie-break order everywhere downstream.
struct AttributeSpec {
  std::string name;
  AttributeKind kind = AttributeKind::categorical;
  std::vector<std::string> levels;
  std::map<std::string, std::vector<Split>> split_tags;

  bool has_level(std::string_view level) const;
  std::size_t level_index(std::string_view level) const;
  bool level_in_split(std::string_view level, Split split) const;

  // The attribute as seen from one split: only levels tagged with it, in
  // declared order.
  AttributeSpec restricted_to(Split split) const;

  // Throws BankError when K < 2, labels repeat, or a level has no split tag.
  void validate() const;
};

struct Persona {
  std::string id;
  std::map<std::string, std::string> attributes;
  Split split = Split::test;

  friend bool operator==(const Persona&, const Persona&) = default;
};

inline constexpr std::array<std::string_view, 5> kBigFive = {
    "agreeableness", "conscientiousness", "extraversion", "neuroticism", "openness_to_experience"};

// Immutable after construction; the constructor validates every persona
// against the declared specs.
class PersonaBank {
 public:
  PersonaBank(std::vector<AttributeSpec> specs, std::vector<Persona> personas);

  const std::vector<AttributeSpec>& specs() const { return specs_; }
  const std::vector<Persona>& personas() const { return personas_; }

  const AttributeSpec* find_spec(std::string_view name) const;
  const AttributeSpec& spec(std::string_view name) const;

  std::size_t count(Split split) const;

 private:
  std::vector<AttributeSpec> specs_;
  std::vector<Persona> personas_;
};

std::vector<AttributeSpec> load_attribute_specs(const std::filesystem::path& path);

// Loads a line-delimited persona file plus its attribute sidecar. Diagnostics
// name the line, persona id and attribute at fault.
PersonaBank load_bank(const std::filesystem::path& records, const std::filesystem::path& specs);

void write_bank_records(const PersonaBank& bank, std::ostream& out);

// Fills every missing Big-Five attribute with a uniformly drawn level. Draws
// are keyed by (seed, persona id, attribute), so the result does not depend
// on persona order and existing values are never touched.
PersonaBank augment_big_five(const PersonaBank& bank, std::uint64_t seed);

// n distinct personas of the split, sorted by id.
std::vector<Persona> sample_split(const PersonaBank& bank, Split split, std::size_t n,
                                  std::uint64_t seed);

// "same_residence_since_16" -> "Same Residence Since 16".
std::string display_name(std::string_view attribute_name);

// One "Attribute Name: Level" line per attribute, sorted by attribute name.
std::string render_persona_text(const Persona& persona);

}  // namespace beliefbench

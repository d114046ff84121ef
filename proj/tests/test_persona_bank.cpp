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

#include <fstream>
#include <sstream>

#include "beliefbench/error.hpp"
#include "beliefbench/persona_bank.hpp"
#include "test_support.hpp"

using namespace beliefbench;
using namespace beliefbench::testing;

namespace {

AttributeSpec spec(std::string name, std::vector<std::string> levels, std::vector<Split> splits = {Split::test}) {
  AttributeSpec s;
  s.name = std::move(name);
  s.levels = std::move(levels);
  for (const auto& l : s.levels) s.split_tags[l] = splits;
  return s;
}

std::vector<AttributeSpec> big_five_specs() {
  std::vector<AttributeSpec> out;
  for (auto name : kBigFive) out.push_back(spec(std::string(name), {"High", "Low", "Moderate"}));
  return out;
}

std::string expect_bank_error(const std::string& records) {
  const auto dir = scratch("bank_errors");
  std::ofstream(dir / "records.jsonl") << records;
  try {
    load_bank(dir / "records.jsonl", data_dir() / "attributes.json");
  } catch (const BankError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("persona_bank") {
  TEST_CASE("bundled mini-bank loads") {
    const auto bank = load_bank(data_dir() / "minibank_test.jsonl", data_dir() / "attributes.json");
    CHECK(bank.count(Split::test) == 50);
    const auto& c = bank.spec("conscientiousness");
    CHECK(c.restricted_to(Split::test).levels.size() == 3);
  }

  TEST_CASE("diagnostics name line, persona and attribute") {
    const std::string ok =
        R"({"id":"p1","split":"test","attributes":{"conscientiousness":"High"}})";
    CHECK(expect_bank_error(ok + "\n{oops\n").find("records.jsonl:2: malformed record") != std::string::npos);
    CHECK(expect_bank_error(R"({"id":"p9","split":"test","attributes":{"conscientiousness":"Odd"}})")
              .find("persona p9: attribute conscientiousness: unknown level \"Odd\"") != std::string::npos);
    CHECK(expect_bank_error(R"({"id":"p2","split":"test","attributes":{"shoe_size":"9"}})")
              .find("persona p2: unknown attribute shoe_size") != std::string::npos);
    CHECK(expect_bank_error(ok + "\n" + ok + "\n").find("persona p1: duplicate id") != std::string::npos);
    CHECK(expect_bank_error(R"({"id":"p3","split":"dev","attributes":{}})").find("unknown split \"dev\"") !=
          std::string::npos);
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(spec("a", {"x"}).validate(), BankError);
    CHECK_THROWS_AS(spec("a", {"x", "x"}).validate(), BankError);
    auto untagged = spec("a", {"x", "y"});
    untagged.split_tags.erase("y");
    CHECK_THROWS_AS(untagged.validate(), BankError);
    auto mixed = spec("a", {"x", "y", "z"});
    mixed.split_tags["y"] = {Split::train};
    CHECK(mixed.restricted_to(Split::test).levels == std::vector<std::string>{"x", "z"});
    CHECK(mixed.level_index("z") == 2);
  }

  TEST_CASE("augmentation fills only missing Big-Five values, independent of order") {
    std::vector<Persona> ps = {{"a", {{"conscientiousness", "Low"}}, Split::test},
                               {"b", {}, Split::test},
                               {"c", {}, Split::train}};
    const PersonaBank bank(big_five_specs(), ps);
    const auto aug = augment_big_five(bank, 11);
    for (const auto& p : aug.personas()) CHECK(p.attributes.size() == kBigFive.size());
    CHECK(aug.personas()[0].attributes.at("conscientiousness") == "Low");

    std::vector<Persona> reversed(ps.rbegin(), ps.rend());
    const auto aug_rev = augment_big_five(PersonaBank(big_five_specs(), reversed), 11);
    CHECK(aug_rev.personas()[2] == aug.personas()[0]);
    CHECK(aug_rev.personas()[0] == aug.personas()[2]);
    CHECK(augment_big_five(aug, 11).personas() == aug.personas());
  }

  TEST_CASE("augmentation draws are roughly uniform") {
    std::vector<Persona> ps;
    for (int i = 0; i < 3000; ++i) ps.push_back({"p" + std::to_string(i), {}, Split::test});
    const auto aug = augment_big_five(PersonaBank(big_five_specs(), ps), 3);
    std::map<std::string, int> counts;
    for (const auto& p : aug.personas()) ++counts[p.attributes.at("openness_to_experience")];
    for (const auto& [level, n] : counts) CHECK(std::abs(n - 1000) < 120);
  }

  TEST_CASE("augmentation requires declared Big-Five attributes") {
    const PersonaBank bank({spec("age", {"old", "young"})}, {});
    CHECK_THROWS_AS(augment_big_five(bank, 1), BankError);
  }

  TEST_CASE("sampling is seeded, distinct and sorted") {
    const auto bank = load_bank(data_dir() / "minibank_test.jsonl", data_dir() / "attributes.json");
    const auto a = sample_split(bank, Split::test, 20, 7);
    const auto b = sample_split(bank, Split::test, 20, 7);
    CHECK(a == b);
    CHECK(a.size() == 20);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].id < a[i].id);
    CHECK_FALSE(sample_split(bank, Split::test, 20, 8) == a);
    CHECK_THROWS_AS(sample_split(bank, Split::test, 51, 7), BankError);
    CHECK_THROWS_AS(sample_split(bank, Split::train, 1, 7), BankError);
  }

  TEST_CASE("display names and persona text") {
    CHECK(display_name("same_residence_since_16") == "Same Residence Since 16");
    CHECK(display_name("us_citizenship_status") == "Us Citizenship Status");
    const Persona p{"x",
                    {{"us_citizenship_status", "A U.S. citizen"}, {"age", "30-44"}, {"conscientiousness", "High"}},
                    Split::test};
    CHECK(render_persona_text(p) == "Age: 30-44\nConscientiousness: High\nUs Citizenship Status: A U.S. citizen");
  }

  TEST_CASE("records round-trip through the writer") {
    const auto bank = load_bank(data_dir() / "minibank_test.jsonl", data_dir() / "attributes.json");
    std::ostringstream out;
    write_bank_records(bank, out);
    const auto dir = scratch("bank_roundtrip");
    std::ofstream(dir / "r.jsonl") << out.str();
    const auto again = load_bank(dir / "r.jsonl", data_dir() / "attributes.json");
    CHECK(again.personas() == bank.personas());
  }
}

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

#include "beliefbench/report.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "beliefbench/error.hpp"

namespace beliefbench {

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  throw ConfigError(fmt::format("unknown report format \"{}\"", text));
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

std::string join_row(const std::vector<std::string>& cells, std::string (*fmt_cell)(const std::string&),
                     std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += sep;
    out += fmt_cell(cells[i]);
  }
  return out;
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out = join_row(table.header, csv_cell, ",") + "\n";
  for (const auto& row : table.rows) out += join_row(row, csv_cell, ",") + "\n";
  if (!table.notes.empty()) {
    out += "\n";
    for (const auto& note : table.notes) out += "# " + note + "\n";
  }
  return out;
}

std::string to_markdown(const Table& table) {
  std::string out;
  if (!table.title.empty()) out += "### " + table.title + "\n\n";
  out += "| " + join_row(table.header, md_cell, " | ") + " |\n";
  out += "|";
  for (std::size_t i = 0; i < table.header.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : table.rows) out += "| " + join_row(row, md_cell, " | ") + " |\n";
  if (!table.notes.empty()) {
    out += "\n";
    for (const auto& note : table.notes) out += "_" + note + "_\n";
  }
  return out;
}

std::string render(const Table& table, ReportFormat format) {
  return format == ReportFormat::csv ? to_csv(table) : to_markdown(table);
}

std::string format_fixed(const std::optional<double>& value, int decimals) {
  if (!value) return "NA";
  std::string s = fmt::format("{:.{}f}", *value, decimals);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace {

int strategy_rank(const std::string& s) {
  if (s == "NoCtxTr") return 0;
  if (s == "CtxTr") return 1;
  if (s == "CtxDollar") return 2;
  return 3;
}

std::string strategy_label(const std::string& s) {
  if (s == "NoCtxTr") return "NoCtx+Tr";
  if (s == "CtxTr") return "Ctx+Tr";
  if (s == "CtxDollar") return "Ctx+$";
  return s;
}

const AttributeOutcome* find_attribute(const PopulationResult& r, const std::string& name) {
  for (const auto& a : r.attributes) {
    if (a.attribute == name) return &a;
  }
  return nullptr;
}

std::vector<std::string> attribute_union(const std::vector<const PopulationResult*>& results) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto* r : results) {
    for (const auto& a : r->attributes) {
      if (seen.insert(a.attribute).second) out.push_back(a.attribute);
    }
  }
  return out;
}

std::string mode_label(ConditioningMode mode) {
  switch (mode) {
    case ConditioningMode::none: return "Unconditioned";
    case ConditioningMode::self: return "Self-Conditioned";
    case ConditioningMode::weak: return "Weak Perturbation (ρ=0.80)";
    case ConditioningMode::strong: return "Strong Perturbation (ρ=0.20)";
  }
  return "";
}

}  // namespace

Table emit_population_table(const PopulationTableInput& results) {
  Table t;
  t.title = "Effect size difference and Spearman correlation";
  std::vector<std::string> models;
  std::vector<std::string> strategies;
  for (const auto& [key, r] : results) {
    if (std::find(models.begin(), models.end(), key.first) == models.end()) models.push_back(key.first);
    if (std::find(strategies.begin(), strategies.end(), key.second) == strategies.end()) strategies.push_back(key.second);
  }
  std::stable_sort(strategies.begin(), strategies.end(),
                   [](const auto& a, const auto& b) { return strategy_rank(a) < strategy_rank(b); });
  t.header = {"strategy", "attribute"};
  for (const auto& m : models) {
    t.header.push_back(m + " |Δη²|");
    t.header.push_back(m + " ρ");
  }
  for (const auto& strategy : strategies) {
    std::vector<const PopulationResult*> block;
    for (const auto& m : models) {
      const auto it = results.find({m, strategy});
      block.push_back(it == results.end() ? nullptr : &it->second);
    }
    std::vector<const PopulationResult*> present;
    for (const auto* r : block) {
      if (r) present.push_back(r);
    }
    for (const auto& attribute : attribute_union(present)) {
      std::vector<std::string> row = {strategy_label(strategy), attribute};
      for (const auto* r : block) {
        const AttributeOutcome* a = r ? find_attribute(*r, attribute) : nullptr;
        row.push_back(format_fixed(a ? a->delta_eta2 : std::nullopt, 2));
        row.push_back(format_fixed(a ? a->rho : std::nullopt, 2));
      }
      t.rows.push_back(std::move(row));
    }
    std::vector<std::string> median_row = {strategy_label(strategy), "Median"};
    for (const auto* r : block) {
      median_row.push_back(format_fixed(r ? r->median_delta_eta2 : std::nullopt, 2));
      median_row.push_back(format_fixed(r ? r->median_rho : std::nullopt, 2));
    }
    t.rows.push_back(std::move(median_row));
  }
  return t;
}

Table emit_conditioning_table(const ConditioningTableInput& results) {
  Table t;
  t.title = "Belief conditioning effectiveness (median ρ against the imposed prior)";
  t.header = {"condition"};
  for (const auto& [model, modes] : results) t.header.push_back(model);
  for (auto mode : {ConditioningMode::none, ConditioningMode::self, ConditioningMode::weak, ConditioningMode::strong}) {
    bool any = false;
    std::vector<std::string> row = {mode_label(mode)};
    for (const auto& [model, modes] : results) {
      const auto it = modes.find(mode);
      if (it != modes.end()) any = true;
      row.push_back(format_fixed(it == modes.end() ? std::nullopt : it->second.median_rho, 2));
    }
    if (any) t.rows.push_back(std::move(row));
    else t.notes.push_back(fmt::format("Not run: {}", mode_label(mode)));
  }
  return t;
}

Table emit_mae_series(const IndividualResult& result) {
  Table t;
  t.title = fmt::format("Forecast-action MAE by round ({})", result.model_id);
  t.header = {"archetype", "round", "mae", "n"};
  for (const auto& s : result.archetypes) {
    for (const auto& c : s.rounds) {
      t.rows.push_back({s.archetype, std::to_string(c.round), format_fixed(c.mae, 3), std::to_string(c.n_trajectories)});
    }
  }
  for (const auto& s : result.archetypes) {
    t.notes.push_back(fmt::format("{} overall MAE: {}", s.archetype, format_fixed(s.overall_mae, 3)));
  }
  return t;
}

Table emit_ablation_table(const AblationTableInput& results) {
  Table t;
  t.title = "Endowment ablation";
  std::vector<std::int64_t> endowments;
  for (const auto& [key, by_e] : results) {
    for (const auto& [e, r] : by_e) {
      if (std::find(endowments.begin(), endowments.end(), e) == endowments.end()) endowments.push_back(e);
    }
  }
  std::sort(endowments.begin(), endowments.end());
  t.header = {"model", "strategy", "attribute"};
  for (auto e : endowments) {
    const std::string label = Money::from_cents(e).to_string();
    t.header.push_back(fmt::format("${} |Δη²|", label));
    t.header.push_back(fmt::format("${} ρ", label));
  }
  for (const auto& [key, by_e] : results) {
    std::vector<const PopulationResult*> present;
    for (const auto& [e, r] : by_e) present.push_back(&r);
    auto cells = [&](auto pick) {
      std::vector<std::string> out;
      for (auto e : endowments) {
        const auto it = by_e.find(e);
        const auto [delta, rho] = it == by_e.end() ? std::pair<std::optional<double>, std::optional<double>>{}
                                                   : pick(it->second);
        out.push_back(format_fixed(delta, 2));
        out.push_back(format_fixed(rho, 2));
      }
      return out;
    };
    for (const auto& attribute : attribute_union(present)) {
      std::vector<std::string> row = {key.first, strategy_label(key.second), attribute};
      for (auto& c : cells([&](const PopulationResult& r) {
             const auto* a = find_attribute(r, attribute);
             return a ? std::pair{a->delta_eta2, a->rho} : std::pair<std::optional<double>, std::optional<double>>{};
           })) {
        row.push_back(std::move(c));
      }
      t.rows.push_back(std::move(row));
    }
    std::vector<std::string> row = {key.first, strategy_label(key.second), "Median"};
    for (auto& c : cells([](const PopulationResult& r) { return std::pair{r.median_delta_eta2, r.median_rho}; })) {
      row.push_back(std::move(c));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  const auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw Error(fmt::format("{}: not valid JSON", path.string()));
  return j;
}

std::string slug(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' ? c : '_');
  return out;
}

template <typename Map, typename Key, typename Value>
void insert_unique(Map& map, const Key& key, Value value, const std::filesystem::path& run) {
  if (!map.emplace(key, std::move(value)).second) {
    throw Error(fmt::format("{}: duplicate result for the same model and strategy", run.string()));
  }
}

}  // namespace

std::map<std::string, std::string> build_reports(const std::vector<std::filesystem::path>& runs,
                                                 ReportFormat format) {
  if (runs.empty()) throw ConfigError("report needs at least one run directory");
  const std::string ext = format == ReportFormat::csv ? "csv" : "md";
  PopulationTableInput population;
  ConditioningTableInput conditioning;
  AblationTableInput ablation;
  std::map<std::string, std::string> out;

  for (const auto& run : runs) {
    const auto manifest = read_json(run / "manifest.json");
    const auto kind = run_kind_from_string(manifest.at("kind").get<std::string>());
    switch (kind) {
      case RunKind::elicit:
        break;
      case RunKind::population: {
        auto r = PopulationResult::from_json(read_json(run / "population.json"));
        const std::pair key{r.model_id, r.strategy};
        insert_unique(population, key, std::move(r), run);
        break;
      }
      case RunKind::conditioning: {
        std::map<ConditioningMode, PopulationResult> modes;
        std::string model;
        for (const auto& j : read_json(run / "conditioning.json")) {
          auto r = PopulationResult::from_json(j);
          model = r.model_id;
          modes.emplace(conditioning_mode_from_string(r.mode), std::move(r));
        }
        insert_unique(conditioning, model, std::move(modes), run);
        break;
      }
      case RunKind::individual: {
        const auto r = IndividualResult::from_json(read_json(run / "individual.json"));
        const auto name = fmt::format("mae_series_{}.{}", slug(r.model_id), ext);
        if (out.count(name)) throw Error(fmt::format("{}: duplicate individual result for {}", run.string(), r.model_id));
        out[name] = render(emit_mae_series(r), format);
        break;
      }
      case RunKind::ablation: {
        std::map<std::int64_t, PopulationResult> by_e;
        std::pair<std::string, std::string> key;
        for (const auto& j : read_json(run / "ablation.json")) {
          auto r = PopulationResult::from_json(j);
          key = {r.model_id, r.strategy};
          by_e.emplace(r.endowment_cents, std::move(r));
        }
        insert_unique(ablation, key, std::move(by_e), run);
        break;
      }
    }
  }
  if (!population.empty()) out["population_table." + ext] = render(emit_population_table(population), format);
  if (!conditioning.empty()) out["conditioning_table." + ext] = render(emit_conditioning_table(conditioning), format);
  if (!ablation.empty()) out["ablation_table." + ext] = render(emit_ablation_table(ablation), format);
  return out;
}

}  // namespace beliefbench

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

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "beliefbench/experiment.hpp"

namespace beliefbench {

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> notes;
};

enum class ReportFormat { csv, markdown };

ReportFormat report_format_from_string(std::string_view text);
std::string render(const Table& table, ReportFormat format);
std::string to_csv(const Table& table);
std::string to_markdown(const Table& table);

// Two-decimal cells for ρ and |Δη²|, three for MAE, "NA" when absent.
std::string format_fixed(const std::optional<double>& value, int decimals);

// Key: (model, strategy).
using PopulationTableInput = std::map<std::pair<std::string, std::string>, PopulationResult>;

// Attribute rows grouped by strategy with a median row per block; two value
// columns (|Δη²|, ρ) per model.
Table emit_population_table(const PopulationTableInput& results);

// Key: model -> mode -> result. One row per mode present, one column per
// model, cells = median ρ.
using ConditioningTableInput = std::map<std::string, std::map<ConditioningMode, PopulationResult>>;
Table emit_conditioning_table(const ConditioningTableInput& results);

// Long format (archetype, round, mae, n).
Table emit_mae_series(const IndividualResult& result);

// Key: (model, strategy) -> endowment cents -> result; cells = median ρ.
using AblationTableInput =
    std::map<std::pair<std::string, std::string>, std::map<std::int64_t, PopulationResult>>;
Table emit_ablation_table(const AblationTableInput& results);

// Every document emitted for a set of run directories, keyed by file name
// (e.g. "population_table.csv").
std::map<std::string, std::string> build_reports(const std::vector<std::filesystem::path>& runs,
                                                 ReportFormat format);

}  // namespace beliefbench

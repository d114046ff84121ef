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

#include "beliefbench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "beliefbench/digest.hpp"
#include "beliefbench/error.hpp"
#include "beliefbench/response_parser.hpp"
#include "beliefbench/rng.hpp"
#include "beliefbench/stats.hpp"

namespace beliefbench {

using ojson = nlohmann::ordered_json;

std::string_view to_string(ConditioningMode mode) {
  switch (mode) {
    case ConditioningMode::none: return "none";
    case ConditioningMode::self: return "self";
    case ConditioningMode::weak: return "weak";
    case ConditioningMode::strong: return "strong";
  }
  return "none";
}

ConditioningMode conditioning_mode_from_string(std::string_view text) {
  if (text == "none") return ConditioningMode::none;
  if (text == "self") return ConditioningMode::self;
  if (text == "weak") return ConditioningMode::weak;
  if (text == "strong") return ConditioningMode::strong;
  throw ConfigError(fmt::format("unknown conditioning mode \"{}\"", text));
}

std::string_view to_string(RunKind kind) {
  switch (kind) {
    case RunKind::elicit: return "elicit";
    case RunKind::population: return "population";
    case RunKind::conditioning: return "conditioning";
    case RunKind::individual: return "individual";
    case RunKind::ablation: return "ablation";
  }
  return "population";
}

RunKind run_kind_from_string(std::string_view text) {
  for (auto k : {RunKind::elicit, RunKind::population, RunKind::conditioning, RunKind::individual,
                 RunKind::ablation}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError(fmt::format("unknown run kind \"{}\"", text));
}

const std::vector<std::string>& default_attributes() {
  static const std::vector<std::string> attrs = {
      "age", "conscientiousness", "family_structure_at_16", "highest_degree_received",
      "openness_to_experience", "political_views", "same_residence_since_16",
      "us_citizenship_status", "work_status"};
  return attrs;
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  sampling.validate();
  game.validate();
  if (max_attempts < 1) throw ConfigError("max_attempts must be at least 1");
  if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
  if (n_personas < 1) throw ConfigError("n_personas must be at least 1");
  if (attributes.empty()) throw ConfigError("attributes must not be empty");
  std::set<std::string> seen;
  for (const auto& a : attributes) {
    if (!seen.insert(a).second) throw ConfigError(fmt::format("attribute \"{}\" listed twice", a));
  }
  if (modes.empty()) throw ConfigError("conditioning modes must not be empty");
  std::set<ConditioningMode> seen_modes;
  for (auto m : modes) {
    if (!seen_modes.insert(m).second) throw ConfigError(fmt::format("mode \"{}\" listed twice", to_string(m)));
  }
  for (double r : {weak_rho, strong_rho}) {
    if (!std::isfinite(r) || r < -1.0 || r > 1.0) throw ConfigError(fmt::format("target rho {} outside [-1, 1]", r));
  }
  if (archetypes.empty()) throw ConfigError("archetypes must not be empty");
  for (int cap : archetypes) {
    if (cap <= 0) throw ConfigError(fmt::format("archetype cap must be positive, got {}", cap));
  }
  if (endowments.empty()) throw ConfigError("endowments must not be empty");
  for (int e : endowments) {
    if (e <= 0) throw ConfigError(fmt::format("endowment must be positive, got {}", e));
  }
  if (group_size < 2) throw ConfigError("group_size must be at least 2");
}

namespace {

std::string money_number(Money m) { return m.to_string(); }

Money money_from_json(const nlohmann::json& v) {
  if (v.is_number_integer()) return Money::from_dollars(v.get<std::int64_t>());
  if (v.is_number()) return Money::from_cents(std::llround(v.get<double>() * 100.0));
  if (v.is_string()) return Money::from_cents(std::llround(std::stod(v.get<std::string>()) * 100.0));
  throw ConfigError("money value must be a number");
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
}

}  // namespace

nlohmann::ordered_json ExperimentConfig::to_json() const {
  ojson j;
  j["mock"] = mock;
  j["endpoint"] = endpoint;
  j["model_id"] = model_id;
  j["api_key_env"] = api_key_env;
  j["sampling"] = beliefbench::to_json(sampling);
  j["max_attempts"] = max_attempts;
  j["parallelism"] = parallelism;
  j["strategy"] = beliefbench::to_string(strategy);
  ojson ms = ojson::array();
  for (auto m : modes) ms.push_back(beliefbench::to_string(m));
  j["modes"] = ms;
  j["weak_rho"] = weak_rho;
  j["strong_rho"] = strong_rho;
  j["game"] = {{"endowment", money_number(game.endowment)},
               {"rounds", game.rounds},
               {"budget_mode", beliefbench::to_string(game.budget_mode)},
               {"granularity", beliefbench::to_string(game.granularity)}};
  j["n_personas"] = n_personas;
  j["attributes"] = attributes;
  j["archetypes"] = archetypes;
  j["endowments"] = endowments;
  j["seed"] = seed;
  j["history_mode"] = beliefbench::to_string(history_mode);
  j["group_size"] = group_size;
  return j;
}

std::string ExperimentConfig::digest() const {
  ojson j = to_json();
  j.erase("parallelism");  // scheduling only; results do not depend on it
  return sha256_hex(j.dump());
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) { return from_json(j, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) { return load(path, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, ExperimentConfig base) {
  return load_from_json_at(j, std::move(base), {});
}

ExperimentConfig ExperimentConfig::load_from_json_at(const nlohmann::json& j, ExperimentConfig c,
                                                     const std::filesystem::path& base_dir) {
  static const std::set<std::string> known = {
      "mock", "mock_policy", "endpoint", "model_id", "api_key_env", "sampling", "max_attempts",
      "parallelism", "cache_dir", "strategy", "modes", "weak_rho", "strong_rho", "game", "n_personas",
      "attributes", "archetypes", "endowments", "seed", "history_mode", "group_size", "output_dir",
      "bank", "specs"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(fmt::format("unknown config field \"{}\"", key));
  }
  try {
    if (j.contains("mock")) c.mock = j["mock"].get<bool>();
    if (j.contains("mock_policy")) c.mock_policy = resolve(base_dir, j["mock_policy"].get<std::string>());
    if (j.contains("endpoint")) c.endpoint = j["endpoint"].get<std::string>();
    if (j.contains("model_id")) c.model_id = j["model_id"].get<std::string>();
    if (j.contains("api_key_env")) c.api_key_env = j["api_key_env"].get<std::string>();
    if (j.contains("sampling")) {
      const auto& s = j["sampling"];
      c.sampling.temperature = s.value("temperature", c.sampling.temperature);
      c.sampling.top_p = s.value("top_p", c.sampling.top_p);
      c.sampling.top_k = s.value("top_k", c.sampling.top_k);
      c.sampling.max_tokens = s.value("max_tokens", c.sampling.max_tokens);
    }
    if (j.contains("max_attempts")) c.max_attempts = j["max_attempts"].get<int>();
    if (j.contains("parallelism")) c.parallelism = j["parallelism"].get<int>();
    if (j.contains("cache_dir")) c.cache_dir = resolve(base_dir, j["cache_dir"].get<std::string>());
    if (j.contains("strategy")) c.strategy = strategy_from_string(j["strategy"].get<std::string>());
    if (j.contains("modes")) {
      c.modes.clear();
      for (const auto& m : j["modes"]) c.modes.push_back(conditioning_mode_from_string(m.get<std::string>()));
    }
    if (j.contains("weak_rho")) c.weak_rho = j["weak_rho"].get<double>();
    if (j.contains("strong_rho")) c.strong_rho = j["strong_rho"].get<double>();
    if (j.contains("game")) {
      const auto& g = j["game"];
      if (g.contains("endowment")) c.game.endowment = money_from_json(g["endowment"]);
      if (g.contains("rounds")) c.game.rounds = g["rounds"].get<int>();
      if (g.contains("budget_mode")) c.game.budget_mode = budget_mode_from_string(g["budget_mode"].get<std::string>());
      if (g.contains("granularity")) c.game.granularity = granularity_from_string(g["granularity"].get<std::string>());
    }
    if (j.contains("n_personas")) c.n_personas = j["n_personas"].get<std::size_t>();
    if (j.contains("attributes")) c.attributes = j["attributes"].get<std::vector<std::string>>();
    if (j.contains("archetypes")) c.archetypes = j["archetypes"].get<std::vector<int>>();
    if (j.contains("endowments")) c.endowments = j["endowments"].get<std::vector<int>>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("history_mode")) c.history_mode = history_mode_from_string(j["history_mode"].get<std::string>());
    if (j.contains("group_size")) c.group_size = j["group_size"].get<int>();
    if (j.contains("output_dir")) c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
    if (j.contains("bank")) c.bank = resolve(base_dir, j["bank"].get<std::string>());
    if (j.contains("specs")) c.specs = resolve(base_dir, j["specs"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("malformed config: {}", e.what()));
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  const auto j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw ConfigError(fmt::format("{}: not valid JSON", path.string()));
  return load_from_json_at(j, std::move(base), path.parent_path());
}

PerturbationSpec perturbation_for(const ExperimentConfig& config, ConditioningMode mode) {
  PerturbationSpec spec;
  spec.mode = SearchMode::exact;
  spec.label = std::string(to_string(mode));
  if (mode == ConditioningMode::weak) spec.target_rho = config.weak_rho;
  else if (mode == ConditioningMode::strong) spec.target_rho = config.strong_rho;
  else throw ConfigError(fmt::format("mode \"{}\" imposes no perturbation", to_string(mode)));
  spec.seed = config.seed ^ fnv1a64(spec.label);
  return spec;
}

// ---------------------------------------------------------------------------
// Transcript

nlohmann::ordered_json TranscriptRecord::to_json() const {
  ojson j;
  j["run_id"] = run_id;
  j["stage"] = stage;
  j["persona_id"] = persona_id;
  if (attribute) j["attribute"] = *attribute;
  if (round) j["round"] = *round;
  if (archetype) j["archetype"] = *archetype;
  if (mode) j["mode"] = *mode;
  if (endowment_cents) j["endowment_cents"] = *endowment_cents;
  if (!persona_attributes.empty()) j["persona_attributes"] = persona_attributes;
  j["prompt_digest"] = prompt_digest;
  j["prompt"] = prompt;
  j["raw_response"] = raw_response;
  j["parse_status"] = parse_status;
  j["parsed_value"] = parsed_value;
  if (reason) j["reason"] = *reason;
  return j;
}

TranscriptRecord TranscriptRecord::from_json(const nlohmann::json& j) {
  TranscriptRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.stage = j.at("stage").get<std::string>();
  r.persona_id = j.value("persona_id", "");
  if (j.contains("attribute")) r.attribute = j["attribute"].get<std::string>();
  if (j.contains("round")) r.round = j["round"].get<int>();
  if (j.contains("archetype")) r.archetype = j["archetype"].get<std::string>();
  if (j.contains("mode")) r.mode = j["mode"].get<std::string>();
  if (j.contains("endowment_cents")) r.endowment_cents = j["endowment_cents"].get<std::int64_t>();
  if (j.contains("persona_attributes")) {
    r.persona_attributes = j["persona_attributes"].get<std::map<std::string, std::string>>();
  }
  r.prompt_digest = j.at("prompt_digest").get<std::string>();
  r.prompt = j.at("prompt").get<std::string>();
  r.raw_response = j.at("raw_response").get<std::string>();
  r.parse_status = j.at("parse_status").get<std::string>();
  r.parsed_value = j.value("parsed_value", nlohmann::json());
  if (j.contains("reason")) r.reason = j["reason"].get<std::string>();
  return r;
}

std::string TranscriptRecord::sort_key() const {
  const int stage_rank = stage == "elicit" ? 0 : stage == "forecast" ? 1 : 2;
  return fmt::format("{:012}|{}|{}|{}|{}|{:04}|{}|{}", endowment_cents.value_or(0), mode.value_or(""),
                     archetype.value_or(""), persona_id, attribute.value_or(""), round.value_or(0),
                     stage_rank, stage);
}

std::vector<TranscriptRecord> read_transcript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open transcript {}", path.string()));
  std::vector<TranscriptRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(fmt::format("{}:{}: malformed transcript line", path.string(), lineno));
    try {
      out.push_back(TranscriptRecord::from_json(j));
    } catch (const nlohmann::json::exception& e) {
      throw Error(fmt::format("{}:{}: {}", path.string(), lineno, e.what()));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Results JSON

namespace {

template <typename T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

template <typename T>
std::optional<T> opt_from(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

}  // namespace

nlohmann::ordered_json PopulationResult::to_json() const {
  ojson j;
  j["model_id"] = model_id;
  j["strategy"] = strategy;
  j["mode"] = mode;
  j["endowment_cents"] = endowment_cents;
  ojson attrs = ojson::array();
  for (const auto& a : attributes) {
    ojson o;
    o["attribute"] = a.attribute;
    o["levels"] = a.levels;
    o["belief"] = a.belief ? beliefbench::to_json(*a.belief) : ojson(nullptr);
    o["reference_ranking"] = opt(a.reference);
    ojson means = ojson::object();
    for (const auto& [l, m] : a.level_means) means[l] = m;
    o["level_means"] = means;
    ojson counts = ojson::object();
    for (const auto& [l, n] : a.level_counts) counts[l] = n;
    o["level_counts"] = counts;
    o["behavioral_ranking"] = opt(a.behavioral_ranking);
    o["behavior_eta2"] = opt(a.behavior_eta2);
    o["degenerate"] = a.degenerate;
    o["rho"] = opt(a.rho);
    o["delta_eta2"] = opt(a.delta_eta2);
    o["rho_vs_elicited"] = opt(a.rho_vs_elicited);
    o["n_included"] = a.n_included;
    o["n_excluded"] = a.n_excluded;
    o["missing_reason"] = a.missing()? ojson(a.missing_reason) : ojson(nullptr);
    attrs.push_back(std::move(o));
  }
  j["attributes"] = std::move(attrs);
  j["median_rho"] = opt(median_rho);
  j["median_delta_eta2"] = opt(median_delta_eta2);
  return j;
}

PopulationResult PopulationResult::from_json(const nlohmann::json& j) {
  PopulationResult r;
  r.model_id = j.at("model_id").get<std::string>();
  r.strategy = j.at("strategy").get<std::string>();
  r.mode = j.value("mode", "none");
  r.endowment_cents = j.value("endowment_cents", std::int64_t{1000});
  for (const auto& o : j.at("attributes")) {
    AttributeOutcome a;
    a.attribute = o.at("attribute").get<std::string>();
    a.levels = o.at("levels").get<std::vector<std::string>>();
    if (!o["belief"].is_null()) a.belief = belief_from_json(o["belief"]);
    a.reference = opt_from<std::vector<std::string>>(o, "reference_ranking");
    for (const auto& l : a.levels) {
      if (o["level_means"].contains(l)) a.level_means.emplace_back(l, o["level_means"][l].get<double>());
      if (o["level_counts"].contains(l)) a.level_counts.emplace_back(l, o["level_counts"][l].get<int>());
    }
    a.behavioral_ranking = opt_from<std::vector<std::string>>(o, "behavioral_ranking");
    a.behavior_eta2 = opt_from<double>(o, "behavior_eta2");
    a.degenerate = o.value("degenerate", false);
    a.rho = opt_from<double>(o, "rho");
    a.delta_eta2 = opt_from<double>(o, "delta_eta2");
    a.rho_vs_elicited = opt_from<double>(o, "rho_vs_elicited");
    a.n_included = o.value("n_included", 0);
    a.n_excluded = o.value("n_excluded", 0);
    a.missing_reason = opt_from<std::string>(o, "missing_reason").value_or("");
    r.attributes.push_back(std::move(a));
  }
  r.median_rho = opt_from<double>(j, "median_rho");
  r.median_delta_eta2 = opt_from<double>(j, "median_delta_eta2");
  return r;
}

nlohmann::ordered_json IndividualResult::to_json() const {
  ojson j;
  j["model_id"] = model_id;
  j["budget_mode"] = budget_mode;
  j["history_mode"] = history_mode;
  ojson series = ojson::array();
  for (const auto& s : archetypes) {
    ojson rounds = ojson::array();
    for (const auto& c : s.rounds) {
      rounds.push_back({{"round", c.round}, {"mae", opt(c.mae)}, {"n_trajectories", c.n_trajectories}});
    }
    series.push_back({{"archetype", s.archetype}, {"rounds", rounds}, {"overall_mae", opt(s.overall_mae)}});
  }
  j["archetypes"] = std::move(series);
  ojson trajs = ojson::array();
  for (const auto& t : trajectories) {
    trajs.push_back({{"persona_id", t.persona_id},
                     {"archetype", t.archetype},
                     {"forecasts", t.forecasts},
                     {"actuals", t.actuals},
                     {"voided_at_round", opt(t.voided_at_round)},
                     {"void_reason", t.voided_at_round ? ojson(t.void_reason) : ojson(nullptr)},
                     {"mae", opt(t.mae)}});
  }
  j["trajectories"] = std::move(trajs);
  j["overall_mae"] = opt(overall_mae);
  return j;
}

IndividualResult IndividualResult::from_json(const nlohmann::json& j) {
  IndividualResult r;
  r.model_id = j.at("model_id").get<std::string>();
  r.budget_mode = j.value("budget_mode", "reset");
  r.history_mode = j.value("history_mode", "with-history");
  for (const auto& s : j.at("archetypes")) {
    ArchetypeSeries a;
    a.archetype = s.at("archetype").get<std::string>();
    for (const auto& c : s.at("rounds")) {
      a.rounds.push_back(RoundCell{c.at("round").get<int>(), opt_from<double>(c, "mae"),
                                   c.value("n_trajectories", 0)});
    }
    a.overall_mae = opt_from<double>(s, "overall_mae");
    r.archetypes.push_back(std::move(a));
  }
  for (const auto& t : j.at("trajectories")) {
    Trajectory tr;
    tr.persona_id = t.at("persona_id").get<std::string>();
    tr.archetype = t.at("archetype").get<std::string>();
    tr.forecasts = t.at("forecasts").get<std::vector<int>>();
    tr.actuals = t.at("actuals").get<std::vector<int>>();
    tr.voided_at_round = opt_from<int>(t, "voided_at_round");
    tr.void_reason = opt_from<std::string>(t, "void_reason").value_or("");
    tr.mae = opt_from<double>(t, "mae");
    r.trajectories.push_back(std::move(tr));
  }
  r.overall_mae = opt_from<double>(j, "overall_mae");
  return r;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double value) {
  if (value == 0.0) return "0";
  return fmt::format("{}", value);
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

std::string num_or_na(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

}  // namespace

std::string population_csv(const PopulationResult& result) {
  std::string out = "strategy,attribute,rho,delta_eta2,n_included,n_excluded,degenerate_flag\n";
  int included = 0;
  int excluded = 0;
  for (const auto& a : result.attributes) {
    out += fmt::format("{},{},{},{},{},{},{}\n", csv_field(result.strategy), csv_field(a.attribute),
                       num_or_na(a.rho), num_or_na(a.delta_eta2), a.n_included, a.n_excluded,
                       a.degenerate ? "true" : "false");
    included += a.n_included;
    excluded += a.n_excluded;
  }
  out += fmt::format("{},median,{},{},{},{},\n", csv_field(result.strategy), num_or_na(result.median_rho),
                     num_or_na(result.median_delta_eta2), included, excluded);
  return out;
}

std::string individual_csv(const IndividualResult& result) {
  std::string out = "archetype,round,mae,n_trajectories\n";
  for (const auto& s : result.archetypes) {
    for (const auto& c : s.rounds) {
      out += fmt::format("{},{},{},{}\n", csv_field(s.archetype), c.round, num_or_na(c.mae), c.n_trajectories);
    }
  }
  return out;
}

std::string trajectories_csv(const IndividualResult& result) {
  std::string out = "persona_id,archetype,round,forecast,actual,abs_error\n";
  for (const auto& t : result.trajectories) {
    for (std::size_t i = 0; i < t.actuals.size(); ++i) {
      out += fmt::format("{},{},{},{},{},{}\n", csv_field(t.persona_id), csv_field(t.archetype), i + 1,
                         t.forecasts[i], t.actuals[i], std::abs(t.forecasts[i] - t.actuals[i]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assembly from transcripts

namespace {

struct BeliefOutcome {
  std::string attribute;
  std::optional<BeliefRecord> belief;
  std::string reason;
};

AttributeSpec spec_from_manifest(const nlohmann::json& entry) {
  AttributeSpec spec;
  spec.name = entry.at("name").get<std::string>();
  spec.kind = AttributeKind::categorical;
  spec.levels = entry.at("levels").get<std::vector<std::string>>();
  return spec;
}

std::vector<AttributeSpec> manifest_specs(const nlohmann::json& manifest) {
  std::vector<AttributeSpec> out;
  for (const auto& entry : manifest.at("attributes")) out.push_back(spec_from_manifest(entry));
  return out;
}

std::vector<BeliefOutcome> reparse_beliefs(const ExperimentConfig& config, const std::vector<AttributeSpec>& specs,
                                           std::span<const TranscriptRecord> records, Money endowment) {
  std::vector<BeliefOutcome> out;
  for (const auto& spec : specs) {
    BeliefOutcome b{spec.name, std::nullopt, "no elicitation record"};
    for (const auto& r : records) {
      if (r.stage != "elicit" || r.attribute != spec.name || r.endowment_cents != endowment.cents()) continue;
      const auto parsed = config.strategy == ElicitationStrategy::CtxDollar
                              ? parse_dollar_belief(r.raw_response, spec, endowment, config.group_size)
                              : parse_ranking_belief(r.raw_response, spec, config.strategy);
      if (parsed.parsed()) {
        b.belief = *parsed.value;
        b.reason.clear();
      } else {
        b.reason = parsed.reason;
      }
      break;
    }
    out.push_back(std::move(b));
  }
  return out;
}

PopulationResult assemble_population(const ExperimentConfig& config, const std::string& model_id,
                                     const std::vector<AttributeSpec>& specs, const std::vector<BeliefOutcome>& beliefs,
                                     std::span<const TranscriptRecord> records, ConditioningMode mode, Money endowment) {
  PopulationResult result;
  result.model_id = model_id;
  result.strategy = std::string(to_string(config.strategy));
  result.mode = std::string(to_string(mode));
  result.endowment_cents = endowment.cents();

  std::vector<BeliefRecord> elicited;
  for (const auto& b : beliefs) {
    if (b.belief) elicited.push_back(*b.belief);
  }
  std::map<std::string, std::vector<std::string>> imposed;
  if ((mode == ConditioningMode::weak || mode == ConditioningMode::strong) && !elicited.empty()) {
    for (const auto& b : build_perturbed_prior_set(elicited, perturbation_for(config, mode))) {
      imposed[b.attribute] = b.ranking_descending;
    }
  }

  struct Sim {
    const TranscriptRecord* record;
    std::optional<Money> sent;
  };
  std::vector<Sim> sims;
  const std::string mode_tag(to_string(mode));
  for (const auto& r : records) {
    if (r.stage != "simulate" || r.mode != mode_tag || r.endowment_cents != endowment.cents()) continue;
    const auto parsed = extract_transfer(r.raw_response, endowment);
    sims.push_back(Sim{&r, parsed.parsed() ? std::optional<Money>(*parsed.value) : std::nullopt});
  }

  std::vector<double> rhos;
  std::vector<double> deltas;
  for (std::size_t t = 0; t < specs.size(); ++t) {
    const auto& spec = specs[t];
    AttributeOutcome a;
    a.attribute = spec.name;
    a.levels = spec.levels;
    a.belief = beliefs[t].belief;

    GroupedValues groups;
    for (const auto& level : spec.levels) groups.groups.emplace_back(level, std::vector<double>{});
    for (const auto& s : sims) {
      if (!s.sent) {
        ++a.n_excluded;
        continue;
      }
      const auto level = s.record->persona_attributes.find(spec.name);
      if (level == s.record->persona_attributes.end()) continue;
      const auto idx = std::find(spec.levels.begin(), spec.levels.end(), level->second) - spec.levels.begin();
      if (idx == static_cast<std::ptrdiff_t>(spec.levels.size())) continue;
      groups.groups[idx].second.push_back(s.sent->as_dollars());
      ++a.n_included;
    }

    std::vector<std::string> empty;
    std::size_t nonempty = 0;
    for (const auto& [level, xs] : groups.groups) {
      a.level_counts.emplace_back(level, static_cast<int>(xs.size()));
      if (xs.empty()) {
        empty.push_back(level);
        continue;
      }
      ++nonempty;
      double sum = 0.0;
      for (double x : xs) sum += x;
      a.level_means.emplace_back(level, sum / static_cast<double>(xs.size()));
    }
    if (nonempty >= 2) {
      const auto eta = eta_squared_from_values(groups);
      a.behavior_eta2 = eta.eta2;
      a.degenerate = eta.degenerate;
    }
    if (empty.empty()) a.behavioral_ranking = behavioral_ranking(groups).levels();

    if (a.belief) {
      a.reference = imposed.count(spec.name) ? imposed[spec.name] : a.belief->ranking_descending;
    }
    if (!a.belief) {
      a.missing_reason = fmt::format("belief excluded: {}", beliefs[t].reason);
    } else if (a.n_included == 0) {
      a.missing_reason = "every simulation excluded";
    } else if (!empty.empty()) {
      a.missing_reason = fmt::format("levels without observations: {}", fmt::join(empty, ", "));
    }
    if (!a.missing()) {
      const Ranking behavior(*a.behavioral_ranking);
      a.rho = spearman(Ranking(*a.reference), behavior);
      a.rho_vs_elicited = spearman(Ranking(a.belief->ranking_descending), behavior);
      a.delta_eta2 = effect_discrepancy(EffectSize{a.belief->omnibus_eta2, false},
                                        EffectSize{*a.behavior_eta2, a.degenerate});
      if (!a.degenerate) {
        rhos.push_back(*a.rho);
        deltas.push_back(*a.delta_eta2);
      }
    }
    result.attributes.push_back(std::move(a));
  }
  if (!rhos.empty()) {
    result.median_rho = median(rhos);
    result.median_delta_eta2 = median(deltas);
  }
  return result;
}

ojson beliefs_json(const std::vector<BeliefOutcome>& beliefs, Money endowment) {
  ojson out = ojson::array();
  for (const auto& b : beliefs) {
    ojson o{{"attribute", b.attribute}, {"endowment_cents", endowment.cents()}};
    if (b.belief) {
      o["status"] = "parsed";
      o["belief"] = to_json(*b.belief);
    } else {
      o["status"] = "excluded";
      o["reason"] = b.reason;
    }
    out.push_back(std::move(o));
  }
  return out;
}

IndividualResult assemble_individual(const ExperimentConfig& config, const std::string& model_id,
                                     std::span<const TranscriptRecord> records) {
  IndividualResult result;
  result.model_id = model_id;
  result.budget_mode = std::string(to_string(config.game.budget_mode));
  result.history_mode = std::string(to_string(config.history_mode));

  using Key = std::tuple<std::string, std::string, int>;  // archetype, persona, round
  std::map<Key, const TranscriptRecord*> forecasts;
  std::map<Key, const TranscriptRecord*> actions;
  std::set<std::string> personas;
  for (const auto& r : records) {
    if (!r.archetype || !r.round) continue;
    const Key key{*r.archetype, r.persona_id, *r.round};
    if (r.stage == "forecast") forecasts[key] = &r;
    else if (r.stage == "simulate") actions[key] = &r;
    else continue;
    personas.insert(r.persona_id);
  }

  std::vector<double> all_maes;
  for (int cap : config.archetypes) {
    const auto archetype = TrusteeArchetype::with_cap_dollars(cap);
    const std::string label = archetype.label();
    ArchetypeSeries series;
    series.archetype = label;
    std::vector<double> round_sum(config.game.rounds, 0.0);
    std::vector<int> round_n(config.game.rounds, 0);
    std::vector<double> maes;
    for (const auto& persona : personas) {
      Trajectory t;
      t.persona_id = persona;
      t.archetype = label;
      GameState state = GameState::start(config.game);
      while (state.active()) {
        const int r = state.next_round();
        const Key key{label, persona, r};
        const auto f = forecasts.find(key);
        if (f == forecasts.end()) {
          t.voided_at_round = r;
          t.void_reason = "missing forecast record";
          break;
        }
        const auto forecast = parse_forecast(f->second->raw_response, config.game.endowment);
        if (!forecast.parsed()) {
          t.voided_at_round = r;
          t.void_reason = fmt::format("forecast excluded: {}", forecast.reason);
          break;
        }
        const auto a = actions.find(key);
        if (a == actions.end()) {
          t.voided_at_round = r;
          t.void_reason = "missing simulation record";
          break;
        }
        const auto action = extract_transfer(a->second->raw_response, state.current_budget);
        if (!action.parsed()) {
          t.voided_at_round = r;
          t.void_reason = fmt::format("simulation excluded: {}", action.reason);
          break;
        }
        t.forecasts.push_back(static_cast<int>(forecast.value->whole_dollars()));
        t.actuals.push_back(static_cast<int>(action.value->whole_dollars()));
        state = play_round(state, *action.value, archetype).first;
      }
      const bool any_round = !t.actuals.empty();
      if (any_round && !t.voided_at_round) {
        std::vector<double> fs(t.forecasts.begin(), t.forecasts.end());
        std::vector<double> as(t.actuals.begin(), t.actuals.end());
        t.mae = mae(fs, as);
        maes.push_back(*t.mae);
        for (std::size_t i = 0; i < t.actuals.size(); ++i) {
          round_sum[i] += std::abs(t.forecasts[i] - t.actuals[i]);
          ++round_n[i];
        }
      }
      result.trajectories.push_back(std::move(t));
    }
    for (int r = 1; r <= config.game.rounds; ++r) {
      RoundCell cell;
      cell.round = r;
      cell.n_trajectories = round_n[r - 1];
      if (cell.n_trajectories > 0) cell.mae = round_sum[r - 1] / cell.n_trajectories;
      series.rounds.push_back(cell);
    }
    if (!maes.empty()) {
      double sum = 0.0;
      for (double m : maes) sum += m;
      series.overall_mae = sum / static_cast<double>(maes.size());
      all_maes.insert(all_maes.end(), maes.begin(), maes.end());
    }
    result.archetypes.push_back(std::move(series));
  }
  if (!all_maes.empty()) {
    double sum = 0.0;
    for (double m : all_maes) sum += m;
    result.overall_mae = sum / static_cast<double>(all_maes.size());
  }
  return result;
}

std::string dump_file(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

ResultFiles assemble_results(const nlohmann::json& manifest, std::span<const TranscriptRecord> records) {
  const auto kind = run_kind_from_string(manifest.at("kind").get<std::string>());
  const auto config = ExperimentConfig::from_json(manifest.at("config"));
  const auto model_id = manifest.at("model_id").get<std::string>();
  ResultFiles files;

  if (kind == RunKind::individual) {
    const auto result = assemble_individual(config, model_id, records);
    files["individual.json"] = dump_file(result.to_json());
    files["individual.csv"] = individual_csv(result);
    files["trajectories.csv"] = trajectories_csv(result);
    return files;
  }

  const auto specs = manifest_specs(manifest);
  if (kind == RunKind::elicit) {
    files["beliefs.json"] = dump_file(beliefs_json(reparse_beliefs(config, specs, records, config.game.endowment),
                                                   config.game.endowment));
    return files;
  }
  if (kind == RunKind::population) {
    const auto beliefs = reparse_beliefs(config, specs, records, config.game.endowment);
    const auto result = assemble_population(config, model_id, specs, beliefs, records, ConditioningMode::none,
                                            config.game.endowment);
    files["beliefs.json"] = dump_file(beliefs_json(beliefs, config.game.endowment));
    files["population.json"] = dump_file(result.to_json());
    files["population.csv"] = population_csv(result);
    return files;
  }
  if (kind == RunKind::conditioning) {
    const auto beliefs = reparse_beliefs(config, specs, records, config.game.endowment);
    ojson all = ojson::array();
    for (auto mode : config.modes) {
      const auto result = assemble_population(config, model_id, specs, beliefs, records, mode, config.game.endowment);
      files[fmt::format("population_{}.csv", to_string(mode))] = population_csv(result);
      all.push_back(result.to_json());
    }
    files["beliefs.json"] = dump_file(beliefs_json(beliefs, config.game.endowment));
    files["conditioning.json"] = dump_file(all);
    return files;
  }
  // ablation
  ojson all = ojson::array();
  ojson all_beliefs = ojson::array();
  for (int dollars : config.endowments) {
    const Money e = Money::from_dollars(dollars);
    const auto beliefs = reparse_beliefs(config, specs, records, e);
    const auto result = assemble_population(config, model_id, specs, beliefs, records, ConditioningMode::none, e);
    files[fmt::format("population_E{}.csv", dollars)] = population_csv(result);
    all.push_back(result.to_json());
    for (auto& b : beliefs_json(beliefs, e)) all_beliefs.push_back(b);
  }
  files["beliefs.json"] = dump_file(all_beliefs);
  files["ablation.json"] = dump_file(all);
  return files;
}

}  // namespace beliefbench

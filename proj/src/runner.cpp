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

#include "beliefbench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "beliefbench/digest.hpp"
#include "beliefbench/mock_agent.hpp"
#include "beliefbench/prompt_template.hpp"
#include "beliefbench/prompts.hpp"
#include "beliefbench/report.hpp"
#include "beliefbench/response_parser.hpp"

namespace beliefbench {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kManifestFile = "manifest.json";
constexpr std::string_view kCountsFile = "counts.json";
constexpr std::string_view kTranscriptFile = "transcript.jsonl";
constexpr std::string_view kPartialTranscriptFile = "transcript.partial.jsonl";

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open {}", path.string()));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(fmt::format("cannot write {}", path.string()));
}

// Runs fn(0..n-1) on up to `workers` threads. The first exception is rethrown after all threads stop.
template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    while (!failed) {
      const std::size_t i = next++;
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < count; ++t) threads.emplace_back(work);
  work();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::string bank_digest(const PersonaBank& bank) {
  std::ostringstream records;
  write_bank_records(bank, records);
  ojson specs = ojson::array();
  for (const auto& s : bank.specs()) specs.push_back({{"name", s.name}, {"levels", s.levels}});
  return sha256_hex(records.str() + "\n" + specs.dump());
}

ojson harness_decisions(const ExperimentConfig& config) {
  return {
      {"effect_label_mapping", {{"small", 0.035}, {"medium", 0.10}, {"large", 0.20}}},
      {"tie_policy", "declared level order"},
      {"budget_mode", to_string(config.game.budget_mode)},
      {"history_mode", to_string(config.history_mode)},
      {"transfer_extraction",
       "first \\$?(\\d+) candidate; invalid first candidate excluded unless a final-decision clause exists"},
      {"exclusion_policy", "excluded parses are dropped, never imputed or retried"},
      {"perturbation_search", "exhaustive for up to 8 levels, seeded swap hill-climb above"},
      {"median_policy", "over attributes that are neither missing nor degenerate"},
      {"transport_retries", config.max_attempts},
      {"max_tokens", config.sampling.max_tokens},
  };
}

}  // namespace

class ExperimentRunner::Session {
 public:
  Session(ExperimentRunner& runner, RunKind kind, ExperimentConfig config)
      : runner_(runner), kind_(kind), config_(std::move(config)) {
    config_.validate();
    for (const auto& name : config_.attributes) {
      const auto* spec = runner_.bank_.find_spec(name);
      if (!spec) throw ConfigError(fmt::format("attribute \"{}\" is not declared by the bank", name));
      specs_.push_back(spec->restricted_to(Split::test));
    }
    personas_ = sample_split(runner_.bank_, Split::test, config_.n_personas, config_.seed);

    const std::string bank_hash = bank_digest(runner_.bank_);
    const std::string model_id = runner_.agent_.model_id();
    run_id_ = sha256_hex(fmt::format("{}\n{}\n{}\n{}", to_string(kind_), config_.digest(), bank_hash, model_id))
                  .substr(0, 16);

    ojson attrs = ojson::array();
    for (const auto& s : specs_) attrs.push_back({{"name", s.name}, {"levels", s.levels}});
    ojson personas = ojson::array();
    for (const auto& p : personas_) personas.push_back(p.id);
    ojson templates = ojson::object();
    for (const auto& id : builtin_resource_ids()) templates[id] = sha256_hex(builtin_resource(id));

    manifest_["run_id"] = run_id_;
    manifest_["kind"] = to_string(kind_);
    manifest_["model_id"] = model_id;
    manifest_["seed"] = config_.seed;
    manifest_["config_digest"] = config_.digest();
    manifest_["bank_digest"] = bank_hash;
    manifest_["started_at"] = runner_.clock_();
    manifest_["config"] = config_.to_json();
    manifest_["attributes"] = std::move(attrs);
    manifest_["persona_ids"] = std::move(personas);
    manifest_["template_digests"] = std::move(templates);
    manifest_["harness_decisions"] = harness_decisions(config_);

    dir_ = config_.output_dir;
    std::filesystem::create_directories(dir_);
    const auto manifest_path = dir_ / kManifestFile;
    if (std::filesystem::exists(manifest_path)) {
      const auto existing = nlohmann::json::parse(read_file(manifest_path), nullptr, false);
      if (existing.is_discarded() || existing.value("run_id", "") != run_id_) {
        throw Error(fmt::format("{} already holds a different run", dir_.string()));
      }
    } else {
      write_file(manifest_path, manifest_.dump(2) + "\n");
    }
    partial_.open(dir_ / kPartialTranscriptFile, std::ios::binary | std::ios::trunc);
    if (!partial_) throw Error(fmt::format("cannot write transcript in {}", dir_.string()));
    if (auto* gateway = dynamic_cast<CachingAgent*>(&runner_.agent_)) start_stats_ = gateway->stats();
  }

  const ExperimentConfig& config() const { return config_; }
  const std::vector<AttributeSpec>& specs() const { return specs_; }
  const std::vector<Persona>& personas() const { return personas_; }

  std::string call(const std::string& prompt) {
    std::string response = runner_.agent_.complete(prompt);
    ++calls_;
    return response;
  }

  void record(TranscriptRecord r) {
    r.run_id = run_id_;
    r.prompt_digest = sha256_hex(r.prompt);
    std::lock_guard lock(mu_);
    partial_ << r.to_json().dump() << '\n';
    partial_.flush();
    records_.push_back(std::move(r));
  }

  // Elicits every configured attribute at one endowment; excluded beliefs are absent.
  std::vector<BeliefRecord> elicit(Money endowment) {
    std::vector<std::optional<BeliefRecord>> out(specs_.size());
    parallel_for(specs_.size(), config_.parallelism, [&](std::size_t i) {
      const auto& spec = specs_[i];
      TranscriptRecord r;
      r.stage = "elicit";
      r.attribute = spec.name;
      r.endowment_cents = endowment.cents();
      r.prompt = build_population_elicitation(config_.strategy, spec, endowment, config_.group_size);
      r.raw_response = call(r.prompt);
      const auto parsed = config_.strategy == ElicitationStrategy::CtxDollar
                              ? parse_dollar_belief(r.raw_response, spec, endowment, config_.group_size)
                              : parse_ranking_belief(r.raw_response, spec, config_.strategy);
      if (parsed.parsed()) {
        r.parse_status = "parsed";
        r.parsed_value = to_json(*parsed.value);
        out[i] = *parsed.value;
      } else {
        r.parse_status = "excluded";
        r.reason = parsed.reason;
      }
      record(std::move(r));
    });
    std::vector<BeliefRecord> beliefs;
    for (auto& b : out) {
      if (b) beliefs.push_back(std::move(*b));
    }
    return beliefs;
  }

  void simulate(ConditioningMode mode, Money endowment, const std::vector<BeliefRecord>& beliefs) {
    std::string prior;
    if (mode != ConditioningMode::none && !beliefs.empty()) {
      if (mode == ConditioningMode::self) {
        prior = build_prior_block(beliefs);
      } else {
        prior = build_prior_block(build_perturbed_prior_set(beliefs, perturbation_for(config_, mode)));
      }
    }
    parallel_for(personas_.size(), config_.parallelism, [&](std::size_t i) {
      const auto& persona = personas_[i];
      TranscriptRecord r;
      r.stage = "simulate";
      r.persona_id = persona.id;
      r.mode = std::string(to_string(mode));
      r.endowment_cents = endowment.cents();
      r.persona_attributes = persona.attributes;
      r.prompt = build_population_roleplay(persona, endowment, prior);
      r.raw_response = call(r.prompt);
      const auto parsed = extract_transfer(r.raw_response, endowment);
      set_transfer(r, parsed);
      record(std::move(r));
    });
  }

  void play_individual() {
    const std::size_t n = personas_.size() * config_.archetypes.size();
    parallel_for(n, config_.parallelism, [&](std::size_t i) {
      const auto& persona = personas_[i % personas_.size()];
      const auto archetype = TrusteeArchetype::with_cap_dollars(config_.archetypes[i / personas_.size()]);
      const std::string description = archetype_description(archetype);
      GameState state = GameState::start(config_.game);
      while (state.active()) {
        const int round = state.next_round();
        const std::string history = render_history(state.history);

        TranscriptRecord f = base_individual(persona, archetype, round, "forecast");
        f.prompt = build_individual_forecast(persona, description, round, config_.game.rounds, history,
                                             config_.game.endowment, config_.history_mode);
        f.raw_response = call(f.prompt);
        const auto forecast = parse_forecast(f.raw_response, config_.game.endowment);
        set_transfer(f, forecast);
        record(std::move(f));
        if (!forecast.parsed()) return;

        TranscriptRecord s = base_individual(persona, archetype, round, "simulate");
        s.prompt = build_individual_roleplay(persona, round, config_.game.rounds, state.current_budget, history, "");
        s.raw_response = call(s.prompt);
        const auto action = extract_transfer(s.raw_response, state.current_budget);
        set_transfer(s, action);
        record(std::move(s));
        if (!action.parsed()) return;
        state = play_round(state, *action.value, archetype).first;
      }
    });
  }

  ResultFiles finish() {
    partial_.close();
    std::sort(records_.begin(), records_.end(),
              [](const TranscriptRecord& a, const TranscriptRecord& b) { return a.sort_key() < b.sort_key(); });
    std::string transcript;
    std::int64_t exclusions = 0;
    for (const auto& r : records_) {
      transcript += r.to_json().dump() + "\n";
      if (r.parse_status == "excluded") ++exclusions;
    }
    write_file(dir_ / kTranscriptFile, transcript);
    std::filesystem::remove(dir_ / kPartialTranscriptFile);

    auto files = assemble_results(manifest_, records_);
    for (const auto& [name, content] : files) write_file(dir_ / name, content);

    GatewayStats stats;
    stats.requests = calls_;
    if (auto* gateway = dynamic_cast<CachingAgent*>(&runner_.agent_)) {
      const auto now = gateway->stats();
      stats.requests = now.requests - start_stats_.requests;
      stats.cache_hits = now.cache_hits - start_stats_.cache_hits;
      stats.inner_calls = now.inner_calls - start_stats_.inner_calls;
    } else {
      stats.inner_calls = calls_;
    }
    runner_.stats_ = stats;
    const ojson counts{{"run_id", run_id_},
                       {"records", records_.size()},
                       {"calls", stats.requests},
                       {"cache_hits", stats.cache_hits},
                       {"agent_calls", stats.inner_calls},
                       {"exclusions", exclusions}};
    write_file(dir_ / kCountsFile, counts.dump(2) + "\n");
    return files;
  }

 private:
  static void set_transfer(TranscriptRecord& r, const ParseOutcome<Money>& parsed) {
    if (parsed.parsed()) {
      r.parse_status = "parsed";
      r.parsed_value = parsed.value->whole_dollars();
    } else {
      r.parse_status = "excluded";
      r.reason = parsed.reason;
    }
  }

  TranscriptRecord base_individual(const Persona& persona, const TrusteeArchetype& archetype, int round,
                                   std::string stage) const {
    TranscriptRecord r;
    r.stage = std::move(stage);
    r.persona_id = persona.id;
    r.round = round;
    r.archetype = archetype.label();
    r.endowment_cents = config_.game.endowment.cents();
    r.persona_attributes = persona.attributes;
    return r;
  }

  ExperimentRunner& runner_;
  RunKind kind_;
  ExperimentConfig config_;
  std::vector<AttributeSpec> specs_;
  std::vector<Persona> personas_;
  std::string run_id_;
  ojson manifest_;
  std::filesystem::path dir_;
  GatewayStats start_stats_;
  std::atomic<std::int64_t> calls_{0};

  std::mutex mu_;
  std::ofstream partial_;
  std::vector<TranscriptRecord> records_;
};

ExperimentRunner::ExperimentRunner(ExperimentConfig config, Agent& agent, const PersonaBank& bank, Clock clock)
    : config_(std::move(config)), agent_(agent), bank_(bank), clock_(std::move(clock)) {
  config_.validate();
}

std::vector<BeliefRecord> ExperimentRunner::run_elicitation() {
  Session session(*this, RunKind::elicit, config_);
  auto beliefs = session.elicit(config_.game.endowment);
  session.finish();
  return beliefs;
}

PopulationResult ExperimentRunner::run_population() {
  Session session(*this, RunKind::population, config_);
  const auto beliefs = session.elicit(config_.game.endowment);
  session.simulate(ConditioningMode::none, config_.game.endowment, beliefs);
  const auto files = session.finish();
  return PopulationResult::from_json(nlohmann::json::parse(files.at("population.json")));
}

std::map<ConditioningMode, PopulationResult> ExperimentRunner::run_conditioning(
    const std::vector<ConditioningMode>& modes) {
  ExperimentConfig config = config_;
  config.modes = modes;
  Session session(*this, RunKind::conditioning, config);
  const auto beliefs = session.elicit(config.game.endowment);
  for (auto mode : config.modes) session.simulate(mode, config.game.endowment, beliefs);
  const auto files = session.finish();
  std::map<ConditioningMode, PopulationResult> out;
  for (const auto& j : nlohmann::json::parse(files.at("conditioning.json"))) {
    auto result = PopulationResult::from_json(j);
    out.emplace(conditioning_mode_from_string(result.mode), std::move(result));
  }
  return out;
}

IndividualResult ExperimentRunner::run_individual() {
  Session session(*this, RunKind::individual, config_);
  session.play_individual();
  const auto files = session.finish();
  return IndividualResult::from_json(nlohmann::json::parse(files.at("individual.json")));
}

std::map<std::int64_t, PopulationResult> ExperimentRunner::run_endowment_ablation(const std::vector<int>& endowments) {
  ExperimentConfig config = config_;
  config.endowments = endowments;
  Session session(*this, RunKind::ablation, config);
  for (int dollars : config.endowments) {
    const Money e = Money::from_dollars(dollars);
    const auto beliefs = session.elicit(e);
    session.simulate(ConditioningMode::none, e, beliefs);
  }
  const auto files = session.finish();
  std::map<std::int64_t, PopulationResult> out;
  for (const auto& j : nlohmann::json::parse(files.at("ablation.json"))) {
    auto result = PopulationResult::from_json(j);
    out.emplace(result.endowment_cents, std::move(result));
  }
  return out;
}

std::filesystem::path default_data_dir() {
#ifdef BELIEFBENCH_DATA_DIR
  return BELIEFBENCH_DATA_DIR;
#else
  return "data";
#endif
}

AgentStack make_agent_stack(const ExperimentConfig& config) {
  AgentStack stack;
  Clock clock = utc_now;
  std::optional<std::filesystem::path> cache_dir = config.cache_dir;
  if (config.mock) {
    const auto policy_path = config.mock_policy.value_or(default_data_dir() / "mock_policy.json");
    stack.inner = std::make_unique<MockAgent>(MockPolicy::load(policy_path), config.sampling);
    clock = [] { return std::string("1970-01-01T00:00:00Z"); };
  } else {
    RetryPolicy retry;
    retry.max_attempts = config.max_attempts;
    stack.inner = std::make_unique<HttpAgent>(AgentEndpoint{config.endpoint, config.model_id, config.api_key_env},
                                              config.sampling, retry);
    if (!cache_dir) cache_dir = config.output_dir.parent_path() / "cache";
  }
  stack.gateway = std::make_unique<CachingAgent>(*stack.inner, cache_dir, config.parallelism, clock);
  return stack;
}

PersonaBank load_configured_bank(const ExperimentConfig& config) {
  const auto specs = config.specs.value_or(default_data_dir() / "attributes.json");
  const auto records = config.bank.value_or(default_data_dir() / "minibank_test.jsonl");
  return load_bank(records, specs);
}

namespace {

// Re-parses one raw response and compares it with the recorded parse. Role-play
// records of carryover games are bounded by a budget only the game replay in
// assemble_results knows, so only their digest is checked here.
std::optional<std::string> recheck_record(const ExperimentConfig& config,
                                          const std::map<std::string, AttributeSpec>& specs,
                                          const TranscriptRecord& r) {
  if (sha256_hex(r.prompt) != r.prompt_digest) return "prompt digest mismatch";
  std::string status;
  nlohmann::json value;
  const Money endowment =
      r.endowment_cents ? Money::from_cents(*r.endowment_cents) : config.game.endowment;
  auto take = [&](const auto& outcome, auto&& to_value) {
    status = outcome.parsed() ? "parsed" : "excluded";
    if (outcome.parsed()) value = to_value(*outcome.value);
  };
  auto dollars = [](Money m) { return nlohmann::json(m.whole_dollars()); };
  if (r.stage == "elicit") {
    const auto spec = r.attribute ? specs.find(*r.attribute) : specs.end();
    if (spec == specs.end()) return "elicitation record for an undeclared attribute";
    auto belief_value = [](const BeliefRecord& b) { return nlohmann::json(to_json(b)); };
    if (config.strategy == ElicitationStrategy::CtxDollar) {
      take(parse_dollar_belief(r.raw_response, spec->second, endowment, config.group_size), belief_value);
    } else {
      take(parse_ranking_belief(r.raw_response, spec->second, config.strategy), belief_value);
    }
  } else if (r.stage == "forecast") {
    take(parse_forecast(r.raw_response, endowment), dollars);
  } else if (r.stage == "simulate") {
    if (r.round && config.game.budget_mode == BudgetMode::carryover) return std::nullopt;
    take(extract_transfer(r.raw_response, endowment), dollars);
  } else {
    return fmt::format("unknown stage \"{}\"", r.stage);
  }
  if (status != r.parse_status) {
    return fmt::format("recorded {} but the response re-parses as {}", r.parse_status, status);
  }
  if (status == "parsed" && value != r.parsed_value) return "recorded value differs from the re-parse";
  return std::nullopt;
}

}  // namespace

AuditReport replay_audit(const std::filesystem::path& run_dir) {
  AuditReport report;
  const auto manifest = nlohmann::json::parse(read_file(run_dir / kManifestFile), nullptr, false);
  if (manifest.is_discarded()) {
    report.mismatches.push_back("manifest.json: not valid JSON");
    return report;
  }
  const auto records = read_transcript(run_dir / kTranscriptFile);
  const auto run_id = manifest.value("run_id", "");
  for (const auto& r : records) {
    if (r.run_id != run_id) {
      report.mismatches.push_back(fmt::format("transcript.jsonl: record from run {} in run {}", r.run_id, run_id));
      return report;
    }
  }
  const auto config = ExperimentConfig::from_json(manifest.at("config"));
  std::map<std::string, AttributeSpec> specs;
  for (const auto& entry : manifest.at("attributes")) {
    AttributeSpec spec;
    spec.name = entry.at("name").get<std::string>();
    spec.levels = entry.at("levels").get<std::vector<std::string>>();
    specs.emplace(spec.name, std::move(spec));
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (auto problem = recheck_record(config, specs, records[i])) {
      report.mismatches.push_back(fmt::format("transcript.jsonl:{}: {}", i + 1, *problem));
    }
  }
  report.checked.push_back("transcript.jsonl");

  const auto files = assemble_results(manifest, records);
  for (const auto& [name, content] : files) {
    report.checked.push_back(name);
    const auto path = run_dir / name;
    if (!std::filesystem::exists(path)) {
      report.mismatches.push_back(fmt::format("{}: missing", name));
    } else if (read_file(path) != content) {
      report.mismatches.push_back(fmt::format("{}: differs from the transcript recomputation", name));
    }
  }

  const auto report_dir = run_dir / "report";
  if (report.ok() && std::filesystem::is_directory(report_dir)) {
    for (auto format : {ReportFormat::csv, ReportFormat::markdown}) {
      for (const auto& [name, content] : build_reports({run_dir}, format)) {
        const auto path = report_dir / name;
        if (!std::filesystem::exists(path)) continue;
        report.checked.push_back("report/" + name);
        if (read_file(path) != content) {
          report.mismatches.push_back(fmt::format("report/{}: differs from the result files", name));
        }
      }
    }
  }
  return report;
}

}  // namespace beliefbench

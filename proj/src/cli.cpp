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

#include "beliefbench/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "beliefbench/report.hpp"
#include "beliefbench/runner.hpp"

namespace beliefbench {

namespace {

struct GlobalOptions {
  std::string config;
  std::uint64_t seed = 0;
  bool mock = false;
  std::string out;
  std::string endpoint;
  std::string model;
  std::string mock_policy;
  std::string bank;
  std::string specs;
  std::string cache_dir;
  int parallel = 0;
  std::string strategy;
  std::size_t n_personas = 0;
  std::vector<std::string> attributes;

  CLI::Option* seed_opt = nullptr;
};

struct RunOptions {
  std::vector<std::string> modes;
  std::vector<int> endowments;
  std::vector<int> archetypes;
  int rounds = 0;
  std::string budget_mode;
  std::string history_mode;
  std::string format = "csv";
  std::vector<std::string> runs;
  std::string split = "test";
  std::size_t n = 0;
};

ExperimentConfig build_config(const GlobalOptions& g, const RunOptions& r, RunKind kind) {
  ExperimentConfig c;
  bool out_from_config = false;
  if (!g.config.empty()) {
    std::ifstream in(g.config);
    if (!in) throw ConfigError(fmt::format("cannot open config {}", g.config));
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError(fmt::format("{}: not valid JSON", g.config));
    out_from_config = j.is_object() && j.contains("output_dir");
    c = ExperimentConfig::load(g.config);
  }
  if (g.seed_opt && g.seed_opt->count() > 0) c.seed = g.seed;
  if (g.mock) c.mock = true;
  if (!g.endpoint.empty()) c.endpoint = g.endpoint;
  if (!g.model.empty()) c.model_id = g.model;
  if (!g.mock_policy.empty()) c.mock_policy = g.mock_policy;
  if (!g.bank.empty()) c.bank = g.bank;
  if (!g.specs.empty()) c.specs = g.specs;
  if (!g.cache_dir.empty()) c.cache_dir = g.cache_dir;
  if (g.parallel > 0) c.parallelism = g.parallel;
  if (!g.strategy.empty()) c.strategy = strategy_from_string(g.strategy);
  if (g.n_personas > 0) c.n_personas = g.n_personas;
  if (!g.attributes.empty()) c.attributes = g.attributes;
  if (!r.modes.empty()) {
    c.modes.clear();
    for (const auto& m : r.modes) c.modes.push_back(conditioning_mode_from_string(m));
  }
  if (!r.endowments.empty()) c.endowments = r.endowments;
  if (!r.archetypes.empty()) c.archetypes = r.archetypes;
  if (r.rounds > 0) c.game.rounds = r.rounds;
  if (!r.budget_mode.empty()) c.game.budget_mode = budget_mode_from_string(r.budget_mode);
  if (!r.history_mode.empty()) c.history_mode = history_mode_from_string(r.history_mode);
  if (!g.out.empty()) c.output_dir = g.out;
  else if (!out_from_config) c.output_dir = std::filesystem::path("runs") / std::string(to_string(kind));
  if (!c.mock && c.endpoint.empty()) {
    throw ConfigError("no agent configured: pass --mock or --endpoint URL --model ID");
  }
  c.validate();
  return c;
}

std::string rho_summary(const PopulationResult& r) {
  return fmt::format("median rho {}, median |delta eta2| {}", format_fixed(r.median_rho, 2),
                     format_fixed(r.median_delta_eta2, 2));
}

int run_experiment(RunKind kind, const GlobalOptions& g, const RunOptions& r, std::ostream& out) {
  const auto config = build_config(g, r, kind);
  const auto bank = load_configured_bank(config);
  auto stack = make_agent_stack(config);
  Clock clock = utc_now;
  if (config.mock) clock = [] { return std::string("1970-01-01T00:00:00Z"); };
  ExperimentRunner runner(config, *stack.gateway, bank, clock);

  switch (kind) {
    case RunKind::elicit: {
      const auto beliefs = runner.run_elicitation();
      out << fmt::format("elicited {} of {} attributes\n", beliefs.size(), config.attributes.size());
      break;
    }
    case RunKind::population:
      out << "population: " << rho_summary(runner.run_population()) << "\n";
      break;
    case RunKind::conditioning:
      for (const auto& [mode, result] : runner.run_conditioning(config.modes)) {
        out << fmt::format("conditioning {}: {}\n", to_string(mode), rho_summary(result));
      }
      break;
    case RunKind::individual: {
      const auto result = runner.run_individual();
      out << fmt::format("individual: overall MAE {}\n", format_fixed(result.overall_mae, 3));
      break;
    }
    case RunKind::ablation:
      for (const auto& [cents, result] : runner.run_endowment_ablation(config.endowments)) {
        out << fmt::format("ablation ${}: {}\n", Money::from_cents(cents).to_string(), rho_summary(result));
      }
      break;
  }
  const auto& stats = runner.last_stats();
  out << fmt::format("wrote {} ({} calls, {} cache hits)\n", config.output_dir.string(), stats.requests,
                     stats.cache_hits);
  return 0;
}

PersonaBank bank_from(const GlobalOptions& g) {
  ExperimentConfig c;
  if (!g.config.empty()) c = ExperimentConfig::load(g.config);
  if (!g.bank.empty()) c.bank = g.bank;
  if (!g.specs.empty()) c.specs = g.specs;
  return load_configured_bank(c);
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Belief-behavior consistency benchmark for role-playing agents in the trust game", "beliefbench"};
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOptions g;
  RunOptions r;
  app.add_option("--config", g.config, "JSON config file");
  g.seed_opt = app.add_option("--seed", g.seed, "master seed");
  app.add_flag("--mock", g.mock, "use the deterministic mock agent");
  app.add_option("--out", g.out, "output directory (or file for bank augment)");
  app.add_option("--endpoint", g.endpoint, "OpenAI-compatible base URL");
  app.add_option("--model", g.model, "model id sent to the endpoint");
  app.add_option("--mock-policy", g.mock_policy, "mock policy JSON");
  app.add_option("--bank", g.bank, "persona records (JSON lines)");
  app.add_option("--specs", g.specs, "attribute sidecar JSON");
  app.add_option("--cache-dir", g.cache_dir, "response cache directory");
  app.add_option("--parallel", g.parallel, "concurrent agent requests");
  app.add_option("--strategy", g.strategy, "NoCtxTr | CtxTr | CtxDollar");
  app.add_option("--n-personas", g.n_personas, "personas sampled from the test split");
  app.add_option("--attributes", g.attributes, "attributes to evaluate");

  auto* bank = app.add_subcommand("bank", "validate, augment or sample the persona bank");
  bank->require_subcommand(1);
  auto* bank_validate = bank->add_subcommand("validate", "load the bank and report split counts");
  auto* bank_augment = bank->add_subcommand("augment", "fill missing Big-Five attributes");
  auto* bank_sample = bank->add_subcommand("sample", "draw personas from a split");
  bank_sample->add_option("--split", r.split, "train | val | test");
  bank_sample->add_option("--n", r.n, "number of personas")->required();

  auto* elicit = app.add_subcommand("elicit", "elicit beliefs for every attribute");
  auto* population = app.add_subcommand("population", "population-level consistency run");
  auto* conditioning = app.add_subcommand("conditioning", "belief conditioning run");
  conditioning->add_option("--modes", r.modes, "none self weak strong");
  auto* individual = app.add_subcommand("individual", "multi-round forecast versus action run");
  individual->add_option("--archetypes", r.archetypes, "trustee return caps in dollars");
  individual->add_option("--rounds", r.rounds, "rounds per game");
  individual->add_option("--budget-mode", r.budget_mode, "reset | carryover");
  individual->add_option("--history-mode", r.history_mode, "with-history | without-history");
  auto* ablate = app.add_subcommand("ablate", "population runs across endowments");
  ablate->add_option("--endowments", r.endowments, "endowments in whole dollars");
  auto* report = app.add_subcommand("report", "emit tables from run directories");
  report->add_option("runs", r.runs, "run directories")->required();
  report->add_option("--format", r.format, "csv | markdown");
  auto* audit = app.add_subcommand("replay-audit", "recompute results from transcripts and compare");
  audit->add_option("run", r.runs, "run directory")->required()->expected(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*bank_validate) {
      const auto b = bank_from(g);
      out << fmt::format("ok: {} personas, {} attributes (train {}, val {}, test {})\n", b.personas().size(),
                         b.specs().size(), b.count(Split::train), b.count(Split::val), b.count(Split::test));
      return 0;
    }
    if (*bank_augment) {
      const auto augmented = augment_big_five(bank_from(g), g.seed);
      if (g.out.empty()) {
        write_bank_records(augmented, out);
      } else {
        std::ofstream file(g.out, std::ios::binary | std::ios::trunc);
        write_bank_records(augmented, file);
        if (!file) throw Error(fmt::format("cannot write {}", g.out));
        out << fmt::format("wrote {} personas to {}\n", augmented.personas().size(), g.out);
      }
      return 0;
    }
    if (*bank_sample) {
      const auto b = bank_from(g);
      for (const auto& p : sample_split(b, split_from_string(r.split), r.n, g.seed)) {
        out << p.id << "\n" << render_persona_text(p) << "\n\n";
      }
      return 0;
    }
    if (*elicit) return run_experiment(RunKind::elicit, g, r, out);
    if (*population) return run_experiment(RunKind::population, g, r, out);
    if (*conditioning) return run_experiment(RunKind::conditioning, g, r, out);
    if (*individual) return run_experiment(RunKind::individual, g, r, out);
    if (*ablate) return run_experiment(RunKind::ablation, g, r, out);
    if (*report) {
      std::vector<std::filesystem::path> runs(r.runs.begin(), r.runs.end());
      const auto files = build_reports(runs, report_format_from_string(r.format));
      const std::filesystem::path dir = g.out.empty() ? runs.front() / "report" : std::filesystem::path(g.out);
      std::filesystem::create_directories(dir);
      for (const auto& [name, content] : files) {
        std::ofstream file(dir / name, std::ios::binary | std::ios::trunc);
        file << content;
        if (!file) throw Error(fmt::format("cannot write {}", (dir / name).string()));
        out << (dir / name).string() << "\n";
      }
      if (files.empty()) out << "no tables: the runs hold no population, conditioning, individual or ablation results\n";
      return 0;
    }
    if (*audit) {
      const auto result = replay_audit(r.runs.front());
      for (const auto& name : result.checked) out << "checked " << name << "\n";
      for (const auto& m : result.mismatches) err << "mismatch: " << m << "\n";
      out << (result.ok() ? "replay audit passed\n" : "replay audit FAILED\n");
      return result.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace beliefbench
